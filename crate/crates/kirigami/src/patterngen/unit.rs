//! Standalone ring and loop-unit patterns.
//!
//! These are the building blocks studied on their own: the ninefold ring of
//! platforms and square halves around one hollow, and the full loop unit
//! that adds the core and its trapezoids. Both are cut out of the canonical
//! source for the requested order and relabeled p1..p3N, q1..qN+1.

use super::build::{build_radial_pattern, PatternSpec};
use super::{FaceRole, KirigamiPattern, LoopUnit};
use crate::error::{KirigamiError, Result};
use crate::solids::{build_polyhedron, Polyhedron, SolidId};
use std::collections::BTreeMap;

/// Canonical source and roles for a loop unit of the given order: hexagon
/// platforms around a hollow 2N-gon, squares in between.
fn canonical_roles(order: usize) -> Result<(Polyhedron, Vec<FaceRole>)> {
    let id = match order {
        3 => SolidId::TruncatedOctahedron,
        4 => SolidId::TruncatedCuboctahedron,
        5 => SolidId::TruncatedIcosidodecahedron,
        _ => {
            return Err(KirigamiError::InvalidParameter(format!(
                "loop units exist for orders 3, 4 and 5, not {order}"
            )))
        }
    };
    let poly = build_polyhedron(id, 1.0)?;
    let max_side = poly.faces.iter().map(|f| f.vertices.len()).max().unwrap();
    let roles = poly
        .faces
        .iter()
        .enumerate()
        .map(|(f, face)| match face.vertices.len() {
            4 => FaceRole::FoldedSecondary,
            n if n == max_side && id != SolidId::TruncatedOctahedron => FaceRole::FoldedPrimary,
            _ if id != SolidId::TruncatedOctahedron => FaceRole::Reserved,
            // Both families are hexagons on the truncated octahedron; the
            // hollow family is the one whose normals have a positive
            // component product.
            _ => {
                let n = poly.face_normal(f);
                if n.x * n.y * n.z > 0.0 {
                    FaceRole::FoldedPrimary
                } else {
                    FaceRole::Reserved
                }
            }
        })
        .collect();
    Ok((poly, roles))
}

/// Cut one unit out of a full pattern and relabel its panels.
fn extract_unit(
    pattern: &KirigamiPattern,
    unit: &LoopUnit,
    include_hollow_assembly: bool,
    name: &str,
) -> KirigamiPattern {
    let n = unit.order;
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    // Ring panels p1..p3N: platform, then the two bridge halves, repeated.
    for (k, circuit) in unit.circuits.iter().enumerate() {
        rename.entry(circuit[0].clone()).or_insert(format!("p{}", 3 * k + 1));
        rename.entry(circuit[1].clone()).or_insert(format!("p{}", 3 * k + 2));
        rename.entry(circuit[2].clone()).or_insert(format!("p{}", 3 * k + 3));
    }
    if include_hollow_assembly {
        // Trapezoid of attachment k closes circuit k as its last panel.
        for (k, circuit) in unit.circuits.iter().enumerate() {
            rename.entry(circuit[6].clone()).or_insert(format!("q{}", k + 1));
        }
        rename.entry(unit.circuits[0][5].clone()).or_insert(format!("q{}", n + 1));
    }

    let sheets: Vec<_> = pattern
        .sheets
        .iter()
        .filter(|s| rename.contains_key(&s.id))
        .map(|s| {
            let mut s = s.clone();
            s.id = rename[&s.id].clone();
            s
        })
        .collect();
    let hinges: Vec<_> = pattern
        .hinges
        .iter()
        .filter(|h| rename.contains_key(&h.panel_a) && rename.contains_key(&h.panel_b))
        .map(|h| {
            let mut h = h.clone();
            h.panel_a = rename[&h.panel_a].clone();
            h.panel_b = rename[&h.panel_b].clone();
            h
        })
        .collect();

    let mut profile = pattern.profile.clone();
    profile.motions = pattern
        .profile
        .motions
        .iter()
        .filter(|(id, _)| rename.contains_key(*id))
        .map(|(id, m)| (rename[id].clone(), m.clone()))
        .collect();
    profile.driving_hinge = if include_hollow_assembly {
        let core = format!("q{}", n + 1);
        let q1 = "q1".to_string();
        hinges
            .iter()
            .position(|h| h.panel_a == core && h.panel_b == q1)
            .expect("unit keeps its core hinge")
    } else {
        0
    };

    let units = if include_hollow_assembly {
        vec![LoopUnit {
            hollow_face: unit.hollow_face,
            order: n,
            class: unit.class,
            sheets: {
                let mut ids: Vec<String> = (1..=3 * n).map(|k| format!("p{k}")).collect();
                ids.extend((1..=n + 1).map(|k| format!("q{k}")));
                ids
            },
            circuits: unit
                .circuits
                .iter()
                .map(|c| c.iter().map(|id| rename[id].clone()).collect())
                .collect(),
        }]
    } else {
        Vec::new()
    };

    let out = KirigamiPattern {
        name: name.to_string(),
        source: pattern.source,
        edge_length: pattern.edge_length,
        sheets,
        hinges,
        ties: vec![],
        units,
        profile,
        superposed: false,
    };
    out.validate().expect("extracted unit stays consistent");
    out
}

/// Full pattern for the canonical source of one order, used both by the
/// standalone units and by tests that need the surrounding context.
pub fn canonical_pattern(order: usize) -> Result<KirigamiPattern> {
    let (poly, roles) = canonical_roles(order)?;
    build_radial_pattern(&PatternSpec {
        poly: &poly,
        roles,
        name: format!("canonical order-{order} source"),
        secondary_hollows: false,
        flap_h: None,
    })
}

/// The loop unit of the given order: 4N+1 sheets around one hollow, with
/// core and trapezoids.
pub fn build_loop_unit(order: usize) -> Result<KirigamiPattern> {
    let pattern = canonical_pattern(order)?;
    let unit = &pattern.units[0];
    Ok(extract_unit(
        &pattern,
        unit,
        true,
        &format!("order-{order} loop unit"),
    ))
}

/// The ninefold ring: three platforms and six square halves closed in a
/// single circuit, without the hollow assembly.
pub fn build_ninefold_ring() -> Result<KirigamiPattern> {
    let pattern = canonical_pattern(3)?;
    let unit = &pattern.units[0];
    Ok(extract_unit(&pattern, unit, false, "ninefold ring"))
}
