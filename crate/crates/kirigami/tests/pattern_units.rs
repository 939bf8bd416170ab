//! Cut-pattern construction: panel counts, strip geometry, and the
//! closed-form radial fold map checked hinge by hinge.

use kirigami::patterngen::foldmap::{
    driving_dihedral, radial_placements, travel_of_driving_angle,
};
use kirigami::patterngen::unit::{build_loop_unit, build_ninefold_ring, canonical_pattern};
use kirigami::patterngen::{
    build_radial_pattern, FaceRole, FoldSign, HingeLabel, KirigamiPattern, PatternSpec, SheetRole,
};
use kirigami::solids::{build_polyhedron, SolidId};
use std::f64::consts::PI;

const SQRT_3_OVER_8: f64 = 0.6123724356957945;

/// Every hinge must stay closed under the fold map: both panels carry their
/// copy of the axis to the same world segment.
fn assert_foldmap_closes(pattern: &KirigamiPattern, samples: usize) {
    let s_end = pattern.profile.s_end;
    for i in 0..=samples {
        let s = s_end * i as f64 / samples as f64;
        let placed = radial_placements(pattern, s);
        for (h, hinge) in pattern.hinges.iter().enumerate() {
            let (a0, a1) = pattern.world_axis(h);
            let da = &placed[&hinge.panel_a];
            let db = &placed[&hinge.panel_b];
            for p in [a0, a1] {
                let gap = (da.apply(&p) - db.apply(&p)).norm();
                assert!(
                    gap < 1e-9,
                    "hinge {h} ({} / {}) opens by {gap:.3e} at s = {s:.4}",
                    hinge.panel_a,
                    hinge.panel_b
                );
            }
        }
    }
}

fn count_hinges(pattern: &KirigamiPattern, label: HingeLabel, sign: FoldSign) -> usize {
    pattern
        .hinges
        .iter()
        .filter(|h| h.label == label && h.sign == sign)
        .count()
}

#[test]
fn ninefold_ring_panels_and_parallel_axes() {
    let ring = build_ninefold_ring().unwrap();
    assert_eq!(ring.sheets.len(), 9);
    assert_eq!(ring.hinges.len(), 9);
    assert_eq!(
        count_hinges(&ring, HingeLabel::PlatformSquare, FoldSign::Mountain),
        6
    );
    assert_eq!(count_hinges(&ring, HingeLabel::SquareCrease, FoldSign::Valley), 3);
    // The nine axes fall into three parallel classes of three: each bridge
    // square contributes two platform edges and its middle crease.
    let dirs: Vec<_> = (0..9)
        .map(|h| {
            let (p0, p1) = ring.world_axis(h);
            (p1 - p0).normalize()
        })
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (h, d) in dirs.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|c| dirs[c[0]].dot(d).abs() > 1.0 - 1e-9)
        {
            Some(c) => c.push(h),
            None => classes.push(vec![h]),
        }
    }
    assert_eq!(classes.len(), 3);
    assert!(classes.iter().all(|c| c.len() == 3));
}

#[test]
fn loop_unit_sizes_follow_the_order() {
    for (order, sheets, hinges) in [(3, 13, 15), (4, 17, 20), (5, 21, 25)] {
        let unit = build_loop_unit(order).unwrap();
        assert_eq!(unit.sheets.len(), sheets, "order {order} sheets");
        assert_eq!(unit.hinges.len(), hinges, "order {order} hinges");
        assert_eq!(unit.units.len(), 1);
        let loop_unit = &unit.units[0];
        assert_eq!(loop_unit.circuits.len(), order);
        assert!(loop_unit.circuits.iter().all(|c| c.len() == 7));
        // Relabeled ids: p1..p3N ring panels, q1..qN trapezoids, core last.
        for k in 1..=3 * order {
            assert!(unit.sheet(&format!("p{k}")).is_some());
        }
        for k in 1..=order + 1 {
            assert!(unit.sheet(&format!("q{k}")).is_some());
        }
        let driving = &unit.hinges[unit.profile.driving_hinge];
        assert_eq!(driving.panel_a, format!("q{}", order + 1));
        assert_eq!(driving.panel_b, "q1");
        assert_eq!(driving.label, HingeLabel::CoreTrapezoid);
    }
}

#[test]
fn canonical_pattern_counts() {
    let p3 = canonical_pattern(3).unwrap();
    assert_eq!(p3.sheets.len(), 32);
    assert_eq!(p3.hinges.len(), 42);
    assert_eq!(p3.units.len(), 4);

    let p4 = canonical_pattern(4).unwrap();
    assert_eq!(p4.sheets.len(), 62);
    assert_eq!(p4.hinges.len(), 84);
    assert_eq!(p4.units.len(), 6);

    let p5 = canonical_pattern(5).unwrap();
    assert_eq!(p5.sheets.len(), 152);
    assert_eq!(p5.hinges.len(), 210);
    assert_eq!(p5.units.len(), 12);
}

#[test]
fn hollow_strip_geometry_is_frozen() {
    // Hexagon platforms around a hollow hexagon: strip length is the gap
    // between the hollow's apothem and the core triangle's.
    let p3 = canonical_pattern(3).unwrap();
    let c3 = &p3.profile.classes[0];
    assert!((c3.ell - 1.0 / 3.0_f64.sqrt()).abs() < 1e-12);
    assert!((c3.cos_beta - 1.0 / 3.0).abs() < 1e-12);
    assert!((c3.core_edge - 1.0).abs() < 1e-12);
    assert!((c3.v0.x - c3.ell).abs() < 1e-12);
    assert!(c3.v0.y.abs() < 1e-12);
    assert!((p3.profile.s_end - SQRT_3_OVER_8).abs() < 1e-12);

    // Octagonal hollow: apothem gap between the octagon and the core square.
    let p4 = canonical_pattern(4).unwrap();
    let c4 = &p4.profile.classes[0];
    assert!((c4.ell - 0.5 * 2.0_f64.sqrt()).abs() < 1e-12);
    assert!((c4.cos_beta - 1.0 / 3.0_f64.sqrt()).abs() < 1e-12);
    assert!((p4.profile.s_end - 0.5 * 3.0_f64.sqrt()).abs() < 1e-12);

    // Decagonal hollow.
    let p5 = canonical_pattern(5).unwrap();
    let c5 = &p5.profile.classes[0];
    let ell5 = 0.5 * ((PI / 10.0).tan().recip() - (PI / 5.0).tan().recip());
    assert!((c5.ell - ell5).abs() < 1e-12);

    // The travel span must agree with the bridge squares' closing rate,
    // computed here straight from the source solid's face normals.
    let poly = build_polyhedron(SolidId::TruncatedIcosidodecahedron, 1.0).unwrap();
    let square = (0..poly.faces.len())
        .find(|&f| poly.faces[f].vertices.len() == 4)
        .unwrap();
    let ring = &poly.faces[square].vertices;
    let hexes: Vec<_> = (0..ring.len())
        .filter_map(|e| {
            let g = poly
                .neighbor_across(square, ring[e], ring[(e + 1) % ring.len()])
                .unwrap();
            (poly.faces[g].vertices.len() == 6).then(|| poly.face_normal(g))
        })
        .collect();
    assert_eq!(hexes.len(), 2);
    let rate = (hexes[0] - hexes[1]).norm();
    assert!((p5.profile.s_end - 1.0 / rate).abs() < 1e-12);
}

#[test]
fn travel_span_matches_the_strip_swing() {
    // At the end of travel each trapezoid hangs straight down: the swing
    // start must satisfy s_end * sin(beta) = v0.x for every hollow class.
    for order in [3, 4, 5] {
        let pattern = canonical_pattern(order).unwrap();
        for class in &pattern.profile.classes {
            assert!((pattern.profile.s_end * class.sin_beta - class.v0.x).abs() < 1e-12);
        }
    }
}

#[test]
fn foldmap_closes_canonical_patterns() {
    assert_foldmap_closes(&canonical_pattern(3).unwrap(), 4);
    assert_foldmap_closes(&canonical_pattern(4).unwrap(), 4);
    assert_foldmap_closes(&build_loop_unit(3).unwrap(), 6);
    assert_foldmap_closes(&build_loop_unit(4).unwrap(), 6);
    assert_foldmap_closes(&build_loop_unit(5).unwrap(), 6);
}

#[test]
fn driving_dihedral_runs_from_flat_to_square() {
    let pattern = canonical_pattern(3).unwrap();
    // Core and trapezoid are coplanar when deployed; at the end of travel
    // the trapezoid has swung perpendicular.
    assert!(driving_dihedral(&pattern, 0.0).abs() < 1e-12);
    let end = driving_dihedral(&pattern, pattern.profile.s_end);
    assert!((end.abs() - PI / 2.0).abs() < 1e-9);
    // Strictly monotone in between, and invertible back to the travel.
    let mut prev = driving_dihedral(&pattern, 0.0);
    let direction = end.signum();
    for i in 1..=40 {
        let s = pattern.profile.s_end * i as f64 / 40.0;
        let theta = driving_dihedral(&pattern, s);
        assert!(
            (theta - prev) * direction > 0.0,
            "driving angle reverses at s = {s}"
        );
        let back = travel_of_driving_angle(&pattern, theta);
        assert!((back - s).abs() < 1e-9);
        prev = theta;
    }
}

#[test]
fn deployed_sheets_tile_the_kept_material() {
    // Reserved hexagons and bridge squares survive whole; each hollow keeps
    // its core and the strips, shedding the rest of the cut face.
    let pattern = canonical_pattern(3).unwrap();
    let hex_area = 1.5 * 3.0_f64.sqrt();
    let core_area = 0.25 * 3.0_f64.sqrt();
    let ell = 1.0 / 3.0_f64.sqrt();
    let expected = 4.0 * hex_area + 6.0 + 4.0 * (core_area + 3.0 * ell);
    assert!((pattern.total_sheet_area() - expected).abs() < 1e-10);
}

#[test]
fn fold_sign_census() {
    let pattern = canonical_pattern(3).unwrap();
    use FoldSign::*;
    use HingeLabel::*;
    assert_eq!(count_hinges(&pattern, PlatformSquare, Mountain), 12);
    assert_eq!(count_hinges(&pattern, SquareCrease, Valley), 6);
    assert_eq!(count_hinges(&pattern, PlatformTrapezoid, Mountain), 12);
    assert_eq!(count_hinges(&pattern, CoreTrapezoid, Valley), 12);
    assert_eq!(pattern.hinges.len(), 42);
}

fn cuboctahedron_flap_roles(poly: &kirigami::solids::Polyhedron) -> Vec<FaceRole> {
    (0..poly.faces.len())
        .map(|f| {
            if poly.faces[f].vertices.len() == 4 {
                FaceRole::FoldedSecondary
            } else {
                let n = poly.face_normal(f);
                if n.x * n.y * n.z > 0.0 {
                    FaceRole::FoldedPrimary
                } else {
                    FaceRole::Reserved
                }
            }
        })
        .collect()
}

#[test]
fn corner_flap_pattern_mirrors_the_bridge_layout() {
    let poly = build_polyhedron(SolidId::Cuboctahedron, 1.0).unwrap();
    let spec = PatternSpec {
        poly: &poly,
        roles: cuboctahedron_flap_roles(&poly),
        name: "corner flap test".into(),
        secondary_hollows: false,
        flap_h: Some(0.05),
    };
    let pattern = build_radial_pattern(&spec).unwrap();
    // Same mechanism sizes as the hexagon-platform pattern of order 3.
    assert_eq!(pattern.sheets.len(), 32);
    assert_eq!(pattern.hinges.len(), 42);
    assert!((pattern.profile.s_end - SQRT_3_OVER_8).abs() < 1e-12);
    // Platforms pick up one chord per corner: six boundary vertices on a
    // triangle, with the original face kept alongside.
    for sheet in pattern.sheets.iter().filter(|s| s.role == SheetRole::Platform) {
        assert_eq!(sheet.boundary.len(), 6);
        assert_eq!(sheet.face_polygon.as_ref().map(|p| p.len()), Some(3));
    }
    // Each chord spans the requested width.
    for hinge in &pattern.hinges {
        if hinge.label == HingeLabel::PlatformTrapezoid {
            let len = (hinge.axis_a.1 - hinge.axis_a.0).norm();
            assert!((len - 0.05).abs() < 1e-12);
        }
    }
    assert_foldmap_closes(&pattern, 5);
}

#[test]
fn corner_flap_width_is_bounded() {
    let poly = build_polyhedron(SolidId::Cuboctahedron, 1.0).unwrap();
    for bad in [0.0, -0.1, 1.0] {
        let spec = PatternSpec {
            poly: &poly,
            roles: cuboctahedron_flap_roles(&poly),
            name: "bad flap".into(),
            secondary_hollows: false,
            flap_h: Some(bad),
        };
        assert!(build_radial_pattern(&spec).is_err(), "accepted flap width {bad}");
    }
    // Opposing extensions along one platform edge must not meet: width 0.6
    // extends 0.6 past each corner of a unit edge.
    let spec = PatternSpec {
        poly: &poly,
        roles: cuboctahedron_flap_roles(&poly),
        name: "colliding flap".into(),
        secondary_hollows: false,
        flap_h: Some(0.6),
    };
    assert!(build_radial_pattern(&spec).is_err());
    let spec = PatternSpec {
        poly: &poly,
        roles: cuboctahedron_flap_roles(&poly),
        name: "wide flap".into(),
        secondary_hollows: false,
        flap_h: Some(0.45),
    };
    assert!(build_radial_pattern(&spec).is_ok());
}

#[test]
fn secondary_hollows_build_eightfold_circuits() {
    // Square platforms with both hexagon families cut: every circuit picks
    // up a second hollow's strip and core, stretching to eight panels.
    let poly = build_polyhedron(SolidId::TruncatedOctahedron, 1.0).unwrap();
    let roles: Vec<FaceRole> = (0..poly.faces.len())
        .map(|f| {
            if poly.faces[f].vertices.len() == 4 {
                FaceRole::Reserved
            } else if poly.face_normal(f).iter().product::<f64>() > 0.0 {
                FaceRole::FoldedPrimary
            } else {
                FaceRole::FoldedSecondary
            }
        })
        .collect();
    let spec = PatternSpec {
        poly: &poly,
        roles,
        name: "square platform test".into(),
        secondary_hollows: true,
        flap_h: None,
    };
    let pattern = build_radial_pattern(&spec).unwrap();
    assert_eq!(pattern.sheets.len(), 38);
    assert_eq!(pattern.hinges.len(), 48);
    assert_eq!(pattern.units.len(), 8);
    assert!(pattern.units.iter().all(|u| u.circuits.iter().all(|c| c.len() == 8)));
    assert_eq!(pattern.profile.classes.len(), 2);
    for class in &pattern.profile.classes {
        assert!((class.ell - 1.0 / 3.0_f64.sqrt()).abs() < 1e-12);
        assert!((class.cos_beta - 1.0 / 3.0_f64.sqrt()).abs() < 1e-12);
    }
    assert!((pattern.profile.s_end - 0.5_f64.sqrt()).abs() < 1e-12);
    assert_eq!(pattern.profile.driving_backoff, 0.0);
    assert_foldmap_closes(&pattern, 5);
}

#[test]
fn mixed_role_tables_are_rejected() {
    let poly = build_polyhedron(SolidId::TruncatedOctahedron, 1.0).unwrap();
    // A hexagon marked as a bridge square cannot be halved.
    let mut roles: Vec<FaceRole> = (0..poly.faces.len())
        .map(|f| {
            if poly.faces[f].vertices.len() == 4 {
                FaceRole::FoldedSecondary
            } else if poly.face_normal(f).iter().product::<f64>() > 0.0 {
                FaceRole::FoldedPrimary
            } else {
                FaceRole::Reserved
            }
        })
        .collect();
    let hexagon = (0..poly.faces.len())
        .find(|&f| poly.faces[f].vertices.len() == 6)
        .unwrap();
    roles[hexagon] = FaceRole::FoldedSecondary;
    let spec = PatternSpec {
        poly: &poly,
        roles,
        name: "mismatched roles".into(),
        secondary_hollows: false,
        flap_h: None,
    };
    assert!(build_radial_pattern(&spec).is_err());

    // Role tables must cover the face list.
    let spec = PatternSpec {
        poly: &poly,
        roles: vec![FaceRole::Reserved; 3],
        name: "short roles".into(),
        secondary_hollows: false,
        flap_h: None,
    };
    assert!(build_radial_pattern(&spec).is_err());
}
