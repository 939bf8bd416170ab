//! Superposition of two radial patterns over the same source solid.
//!
//! The union carries both parents' cuts and creases on one sheet set. Each
//! face that one parent folds and the other reserves keeps the folding
//! parent's core and trapezoids; along every edge between two such hollows
//! the parents' trapezoids hinge directly to each other, each playing the
//! platform for the other's motion. The shared squares are quartered by the
//! two perpendicular parent midlines. The quarters end up as hinge islands,
//! so they are held by corner ties instead: at every source vertex the
//! square corner and both trapezoid ends coincide, and the coincidence
//! point is an endpoint of every hinge axis meeting it, so both parent
//! motions carry the three corners with the same moving platform. Every
//! crease is tagged with the parent whose motion folds it; the union's own
//! profile drives the first parent's branch.

use super::build::face_frame;
use super::{
    CornerTie, CreaseHinge, CreaseOwner, FaceRole, FoldSign, HingeLabel, KirigamiPattern,
    PanelMotion, PanelSheet, RadialProfile, SheetRole,
};
use crate::error::{KirigamiError, Result};
use crate::solids::{build_polyhedron, Polyhedron};
use nalgebra::{Vector2, Vector3};
use std::collections::{BTreeMap, BTreeSet};

/// Superimpose two radial patterns into one two-branch pattern.
///
/// The parents must cover the same solid with role tables that are either
/// identical (the union is the pattern itself) or complementary: each
/// parent reserves what the other folds, and both halve the same squares.
/// Eightfold-circuit and corner-flap parents are rejected; their secondary
/// faces are not halved squares, or their platforms only touch the hollows
/// at vertices.
pub fn superimpose(a: &KirigamiPattern, b: &KirigamiPattern) -> Result<KirigamiPattern> {
    if a.source != b.source {
        return Err(KirigamiError::Pattern(format!(
            "cannot superimpose patterns over different solids ({} vs {})",
            a.source.name(),
            b.source.name()
        )));
    }
    if (a.edge_length - b.edge_length).abs() > 1e-12 * a.edge_length.max(1.0) {
        return Err(KirigamiError::Pattern(
            "cannot superimpose patterns with different edge lengths".into(),
        ));
    }
    for (p, tag) in [(a, "first"), (b, "second")] {
        if p.superposed {
            return Err(KirigamiError::Pattern(format!(
                "the {tag} pattern is already a superposition"
            )));
        }
        if p.profile.classes.len() > 1 {
            return Err(KirigamiError::Pattern(format!(
                "the {tag} pattern folds its secondary faces as loops; \
                 only halved squares superimpose"
            )));
        }
        if p.sheets.iter().any(|s| s.face_polygon.is_some()) {
            return Err(KirigamiError::Pattern(format!(
                "the {tag} pattern uses corner flaps; its platforms touch the \
                 hollows only at vertices"
            )));
        }
    }
    let poly = build_polyhedron(a.source, a.edge_length)?;
    let ra = derive_roles(a, &poly, "first")?;
    let rb = derive_roles(b, &poly, "second")?;
    if ra == rb {
        // Identical role tables reproduce the same pattern sheet for sheet,
        // so the union is the first parent itself.
        return Ok(a.clone());
    }
    let complementary = ra.iter().zip(&rb).all(|pair| {
        matches!(
            pair,
            (FaceRole::Reserved, FaceRole::FoldedPrimary)
                | (FaceRole::FoldedPrimary, FaceRole::Reserved)
                | (FaceRole::FoldedSecondary, FaceRole::FoldedSecondary)
        )
    });
    if !complementary {
        return Err(KirigamiError::Pattern(
            "face roles are neither identical nor complementary".into(),
        ));
    }
    let tol = 1e-9 * a.edge_length.max(1.0);

    // Each parent's hollow panels survive under their own ids. The second
    // parent's assemblies ride their face's platform translation while the
    // first parent drives.
    let mut sheets: Vec<PanelSheet> = Vec::new();
    let mut motions: BTreeMap<String, PanelMotion> = BTreeMap::new();
    for s in &a.sheets {
        if matches!(s.role, SheetRole::Core | SheetRole::Trapezoid) {
            sheets.push(s.clone());
            motions.insert(s.id.clone(), a.profile.motions[&s.id].clone());
        }
    }
    for s in &b.sheets {
        if matches!(s.role, SheetRole::Core | SheetRole::Trapezoid) {
            sheets.push(s.clone());
            let f = s.face.expect("hollow sheets carry a source face");
            motions.insert(
                s.id.clone(),
                PanelMotion::Translate {
                    dir: poly.face_normal(f),
                },
            );
        }
    }

    let mut hinges: Vec<CreaseHinge> = Vec::new();
    for f in 0..poly.faces.len() {
        if ra[f] == FaceRole::FoldedSecondary {
            quarter_square(&poly, f, a, b, &mut sheets, &mut hinges, &mut motions, tol)?;
        }
    }

    // Creases internal to one parent's hollows keep that parent as owner.
    for h in &a.hinges {
        if h.label == HingeLabel::CoreTrapezoid {
            hinges.push(CreaseHinge {
                owner: CreaseOwner::ParentA,
                ..h.clone()
            });
        }
    }
    for h in &b.hinges {
        if h.label == HingeLabel::CoreTrapezoid {
            hinges.push(CreaseHinge {
                owner: CreaseOwner::ParentB,
                ..h.clone()
            });
        }
    }
    merge_strip_hinges(a, b, &mut hinges, tol)?;

    let ties = discover_ties(&sheets, &hinges, tol)?;

    let drive = &a.hinges[a.profile.driving_hinge];
    let driving_hinge = hinges
        .iter()
        .position(|h| {
            h.label == HingeLabel::CoreTrapezoid
                && h.panel_a == drive.panel_a
                && h.panel_b == drive.panel_b
        })
        .expect("the first parent's driving crease survives in the union");
    let profile = RadialProfile {
        s_end: a.profile.s_end,
        driving_backoff: a.profile.driving_backoff,
        classes: a.profile.classes.clone(),
        motions,
        driving_hinge,
        driving_class: a.profile.driving_class,
    };
    let pattern = KirigamiPattern {
        name: format!("{}+{}", a.name, b.name),
        source: a.source,
        edge_length: a.edge_length,
        sheets,
        hinges,
        ties,
        units: vec![],
        profile,
        superposed: true,
    };
    pattern.validate()?;
    Ok(pattern)
}

/// Recover the per-face role table a radial pattern was built from.
fn derive_roles(p: &KirigamiPattern, poly: &Polyhedron, tag: &str) -> Result<Vec<FaceRole>> {
    let mut roles: Vec<Option<FaceRole>> = vec![None; poly.faces.len()];
    for s in &p.sheets {
        let f = s.face.ok_or_else(|| {
            KirigamiError::Pattern(format!("the {tag} pattern has a sheet without a source face"))
        })?;
        if f >= roles.len() {
            return Err(KirigamiError::Pattern(format!(
                "the {tag} pattern references face {f} beyond its solid"
            )));
        }
        let role = match s.role {
            SheetRole::Platform => FaceRole::Reserved,
            SheetRole::Core | SheetRole::Trapezoid => FaceRole::FoldedPrimary,
            SheetRole::SquareHalf | SheetRole::SquareQuarter => FaceRole::FoldedSecondary,
        };
        match roles[f] {
            None => roles[f] = Some(role),
            Some(r) if r == role => {}
            Some(_) => {
                return Err(KirigamiError::Pattern(format!(
                    "the {tag} pattern assigns face {f} two roles"
                )))
            }
        }
    }
    roles
        .into_iter()
        .enumerate()
        .map(|(f, r)| {
            r.ok_or_else(|| {
                KirigamiError::Pattern(format!("the {tag} pattern leaves face {f} uncovered"))
            })
        })
        .collect()
}

/// The two halves a parent splits square `f` into, in id order.
fn halves_of<'p>(p: &'p KirigamiPattern, f: usize) -> Result<Vec<&'p PanelSheet>> {
    let mut v: Vec<&PanelSheet> = p
        .sheets
        .iter()
        .filter(|s| s.face == Some(f) && s.role == SheetRole::SquareHalf)
        .collect();
    v.sort_by(|x, y| x.id.cmp(&y.id));
    if v.len() != 2 {
        return Err(KirigamiError::Pattern(format!(
            "square {f} does not split into two halves"
        )));
    }
    Ok(v)
}

/// Split square `f` into four quarters along both parents' midlines, with
/// two crease segments per midline owned by the midline's parent.
#[allow(clippy::too_many_arguments)]
fn quarter_square(
    poly: &Polyhedron,
    f: usize,
    a: &KirigamiPattern,
    b: &KirigamiPattern,
    sheets: &mut Vec<PanelSheet>,
    hinges: &mut Vec<CreaseHinge>,
    motions: &mut BTreeMap<String, PanelMotion>,
    tol: f64,
) -> Result<()> {
    let corners = poly.face_vertices(f);
    if corners.len() != 4 {
        return Err(KirigamiError::Pattern(format!(
            "face {f} is not a square and cannot be quartered"
        )));
    }
    let center = poly.face_centroid(f);
    let frame = face_frame(poly, f);
    let lift = |w: &Vector3<f64>| {
        let p = frame.inverse().apply(w);
        debug_assert!(p.z.abs() < 1e-9, "square point leaves the face plane");
        Vector2::new(p.x, p.y)
    };

    let ha = halves_of(a, f)?;
    let hb = halves_of(b, f)?;
    // Halves list their two source corners first in the boundary.
    let member = |halves: &[&PanelSheet], corner: &Vector3<f64>| -> Result<usize> {
        for (i, h) in halves.iter().enumerate() {
            if h.world_boundary()[..2].iter().any(|w| (w - corner).norm() < tol) {
                return Ok(i);
            }
        }
        Err(KirigamiError::Pattern(format!(
            "square {f}: a corner belongs to neither half"
        )))
    };
    let crease_ends = |p: &KirigamiPattern, halves: &[&PanelSheet]| -> Result<(Vector3<f64>, Vector3<f64>)> {
        let idx = p
            .hinges
            .iter()
            .position(|h| {
                h.label == HingeLabel::SquareCrease
                    && (h.panel_a == halves[0].id || h.panel_a == halves[1].id)
            })
            .ok_or_else(|| {
                KirigamiError::Pattern(format!("square {f} has no midline crease"))
            })?;
        Ok(p.world_axis(idx))
    };
    let (ma0, ma1) = crease_ends(a, &ha)?;
    let (mb0, mb1) = crease_ends(b, &hb)?;
    if (ma0 - mb0).norm() < tol || (ma0 - mb1).norm() < tol {
        return Err(KirigamiError::Pattern(format!(
            "square {f}: the parent midlines coincide instead of crossing"
        )));
    }

    // Quarter at corner k spans corner, both adjacent edge midpoints, and
    // the center; its id records which half of each parent it rides.
    let mut quarter_ids: Vec<String> = Vec::with_capacity(4);
    for k in 0..4 {
        let c = corners[k];
        let next = corners[(k + 1) % 4];
        let prev = corners[(k + 3) % 4];
        let ia = member(&ha, &c)?;
        let ib = member(&hb, &c)?;
        let id = format!("f{f:02}.h{ia}{ib}");
        let ring = [c, (c + next) * 0.5, center, (c + prev) * 0.5];
        sheets.push(PanelSheet {
            id: id.clone(),
            role: SheetRole::SquareQuarter,
            boundary: ring.iter().map(lift).collect(),
            deployed: frame,
            face: Some(f),
            face_polygon: None,
        });
        // The quarter rides its first-parent half rigidly on the driven
        // branch.
        motions.insert(id.clone(), a.profile.motions[&ha[ia].id].clone());
        quarter_ids.push(id);
    }
    for k in 0..4 {
        let mid = (corners[k] + corners[(k + 1) % 4]) * 0.5;
        let owner = if (mid - ma0).norm() < tol || (mid - ma1).norm() < tol {
            CreaseOwner::ParentA
        } else if (mid - mb0).norm() < tol || (mid - mb1).norm() < tol {
            CreaseOwner::ParentB
        } else {
            return Err(KirigamiError::Pattern(format!(
                "square {f}: an edge midpoint lies on neither parent midline"
            )));
        };
        // All four quarters share the face frame, so one local segment
        // serves both sides.
        let axis = (lift(&mid), lift(&center));
        hinges.push(CreaseHinge {
            panel_a: quarter_ids[k].clone(),
            panel_b: quarter_ids[(k + 1) % 4].clone(),
            axis_a: axis,
            axis_b: axis,
            sign: FoldSign::Valley,
            label: HingeLabel::QuarterCrease,
            owner,
        });
    }
    Ok(())
}

/// Join the two parents' trapezoids directly along every shared attachment
/// edge; each parent's platform hinge there referenced a face the other
/// parent hollows out.
fn merge_strip_hinges(
    a: &KirigamiPattern,
    b: &KirigamiPattern,
    hinges: &mut Vec<CreaseHinge>,
    tol: f64,
) -> Result<()> {
    struct Strip {
        id: String,
        seg: (Vector3<f64>, Vector3<f64>),
        axis: (Vector2<f64>, Vector2<f64>),
        used: bool,
    }
    let mut opposing: Vec<Strip> = Vec::new();
    for (i, h) in b.hinges.iter().enumerate() {
        if h.label == HingeLabel::PlatformTrapezoid {
            opposing.push(Strip {
                id: h.panel_b.clone(),
                seg: b.world_axis(i),
                axis: h.axis_b,
                used: false,
            });
        }
    }
    for (i, h) in a.hinges.iter().enumerate() {
        if h.label != HingeLabel::PlatformTrapezoid {
            continue;
        }
        let (p0, p1) = a.world_axis(i);
        let strip = opposing
            .iter_mut()
            .find(|s| {
                ((s.seg.0 - p0).norm() < tol && (s.seg.1 - p1).norm() < tol)
                    || ((s.seg.0 - p1).norm() < tol && (s.seg.1 - p0).norm() < tol)
            })
            .ok_or_else(|| {
                KirigamiError::Pattern(format!(
                    "no opposing trapezoid along the attachment edge of {}",
                    h.panel_b
                ))
            })?;
        if strip.used {
            return Err(KirigamiError::Pattern(format!(
                "two attachments contend for the edge of {}",
                strip.id
            )));
        }
        strip.used = true;
        let forward = (strip.seg.0 - p0).norm() < tol;
        hinges.push(CreaseHinge {
            panel_a: h.panel_b.clone(),
            panel_b: strip.id.clone(),
            axis_a: h.axis_b,
            axis_b: if forward {
                strip.axis
            } else {
                (strip.axis.1, strip.axis.0)
            },
            sign: FoldSign::Mountain,
            label: HingeLabel::PlatformTrapezoid,
            owner: CreaseOwner::Both,
        });
    }
    if let Some(s) = opposing.iter().find(|s| !s.used) {
        return Err(KirigamiError::Pattern(format!(
            "trapezoid {} found no opposing attachment",
            s.id
        )));
    }
    Ok(())
}

/// Find every coincidence of boundary corners between panels of different
/// faces that no hinge already joins. Panels touching at two points without
/// a hinge would be a modeling error, not a tie.
fn discover_ties(
    sheets: &[PanelSheet],
    hinges: &[CreaseHinge],
    tol: f64,
) -> Result<Vec<CornerTie>> {
    let index: BTreeMap<&str, usize> = sheets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.as_str(), i))
        .collect();
    let key = |x: usize, y: usize| if x < y { (x, y) } else { (y, x) };
    let joined: BTreeSet<(usize, usize)> = hinges
        .iter()
        .map(|h| key(index[h.panel_a.as_str()], index[h.panel_b.as_str()]))
        .collect();
    let rings: Vec<Vec<Vector3<f64>>> = sheets.iter().map(|s| s.world_boundary()).collect();
    let mut ties = Vec::new();
    for i in 0..sheets.len() {
        for j in (i + 1)..sheets.len() {
            if sheets[i].face == sheets[j].face || joined.contains(&key(i, j)) {
                continue;
            }
            let mut hit: Option<(usize, usize)> = None;
            for (vi, wi) in rings[i].iter().enumerate() {
                for (vj, wj) in rings[j].iter().enumerate() {
                    if (wi - wj).norm() >= tol {
                        continue;
                    }
                    match hit {
                        Some((pi, _)) if (rings[i][pi] - wi).norm() > tol => {
                            return Err(KirigamiError::Pattern(format!(
                                "panels {} and {} touch at two points without a hinge",
                                sheets[i].id, sheets[j].id
                            )));
                        }
                        Some(_) => {}
                        None => hit = Some((vi, vj)),
                    }
                }
            }
            if let Some((vi, vj)) = hit {
                ties.push(CornerTie {
                    panel_a: sheets[i].id.clone(),
                    panel_b: sheets[j].id.clone(),
                    point_a: sheets[i].boundary[vi],
                    point_b: sheets[j].boundary[vj],
                });
            }
        }
    }
    Ok(ties)
}
