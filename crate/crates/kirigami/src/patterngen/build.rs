//! Construction of radial patterns from a solid and a face-role assignment.
//!
//! Two attachment modes cover all supported patterns. In edge mode a platform
//! shares a whole edge with each neighboring hollow and the trapezoid hangs
//! from that edge. In flap mode (corner-flap patterns) platforms touch
//! hollows only at vertices; each platform corner is extended past the vertex
//! along its two edge lines up to a short chord, and the trapezoid hangs from
//! the chord. Both modes obey the same rule: attachments face the reserved
//! material, core edges face the attachments.

use super::{
    CreaseHinge, CreaseOwner, FaceRole, FoldSign, HingeLabel, HollowClass, KirigamiPattern,
    LoopUnit, PanelMotion, PanelSheet, RadialProfile, SheetRole,
};
use crate::error::{KirigamiError, Result};
use crate::geom::Placement;
use crate::solids::Polyhedron;
use nalgebra::{Vector2, Vector3};
use std::collections::BTreeMap;

pub struct PatternSpec<'a> {
    pub poly: &'a Polyhedron,
    pub roles: Vec<FaceRole>,
    pub name: String,
    /// Faces tagged `FoldedSecondary` carry their own loops (eightfold
    /// circuits) instead of being halved squares.
    pub secondary_hollows: bool,
    /// Corner-flap chord width; `Some` selects flap mode.
    pub flap_h: Option<f64>,
}

/// Local frame of a face: origin at the centroid, x toward vertex 0, z along
/// the outward normal.
pub(crate) fn face_frame(poly: &Polyhedron, f: usize) -> Placement {
    let centroid = poly.face_centroid(f);
    let normal = poly.face_normal(f);
    let v0 = poly.vertices[poly.faces[f].vertices[0]];
    let x = {
        let raw = v0 - centroid;
        (raw - normal * raw.dot(&normal)).normalize()
    };
    let y = normal.cross(&x);
    Placement::new(nalgebra::Matrix3::from_columns(&[x, y, normal]), centroid)
}

fn to_local(frame: &Placement, w: &Vector3<f64>) -> Vector2<f64> {
    let p = frame.inverse().apply(w);
    assert!(p.z.abs() < 1e-9, "point leaves its panel plane");
    Vector2::new(p.x, p.y)
}

/// Attachment of one trapezoid: the chord it hangs from, the outward and
/// along-chord directions in the hollow frame, and the platform it rides.
struct Attach {
    platform_face: usize,
    chord: (Vector3<f64>, Vector3<f64>),
    xi: Vector3<f64>,
    e_hat: Vector3<f64>,
    trap_id: String,
    /// Hollow-plane angle of `xi`, for cyclic ordering.
    angle: f64,
}

struct Hollow {
    face: usize,
    class: usize,
    order: usize,
    center: Vector3<f64>,
    normal: Vector3<f64>,
    core_id: String,
    attach: Vec<Attach>,
}

struct SquareInfo {
    face: usize,
    /// Platform face and half id on each side, lower platform index first.
    sides: [(usize, String); 2],
    s_end: f64,
}

struct Chord {
    p_in: Vector3<f64>,
    p_out: Vector3<f64>,
    hollow: usize,
}

pub fn build_radial_pattern(spec: &PatternSpec) -> Result<KirigamiPattern> {
    let poly = spec.poly;
    if spec.roles.len() != poly.faces.len() {
        return Err(KirigamiError::Pattern(format!(
            "role table covers {} faces, solid has {}",
            spec.roles.len(),
            poly.faces.len()
        )));
    }
    let flap_mode = spec.flap_h.is_some();
    if let Some(h) = spec.flap_h {
        let max = poly.edge_length;
        if !(h > 0.0) || h >= max {
            return Err(KirigamiError::InvalidParameter(format!(
                "corner flap width must lie in (0, {max}), got {h}"
            )));
        }
    }
    if flap_mode && spec.secondary_hollows {
        return Err(KirigamiError::Pattern(
            "corner-flap patterns use sevenfold circuits only".into(),
        ));
    }

    let reserved: Vec<usize> = role_faces(&spec.roles, FaceRole::Reserved);
    let primary: Vec<usize> = role_faces(&spec.roles, FaceRole::FoldedPrimary);
    let secondary: Vec<usize> = role_faces(&spec.roles, FaceRole::FoldedSecondary);
    if reserved.is_empty() || primary.is_empty() {
        return Err(KirigamiError::Pattern(
            "pattern needs at least one reserved and one folded face".into(),
        ));
    }

    let mut b = Builder {
        poly,
        roles: &spec.roles,
        sheets: Vec::new(),
        hinges: Vec::new(),
        motions: BTreeMap::new(),
        frames: BTreeMap::new(),
    };

    // Corner chords have to exist before platform boundaries in flap mode.
    let chords = if let Some(h) = spec.flap_h {
        compute_chords(poly, &spec.roles, h)?
    } else {
        BTreeMap::new()
    };

    for &f in &reserved {
        b.add_platform(f, &chords)?;
    }

    let mut squares: Vec<SquareInfo> = Vec::new();
    if !spec.secondary_hollows {
        for &f in &secondary {
            squares.push(b.add_halved_square(f)?);
        }
    }

    let mut hollows: Vec<Hollow> = Vec::new();
    let mut class_data: Vec<ClassAccumulator> = vec![ClassAccumulator::default(); 2];
    for &f in &primary {
        hollows.push(b.add_hollow(f, 0, flap_mode, &chords, &mut class_data[0])?);
    }
    if spec.secondary_hollows {
        for &f in &secondary {
            hollows.push(b.add_hollow(f, 1, flap_mode, &chords, &mut class_data[1])?);
        }
    }

    let classes: Vec<HollowClass> = class_data
        .iter()
        .filter_map(|acc| acc.finish())
        .collect::<Result<_>>()?;

    // The folded travel comes from the halved squares when there are any;
    // otherwise every hollow family must close its mouth at the same travel,
    // which pins it to ell / sin(beta).
    let s_end = if squares.is_empty() {
        let candidates: Vec<f64> = classes.iter().map(|c| c.ell / c.sin_beta).collect();
        let s = candidates[0];
        for &c in &candidates[1..] {
            if (c - s).abs() > 1e-9 * poly.edge_length {
                return Err(KirigamiError::Pattern(
                    "hollow families disagree on the folded travel".into(),
                ));
            }
        }
        s
    } else {
        let s = squares[0].s_end;
        for sq in &squares[1..] {
            if (sq.s_end - s).abs() > 1e-9 * poly.edge_length {
                return Err(KirigamiError::Pattern(
                    "halved squares disagree on the folded travel".into(),
                ));
            }
        }
        s
    };
    for class in &classes {
        // The fold relation must stay real over the whole travel.
        for k in 0..=32 {
            let s = s_end * f64::from(k) / 32.0;
            let vxi = class.v0.x - s * class.sin_beta;
            if class.ell * class.ell - vxi * vxi < -1e-12 {
                return Err(KirigamiError::Pattern(
                    "fold relation breaks down before the folded state".into(),
                ));
            }
        }
    }

    // Units and circuits around every hollow.
    let hollow_by_face: BTreeMap<usize, usize> =
        hollows.iter().enumerate().map(|(i, h)| (h.face, i)).collect();
    let square_by_face: BTreeMap<usize, usize> =
        squares.iter().enumerate().map(|(i, s)| (s.face, i)).collect();
    let mut units = Vec::new();
    for hollow in &hollows {
        units.push(build_unit(
            poly,
            hollow,
            &hollows,
            &hollow_by_face,
            &squares,
            &square_by_face,
            flap_mode,
        )?);
    }

    // Driving crease: core-trapezoid hinge of attachment 0 of the first
    // primary hollow.
    let drive_hollow = &hollows[0];
    let driving_hinge = b
        .hinges
        .iter()
        .position(|h| {
            h.label == HingeLabel::CoreTrapezoid
                && h.panel_a == drive_hollow.core_id
                && h.panel_b == drive_hollow.attach[0].trap_id
        })
        .expect("driving hinge exists");

    // Bridge squares close flat exactly at the end of travel, and the rank
    // audit needs the last driven sample clearly on the regular side of that
    // degeneracy: the slack singular values shrink linearly with the
    // remaining driving angle, so a 1e-3 rad stop margin keeps them two
    // orders above the coarsest rank tolerance. Patterns without squares
    // have a regular closed state and run to the limit angle directly.
    let profile = RadialProfile {
        s_end,
        driving_backoff: if squares.is_empty() { 0.0 } else { 1e-3 },
        classes,
        motions: b.motions,
        driving_hinge,
        driving_class: 0,
    };

    let pattern = KirigamiPattern {
        name: spec.name.clone(),
        source: poly.id,
        edge_length: poly.edge_length,
        sheets: b.sheets,
        hinges: b.hinges,
        ties: vec![],
        units,
        profile,
        superposed: false,
    };
    pattern.validate()?;
    Ok(pattern)
}

fn role_faces(roles: &[FaceRole], want: FaceRole) -> Vec<usize> {
    roles
        .iter()
        .enumerate()
        .filter(|(_, r)| **r == want)
        .map(|(f, _)| f)
        .collect()
}

pub(crate) fn platform_id(f: usize) -> String {
    format!("f{f:02}")
}

#[derive(Default, Clone)]
struct ClassAccumulator {
    seen: Option<(f64, f64, Vector2<f64>, f64)>,
}

impl ClassAccumulator {
    fn record(
        &mut self,
        cos_beta: f64,
        sin_beta: f64,
        v0: Vector2<f64>,
        core_edge: f64,
    ) -> Result<()> {
        match self.seen {
            None => {
                self.seen = Some((cos_beta, sin_beta, v0, core_edge));
                Ok(())
            }
            Some((c, s, v, t)) => {
                let err = (c - cos_beta).abs().max((s - sin_beta).abs());
                let err = err.max((v - v0).norm()).max((t - core_edge).abs());
                if err > 1e-10 {
                    Err(KirigamiError::Pattern(
                        "attachments of one hollow family disagree geometrically".into(),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn finish(&self) -> Option<Result<HollowClass>> {
        let (cos_beta, sin_beta, v0, core_edge) = self.seen?;
        if v0.x <= 0.0 || sin_beta <= 0.0 {
            return Some(Err(KirigamiError::Pattern(
                "attachment sits on the wrong side of its core edge".into(),
            )));
        }
        Some(Ok(HollowClass {
            cos_beta,
            sin_beta,
            ell: v0.norm(),
            v0,
            core_edge,
        }))
    }
}

struct Builder<'a> {
    poly: &'a Polyhedron,
    roles: &'a [FaceRole],
    sheets: Vec<PanelSheet>,
    hinges: Vec<CreaseHinge>,
    motions: BTreeMap<String, PanelMotion>,
    frames: BTreeMap<String, Placement>,
}

impl<'a> Builder<'a> {
    fn push_sheet(
        &mut self,
        id: String,
        role: SheetRole,
        frame: Placement,
        boundary_world: &[Vector3<f64>],
        face: Option<usize>,
        face_polygon: Option<Vec<Vector2<f64>>>,
    ) {
        let boundary = boundary_world.iter().map(|w| to_local(&frame, w)).collect();
        self.frames.insert(id.clone(), frame);
        self.sheets.push(PanelSheet {
            id,
            role,
            boundary,
            deployed: frame,
            face,
            face_polygon,
        });
    }

    fn push_hinge(
        &mut self,
        a: &str,
        b: &str,
        world: (Vector3<f64>, Vector3<f64>),
        sign: FoldSign,
        label: HingeLabel,
    ) -> usize {
        let fa = self.frames[a];
        let fb = self.frames[b];
        self.hinges.push(CreaseHinge {
            panel_a: a.to_string(),
            panel_b: b.to_string(),
            axis_a: (to_local(&fa, &world.0), to_local(&fa, &world.1)),
            axis_b: (to_local(&fb, &world.0), to_local(&fb, &world.1)),
            sign,
            label,
            owner: CreaseOwner::Pattern,
        });
        self.hinges.len() - 1
    }

    fn add_platform(&mut self, f: usize, chords: &BTreeMap<(usize, usize), Chord>) -> Result<()> {
        let poly = self.poly;
        let frame = face_frame(poly, f);
        let verts = poly.face_vertices(f);
        let id = platform_id(f);
        let face_polygon: Vec<Vector2<f64>> = verts.iter().map(|w| to_local(&frame, w)).collect();
        let boundary: Vec<Vector3<f64>> = if chords.is_empty() {
            verts.clone()
        } else {
            // Corner flaps: walk the face and splice each vertex's chord in,
            // entering along the previous edge line and leaving along the
            // next. The original vertices become interior points of the
            // straight segments between consecutive chords.
            let mut out = Vec::with_capacity(2 * verts.len());
            for fv in &poly.faces[f].vertices {
                let chord = chords.get(&(f, *fv)).ok_or_else(|| {
                    KirigamiError::Pattern(format!(
                        "platform {f} vertex {fv} has no diagonal hollow to flap toward"
                    ))
                })?;
                out.push(chord.p_in);
                out.push(chord.p_out);
            }
            out
        };
        self.push_sheet(
            id.clone(),
            SheetRole::Platform,
            frame,
            &boundary,
            Some(f),
            if chords.is_empty() { None } else { Some(face_polygon) },
        );
        self.motions.insert(
            id,
            PanelMotion::Translate {
                dir: poly.face_normal(f),
            },
        );
        Ok(())
    }

    /// Split a square caught between two platforms into two halves joined by
    /// a central valley crease parallel to the platform edges.
    fn add_halved_square(&mut self, f: usize) -> Result<SquareInfo> {
        let poly = self.poly;
        let face = poly.faces[f].vertices.clone();
        if face.len() != 4 {
            return Err(KirigamiError::Pattern(format!(
                "face {f} is not a square and cannot be halved"
            )));
        }
        let mut platform_edges: Vec<(usize, usize)> = Vec::new();
        for i in 0..4 {
            let n = poly
                .neighbor_across(f, face[i], face[(i + 1) % 4])
                .ok_or_else(|| KirigamiError::Pattern(format!("face {f} has an open edge")))?;
            if self.roles[n] == FaceRole::Reserved {
                platform_edges.push((i, n));
            } else if self.roles[n] != FaceRole::FoldedPrimary {
                return Err(KirigamiError::Pattern(format!(
                    "square {f} borders another folded-secondary face"
                )));
            }
        }
        if platform_edges.len() != 2 || (platform_edges[1].0 - platform_edges[0].0) % 2 != 0 {
            return Err(KirigamiError::Pattern(format!(
                "square {f} is not caught between two platforms across opposite edges"
            )));
        }
        // Half 0 borders the lower platform index.
        if platform_edges[0].1 > platform_edges[1].1 {
            platform_edges.swap(0, 1);
        }

        let frame = face_frame(poly, f);
        let corners: Vec<Vector3<f64>> = poly.face_vertices(f);
        let c = |k: usize| corners[k % 4];
        let outward = poly.face_normal(f);
        let mut sides: Vec<(usize, String)> = Vec::new();
        for (half, &(i, platform)) in platform_edges.iter().enumerate() {
            let boundary = [
                c(i),
                c(i + 1),
                (c(i + 1) + c(i + 2)) * 0.5,
                (c(i + 3) + c(i)) * 0.5,
            ];
            let id = format!("f{f:02}.h{half}");
            self.push_sheet(id.clone(), SheetRole::SquareHalf, frame, &boundary, Some(f), None);

            let n_own = poly.face_normal(platform);
            let n_opp = poly.face_normal(platform_edges[1 - half].1);
            let pivot = (c(i) + c(i + 1)) * 0.5;
            let chord = (c(i + 2) + c(i + 3)) * 0.5 - pivot;
            let delta = n_opp - n_own;
            if delta.cross(&chord).norm() > 1e-9 {
                return Err(KirigamiError::Pattern(format!(
                    "square {f}: platform normals do not close along the crease chord"
                )));
            }
            if delta.dot(&chord) <= 1e-12 {
                return Err(KirigamiError::Pattern(format!(
                    "square {f}: platforms move apart instead of closing"
                )));
            }
            self.motions.insert(
                id.clone(),
                PanelMotion::Tent {
                    platform_dir: n_own,
                    pivot,
                    axis: (c(i + 1) - c(i)).normalize(),
                    chord,
                    rate: delta.norm(),
                    outward,
                },
            );
            // Hinge to the platform along the shared source edge, ordered by
            // the platform's own traversal of it.
            let pid = platform_id(platform);
            let (u, v) = edge_in_face_order(poly, platform, f)?;
            self.push_hinge(
                &pid,
                &id,
                (poly.vertices[u], poly.vertices[v]),
                FoldSign::Mountain,
                HingeLabel::PlatformSquare,
            );
            sides.push((platform, id));
        }

        // Central valley crease between the halves, along the midline.
        let i0 = platform_edges[0].0;
        let m0 = (c(i0 + 3) + c(i0)) * 0.5;
        let m1 = (c(i0 + 1) + c(i0 + 2)) * 0.5;
        let h0 = sides[0].1.clone();
        let h1 = sides[1].1.clone();
        self.push_hinge(&h0, &h1, (m0, m1), FoldSign::Valley, HingeLabel::SquareCrease);

        let i = platform_edges[0].0;
        let chord = (c(i + 2) + c(i + 3)) * 0.5 - (c(i) + c(i + 1)) * 0.5;
        let rate =
            (poly.face_normal(platform_edges[1].1) - poly.face_normal(platform_edges[0].1)).norm();
        let s_end = chord.norm() / rate;
        Ok(SquareInfo {
            face: f,
            sides: [sides[0].clone(), sides[1].clone()],
            s_end,
        })
    }

    /// Core and trapezoids of one hollow face.
    fn add_hollow(
        &mut self,
        f: usize,
        class: usize,
        flap_mode: bool,
        chords: &BTreeMap<(usize, usize), Chord>,
        acc: &mut ClassAccumulator,
    ) -> Result<Hollow> {
        let poly = self.poly;
        let face = &poly.faces[f];
        let center = poly.face_centroid(f);
        let zeta = poly.face_normal(f);
        let frame = face_frame(poly, f);

        // Gather attachments: whole edges facing reserved neighbors, or
        // corner chords floating above the hollow's vertices.
        let mut attach: Vec<Attach> = Vec::new();
        if flap_mode {
            for &v in &face.vertices {
                let chord = match chords.get(&(f, v)) {
                    Some(c) if c.hollow == f => c,
                    _ => {
                        return Err(KirigamiError::Pattern(format!(
                            "hollow {f} vertex {v} has no reserved face to flap from"
                        )))
                    }
                };
                let platform_face = chord_platform(poly, self.roles, f, v)?;
                let mid = (chord.p_in + chord.p_out) * 0.5;
                let xi = inplane_unit(mid - center, &zeta)?;
                let vertex_dir = inplane_unit(poly.vertices[v] - center, &zeta)?;
                if (xi - vertex_dir).norm() > 1e-9 {
                    return Err(KirigamiError::Pattern(format!(
                        "hollow {f}: corner chord is not mirror-symmetric over vertex {v}"
                    )));
                }
                let e_hat = xi.cross(&zeta);
                let along = (chord.p_out - chord.p_in).normalize();
                if along.cross(&e_hat).norm() > 1e-9 {
                    return Err(KirigamiError::Pattern(format!(
                        "hollow {f}: corner chord is not parallel to its core edge"
                    )));
                }
                let seg = if along.dot(&e_hat) > 0.0 {
                    (chord.p_in, chord.p_out)
                } else {
                    (chord.p_out, chord.p_in)
                };
                attach.push(Attach {
                    platform_face,
                    chord: seg,
                    xi,
                    e_hat,
                    trap_id: String::new(),
                    angle: 0.0,
                });
            }
        } else {
            for i in 0..face.vertices.len() {
                let a = face.vertices[i];
                let bb = face.vertices[(i + 1) % face.vertices.len()];
                let n = poly
                    .neighbor_across(f, a, bb)
                    .ok_or_else(|| KirigamiError::Pattern(format!("face {f} has an open edge")))?;
                if self.roles[n] != FaceRole::Reserved {
                    continue;
                }
                let pa = poly.vertices[a];
                let pb = poly.vertices[bb];
                let xi = inplane_unit((pa + pb) * 0.5 - center, &zeta)?;
                let e_hat = xi.cross(&zeta);
                let seg = if (pb - pa).dot(&e_hat) > 0.0 { (pa, pb) } else { (pb, pa) };
                attach.push(Attach {
                    platform_face: n,
                    chord: seg,
                    xi,
                    e_hat,
                    trap_id: String::new(),
                    angle: 0.0,
                });
            }
        }
        let order = attach.len();
        if order < 3 {
            return Err(KirigamiError::Pattern(format!(
                "hollow {f} has only {order} attachments; need at least 3"
            )));
        }

        // Cyclic order by hollow-plane angle, starting at the attachment
        // nearest the frame's x axis; spacing must be uniform.
        let x_axis = frame.rotation.column(0).into_owned();
        let y_axis = frame.rotation.column(1).into_owned();
        for a in &mut attach {
            a.angle = a.xi.dot(&y_axis).atan2(a.xi.dot(&x_axis));
        }
        attach.sort_by(|p, q| p.angle.total_cmp(&q.angle));
        let step = 2.0 * std::f64::consts::PI / order as f64;
        for k in 1..order {
            let gap = attach[k].angle - attach[k - 1].angle;
            if (gap - step).abs() > 1e-9 {
                return Err(KirigamiError::Pattern(format!(
                    "hollow {f}: attachments are not evenly spaced"
                )));
            }
        }

        // Core polygon: edge length equals the attachment length, one edge
        // squarely facing each attachment.
        let t_c = (attach[0].chord.1 - attach[0].chord.0).norm();
        for a in &attach {
            if ((a.chord.1 - a.chord.0).norm() - t_c).abs() > 1e-9 {
                return Err(KirigamiError::Pattern(format!(
                    "hollow {f}: attachment lengths disagree"
                )));
            }
        }
        let apothem = t_c / (2.0 * (step / 2.0).tan());
        let circum = apothem / (step / 2.0).cos();
        let mut corners: Vec<Vector3<f64>> = Vec::with_capacity(order);
        for k in 0..order {
            let m = (attach[k].xi + attach[(k + 1) % order].xi).normalize();
            corners.push(center + m * circum);
        }
        let core_id = format!("f{f:02}.q");
        let core_boundary: Vec<Vector3<f64>> = corners.clone();
        self.push_sheet(core_id.clone(), SheetRole::Core, frame, &core_boundary, Some(f), None);
        self.motions
            .insert(core_id.clone(), PanelMotion::Sink { class, dir: zeta });

        // Trapezoids.
        for k in 0..order {
            let (platform_face, chord, xi, e_hat) = {
                let a = &attach[k];
                (a.platform_face, a.chord, a.xi, a.e_hat)
            };
            let chord_mid = (chord.0 + chord.1) * 0.5;
            let core_mid = center + xi * apothem;
            let v0w = chord_mid - core_mid;
            let v0 = Vector2::new(v0w.dot(&xi), v0w.dot(&zeta));
            if v0w.dot(&e_hat).abs() > 1e-9 {
                return Err(KirigamiError::Pattern(format!(
                    "hollow {f}: attachment {k} is skewed along its own axis"
                )));
            }
            let ell = v0.norm();
            if ell < 1e-9 {
                return Err(KirigamiError::Pattern(format!(
                    "hollow {f}: trapezoid span vanished"
                )));
            }
            let n_p = poly.face_normal(platform_face);
            if n_p.dot(&e_hat).abs() > 1e-9 {
                return Err(KirigamiError::Pattern(format!(
                    "hollow {f}: platform normal leaves the attachment mirror plane"
                )));
            }
            acc.record(n_p.dot(&zeta), n_p.dot(&xi), v0, t_c)?;

            let v0_hat = v0w / ell;
            let z_trap = e_hat.cross(&v0_hat).normalize();
            assert!(z_trap.dot(&zeta) > 0.0, "trapezoid frame flipped");
            let y_trap = z_trap.cross(&e_hat);
            let trap_frame = Placement::new(
                nalgebra::Matrix3::from_columns(&[e_hat, y_trap, z_trap]),
                chord_mid,
            );
            let trap_id = format!("f{f:02}.t{k}");
            let half = t_c * 0.5;
            let boundary = [
                chord_mid + e_hat * half,
                chord_mid - e_hat * half,
                chord_mid - e_hat * half - v0w,
                chord_mid + e_hat * half - v0w,
            ];
            self.push_sheet(trap_id.clone(), SheetRole::Trapezoid, trap_frame, &boundary, Some(f), None);
            self.motions.insert(
                trap_id.clone(),
                PanelMotion::Swing {
                    class,
                    platform_dir: n_p,
                    pivot: chord_mid,
                    axis: e_hat,
                },
            );
            let pid = platform_id(platform_face);
            self.push_hinge(
                &pid,
                &trap_id,
                chord,
                FoldSign::Mountain,
                HingeLabel::PlatformTrapezoid,
            );
            let core_seg = (core_mid - e_hat * half, core_mid + e_hat * half);
            self.push_hinge(
                &core_id,
                &trap_id,
                core_seg,
                FoldSign::Valley,
                HingeLabel::CoreTrapezoid,
            );
            attach[k].trap_id = trap_id;
        }

        Ok(Hollow {
            face: f,
            class,
            order,
            center,
            normal: zeta,
            core_id,
            attach,
        })
    }
}

/// Direction of the in-plane component of `raw` for a plane with normal `n`.
fn inplane_unit(raw: Vector3<f64>, n: &Vector3<f64>) -> Result<Vector3<f64>> {
    let p = raw - n * raw.dot(n);
    if p.norm() < 1e-9 {
        return Err(KirigamiError::Pattern(
            "attachment direction is degenerate".into(),
        ));
    }
    Ok(p.normalize())
}

/// The edge shared by faces `f` and `g`, as ordered by `f`'s traversal.
fn edge_in_face_order(poly: &Polyhedron, f: usize, g: usize) -> Result<(usize, usize)> {
    let fa = &poly.faces[f].vertices;
    for i in 0..fa.len() {
        let a = fa[i];
        let b = fa[(i + 1) % fa.len()];
        if poly.neighbor_across(f, a, b) == Some(g) {
            return Ok((a, b));
        }
    }
    Err(KirigamiError::Pattern(format!(
        "faces {f} and {g} share no edge"
    )))
}

/// Reserved face diagonal to hollow `f` at vertex `v`: shares the vertex but
/// no edge.
fn chord_platform(poly: &Polyhedron, roles: &[FaceRole], f: usize, v: usize) -> Result<usize> {
    let hollow_verts = &poly.faces[f].vertices;
    let mut found = None;
    for g in poly.faces_at_vertex(v) {
        if g == f || roles[g] != FaceRole::Reserved {
            continue;
        }
        let shares_edge = poly.faces[g]
            .vertices
            .iter()
            .filter(|w| hollow_verts.contains(w))
            .count()
            > 1;
        if shares_edge {
            continue;
        }
        if found.replace(g).is_some() {
            return Err(KirigamiError::Pattern(format!(
                "vertex {v} has two reserved faces diagonal to hollow {f}"
            )));
        }
    }
    found.ok_or_else(|| {
        KirigamiError::Pattern(format!(
            "vertex {v} has no reserved face diagonal to hollow {f}"
        ))
    })
}

/// Corner chords of every (hollow, vertex) pair in flap mode: the reserved
/// face's two edge lines at the vertex, prolonged past it to a chord of
/// length `h` parallel to the eventual core edge.
fn compute_chords(
    poly: &Polyhedron,
    roles: &[FaceRole],
    h: f64,
) -> Result<BTreeMap<(usize, usize), Chord>> {
    let mut platform_chords: BTreeMap<(usize, usize), Chord> = BTreeMap::new();
    let mut extensions: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (f, role) in roles.iter().enumerate() {
        if *role != FaceRole::FoldedPrimary {
            continue;
        }
        for &v in &poly.faces[f].vertices {
            let platform = chord_platform(poly, roles, f, v)?;
            let pv = &poly.faces[platform].vertices;
            let i = pv.iter().position(|w| *w == v).expect("vertex on platform");
            let prev = poly.vertices[pv[(i + pv.len() - 1) % pv.len()]];
            let next = poly.vertices[pv[(i + 1) % pv.len()]];
            let at = poly.vertices[v];
            let centroid = poly.face_centroid(platform);
            let b_hat = (at - centroid).normalize();
            let u_in = (at - prev).normalize();
            let u_out = (at - next).normalize();
            let alpha = (-u_in).angle(&(-u_out));
            let d = h / (2.0 * (alpha / 2.0).tan());
            let t_in = d / u_in.dot(&b_hat);
            let t_out = d / u_out.dot(&b_hat);
            let p_in = at + u_in * t_in;
            let p_out = at + u_out * t_out;
            debug_assert!(((p_out - p_in).norm() - h).abs() < 1e-9);
            extensions.insert((v, pv[(i + pv.len() - 1) % pv.len()]), t_in);
            extensions.insert((v, pv[(i + 1) % pv.len()]), t_out);
            platform_chords.insert((f, v), Chord { p_in, p_out, hollow: f });
            platform_chords.insert(
                (platform, v),
                Chord { p_in, p_out, hollow: f },
            );
        }
    }
    // Flap extensions along a shared edge line must not meet.
    for ((v, w), t) in &extensions {
        if let Some(t2) = extensions.get(&(*w, *v)) {
            let edge = (poly.vertices[*v] - poly.vertices[*w]).norm();
            if t + t2 >= edge {
                return Err(KirigamiError::InvalidParameter(format!(
                    "corner flap width {h} makes neighboring flaps collide"
                )));
            }
        }
    }
    Ok(platform_chords)
}

/// The sheets and hinge circuits of the unit around one hollow.
fn build_unit(
    poly: &Polyhedron,
    hollow: &Hollow,
    hollows: &[Hollow],
    hollow_by_face: &BTreeMap<usize, usize>,
    squares: &[SquareInfo],
    square_by_face: &BTreeMap<usize, usize>,
    flap_mode: bool,
) -> Result<LoopUnit> {
    let n = hollow.order;
    let mut sheets: Vec<String> = Vec::new();
    let mut circuits: Vec<Vec<String>> = Vec::new();
    for k in 0..n {
        let a = &hollow.attach[k];
        let b = &hollow.attach[(k + 1) % n];
        let pa = platform_id(a.platform_face);
        let pb = platform_id(b.platform_face);
        // The bridge between consecutive platforms crosses the hollow's edge
        // between the two attachments.
        let bridge_face = bridge_face(poly, hollow, k, flap_mode)?;
        let mut circuit = vec![pa.clone()];
        if let Some(si) = square_by_face.get(&bridge_face) {
            let sq = &squares[*si];
            let (first, second) = if sq.sides[0].0 == a.platform_face {
                (sq.sides[0].1.clone(), sq.sides[1].1.clone())
            } else if sq.sides[1].0 == a.platform_face {
                (sq.sides[1].1.clone(), sq.sides[0].1.clone())
            } else {
                return Err(KirigamiError::Pattern(format!(
                    "square {} does not border platform {}",
                    sq.face, a.platform_face
                )));
            };
            circuit.push(first);
            circuit.push(second);
        } else if let Some(hi) = hollow_by_face.get(&bridge_face) {
            let other = &hollows[*hi];
            let t_a = other
                .attach
                .iter()
                .find(|t| t.platform_face == a.platform_face)
                .ok_or_else(|| {
                    KirigamiError::Pattern(format!(
                        "hollow {} has no attachment on platform {}",
                        other.face, a.platform_face
                    ))
                })?;
            let t_b = other
                .attach
                .iter()
                .find(|t| t.platform_face == b.platform_face)
                .ok_or_else(|| {
                    KirigamiError::Pattern(format!(
                        "hollow {} has no attachment on platform {}",
                        other.face, b.platform_face
                    ))
                })?;
            circuit.push(t_a.trap_id.clone());
            circuit.push(other.core_id.clone());
            circuit.push(t_b.trap_id.clone());
        } else {
            return Err(KirigamiError::Pattern(format!(
                "face {bridge_face} between attachments of hollow {} is neither a halved square nor a hollow",
                hollow.face
            )));
        }
        circuit.push(pb);
        circuit.push(b.trap_id.clone());
        circuit.push(hollow.core_id.clone());
        circuit.push(a.trap_id.clone());
        circuits.push(circuit);
    }
    for c in &circuits {
        for id in c {
            if !sheets.contains(id) {
                sheets.push(id.clone());
            }
        }
    }
    Ok(LoopUnit {
        hollow_face: hollow.face,
        order: n,
        class: hollow.class,
        sheets,
        circuits,
    })
}

/// Face across the hollow's boundary between attachments `k` and `k+1`.
fn bridge_face(poly: &Polyhedron, hollow: &Hollow, k: usize, flap_mode: bool) -> Result<usize> {
    let f = hollow.face;
    let verts = &poly.faces[f].vertices;
    let n = hollow.order;
    if flap_mode {
        // Attachments sit over vertices; the bridge crosses the edge between
        // consecutive ones. Identify it by angle.
        let a = &hollow.attach[k];
        let b = &hollow.attach[(k + 1) % n];
        let mid_dir = (a.xi + b.xi).normalize();
        let mut best = None;
        let mut best_dot = -2.0;
        for i in 0..verts.len() {
            let va = poly.vertices[verts[i]];
            let vb = poly.vertices[verts[(i + 1) % verts.len()]];
            let dir = inplane_unit((va + vb) * 0.5 - hollow.center, &hollow.normal)?;
            let dot = dir.dot(&mid_dir);
            if dot > best_dot {
                best_dot = dot;
                best = poly.neighbor_across(f, verts[i], verts[(i + 1) % verts.len()]);
            }
        }
        best.ok_or_else(|| KirigamiError::Pattern(format!("hollow {f} has an open edge")))
    } else {
        // Attachments sit over alternating edges; the bridge is the edge
        // whose midpoint direction lies between the two attachment angles.
        let a = &hollow.attach[k];
        let b = &hollow.attach[(k + 1) % n];
        let mid_dir = (a.xi + b.xi).normalize();
        let mut best = None;
        let mut best_dot = -2.0;
        for i in 0..verts.len() {
            let va = poly.vertices[verts[i]];
            let vb = poly.vertices[verts[(i + 1) % verts.len()]];
            let mid = (va + vb) * 0.5;
            let dir = inplane_unit(mid - hollow.center, &hollow.normal)?;
            // Skip the attachment edges themselves.
            if dir.dot(&a.xi) > 1.0 - 1e-9 || dir.dot(&b.xi) > 1.0 - 1e-9 {
                continue;
            }
            let dot = dir.dot(&mid_dir);
            if dot > best_dot {
                best_dot = dot;
                best = poly.neighbor_across(f, verts[i], verts[(i + 1) % verts.len()]);
            }
        }
        best.ok_or_else(|| KirigamiError::Pattern(format!("hollow {f} has an open edge")))
    }
}
