//! Rigid-panel kinematics: hinge constraint systems over a pattern.
//!
//! A configuration assigns every panel a rigid delta from its deployed
//! placement; the ground panel's delta is pinned to the identity, so the
//! deployed state is the all-identity configuration with zero residual. Each
//! hinge contributes five constraint rows: two axis-alignment components and
//! three point-coincidence components, all expressed against data frozen at
//! the deployed state. Corner ties contribute the three point rows alone.
//! Unknowns are six twist coordinates per non-ground panel; updates
//! left-compose the twist exponential onto the deltas.

mod mobility;
mod solve;
mod trace;

pub use mobility::{mobility, MobilityReport};
pub use solve::{solve_closure, SolveOptions};
pub use trace::{trace_fold, FoldSample, FoldTrace, PredictorUse, TraceOptions, TraceSchedule};

use crate::error::{KirigamiError, Result};
use crate::geom::{signed_dihedral, Placement};
use crate::linalg::SparseRowMatrix;
use crate::patterngen::{CreaseOwner, FoldSign, HingeLabel, KirigamiPattern, SheetRole};
use nalgebra::Vector3;
use ndarray::Array1;
use std::collections::BTreeMap;

/// One hinge with its world-frame deployed data.
#[derive(Debug, Clone)]
pub struct AssemblyHinge {
    pub a: usize,
    pub b: usize,
    /// A point on the deployed axis line.
    pub point: Vector3<f64>,
    /// Unit axis direction at the deployed state.
    pub axis: Vector3<f64>,
    /// Fixed orthonormal pair perpendicular to `axis`.
    pub basis: (Vector3<f64>, Vector3<f64>),
    pub label: HingeLabel,
    pub owner: CreaseOwner,
    pub sign: FoldSign,
}

/// One point tie with its world-frame deployed anchor.
#[derive(Debug, Clone)]
pub struct AssemblyTie {
    pub a: usize,
    pub b: usize,
    /// The shared world point at the deployed state.
    pub point: Vector3<f64>,
}

/// A pattern compiled for numerics: panels by index, hinges and ties in
/// world frame.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub panel_ids: Vec<String>,
    pub index: BTreeMap<String, usize>,
    pub hinges: Vec<AssemblyHinge>,
    pub ties: Vec<AssemblyTie>,
    pub ground: usize,
    pub edge_length: f64,
    /// Deployed world placement of each panel's local frame.
    pub deployed: Vec<Placement>,
    /// Deployed world outer normal of each panel.
    pub normals: Vec<Vector3<f64>>,
    /// Deployed world boundary rings.
    pub boundaries: Vec<Vec<Vector3<f64>>>,
    pub roles: Vec<SheetRole>,
    pub faces: Vec<Option<usize>>,
}

/// Per-panel rigid deltas from the deployed placements.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub deltas: Vec<Placement>,
}

impl Configuration {
    pub fn identity(panels: usize) -> Self {
        Configuration {
            deltas: vec![Placement::identity(); panels],
        }
    }

    /// Left-compose twist increments onto every non-ground panel, then
    /// restore exact orthonormality.
    pub fn apply_step(&mut self, assembly: &Assembly, step: &[f64]) {
        assert_eq!(step.len(), assembly.coords());
        for (i, delta) in self.deltas.iter_mut().enumerate() {
            let Some(base) = assembly.col_base(i) else { continue };
            let omega = Vector3::new(step[base], step[base + 1], step[base + 2]);
            let v = Vector3::new(step[base + 3], step[base + 4], step[base + 5]);
            *delta = Placement::from_twist(&omega, &v).compose(delta).renormalized();
        }
    }
}

impl Assembly {
    pub fn from_pattern(pattern: &KirigamiPattern) -> Result<Self> {
        Self::with_ground(pattern, &pattern.sheets[0].id.clone())
    }

    pub fn with_ground(pattern: &KirigamiPattern, ground_id: &str) -> Result<Self> {
        pattern.validate()?;
        let panel_ids: Vec<String> = pattern.sheets.iter().map(|s| s.id.clone()).collect();
        let index: BTreeMap<String, usize> = panel_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let ground = *index
            .get(ground_id)
            .ok_or_else(|| KirigamiError::Assembly(format!("no panel named {ground_id}")))?;
        let mut hinges = Vec::with_capacity(pattern.hinges.len());
        for (h, hinge) in pattern.hinges.iter().enumerate() {
            let (p0, p1) = pattern.world_axis(h);
            let axis = (p1 - p0).normalize();
            // Deterministic basis pair: orthogonalize the least-aligned
            // coordinate axis against the hinge direction.
            let seed = [Vector3::x(), Vector3::y(), Vector3::z()]
                .into_iter()
                .min_by(|u, v| {
                    u.dot(&axis).abs().total_cmp(&v.dot(&axis).abs())
                })
                .unwrap();
            let e1 = (seed - axis * seed.dot(&axis)).normalize();
            let e2 = axis.cross(&e1);
            hinges.push(AssemblyHinge {
                a: index[&hinge.panel_a],
                b: index[&hinge.panel_b],
                point: p0,
                axis,
                basis: (e1, e2),
                label: hinge.label,
                owner: hinge.owner,
                sign: hinge.sign,
            });
        }
        let ties = pattern
            .ties
            .iter()
            .map(|tie| {
                let sheet = pattern.sheet(&tie.panel_a).expect("validated tie panel");
                let point =
                    sheet.deployed.apply(&Vector3::new(tie.point_a.x, tie.point_a.y, 0.0));
                AssemblyTie {
                    a: index[&tie.panel_a],
                    b: index[&tie.panel_b],
                    point,
                }
            })
            .collect();
        let deployed: Vec<Placement> = pattern.sheets.iter().map(|s| s.deployed).collect();
        let normals = pattern.sheets.iter().map(|s| s.world_normal()).collect();
        let boundaries = pattern.sheets.iter().map(|s| s.world_boundary()).collect();
        let roles = pattern.sheets.iter().map(|s| s.role).collect();
        let faces = pattern.sheets.iter().map(|s| s.face).collect();
        Ok(Assembly {
            panel_ids,
            index,
            hinges,
            ties,
            ground,
            edge_length: pattern.edge_length,
            deployed,
            normals,
            boundaries,
            roles,
            faces,
        })
    }

    pub fn panels(&self) -> usize {
        self.panel_ids.len()
    }

    /// Twist coordinates: six per non-ground panel.
    pub fn coords(&self) -> usize {
        6 * (self.panels() - 1)
    }

    /// Five rows per hinge, then three per tie.
    pub fn rows(&self) -> usize {
        5 * self.hinges.len() + 3 * self.ties.len()
    }

    /// First coordinate column of panel `i`, `None` for the ground panel.
    pub fn col_base(&self, i: usize) -> Option<usize> {
        match i.cmp(&self.ground) {
            std::cmp::Ordering::Less => Some(6 * i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(6 * (i - 1)),
        }
    }

    /// Residual of all hinge and tie constraints, in row order.
    pub fn residual(&self, config: &Configuration) -> Array1<f64> {
        let mut r = Array1::zeros(self.rows());
        for (h, hinge) in self.hinges.iter().enumerate() {
            let da = &config.deltas[hinge.a];
            let db = &config.deltas[hinge.b];
            let d_a = da.apply_vector(&hinge.axis);
            let d_b = db.apply_vector(&hinge.axis);
            let cross = d_a.cross(&d_b);
            let gap = da.apply(&hinge.point) - db.apply(&hinge.point);
            let base = 5 * h;
            r[base] = hinge.basis.0.dot(&cross);
            r[base + 1] = hinge.basis.1.dot(&cross);
            r[base + 2] = gap.x;
            r[base + 3] = gap.y;
            r[base + 4] = gap.z;
        }
        let tie_base = 5 * self.hinges.len();
        for (t, tie) in self.ties.iter().enumerate() {
            let gap = config.deltas[tie.a].apply(&tie.point)
                - config.deltas[tie.b].apply(&tie.point);
            let base = tie_base + 3 * t;
            r[base] = gap.x;
            r[base + 1] = gap.y;
            r[base + 2] = gap.z;
        }
        r
    }

    /// Analytic constraint Jacobian with respect to the twist coordinates.
    pub fn jacobian(&self, config: &Configuration) -> SparseRowMatrix {
        let mut j = SparseRowMatrix::zeros(self.rows(), self.coords());
        for (h, hinge) in self.hinges.iter().enumerate() {
            let da = &config.deltas[hinge.a];
            let db = &config.deltas[hinge.b];
            let d_a = da.apply_vector(&hinge.axis);
            let d_b = db.apply_vector(&hinge.axis);
            let x_a = da.apply(&hinge.point);
            let x_b = db.apply(&hinge.point);
            let base = 5 * h;
            for (k, e) in [hinge.basis.0, hinge.basis.1].iter().enumerate() {
                // d/dt [e . (d_a x d_b)] under left twists omega_a, omega_b.
                let ga = d_b * e.dot(&d_a) - e * d_a.dot(&d_b);
                let gb = e * d_a.dot(&d_b) - d_a * e.dot(&d_b);
                if let Some(ca) = self.col_base(hinge.a) {
                    for ax in 0..3 {
                        j.add(base + k, ca + ax, ga[ax]);
                    }
                }
                if let Some(cb) = self.col_base(hinge.b) {
                    for ax in 0..3 {
                        j.add(base + k, cb + ax, gb[ax]);
                    }
                }
            }
            // Point rows: velocity of x under (omega, v) is omega x x + v.
            if let Some(ca) = self.col_base(hinge.a) {
                add_point_block(&mut j, base + 2, ca, &x_a, 1.0);
            }
            if let Some(cb) = self.col_base(hinge.b) {
                add_point_block(&mut j, base + 2, cb, &x_b, -1.0);
            }
        }
        let tie_base = 5 * self.hinges.len();
        for (t, tie) in self.ties.iter().enumerate() {
            let base = tie_base + 3 * t;
            if let Some(ca) = self.col_base(tie.a) {
                let x = config.deltas[tie.a].apply(&tie.point);
                add_point_block(&mut j, base, ca, &x, 1.0);
            }
            if let Some(cb) = self.col_base(tie.b) {
                let x = config.deltas[tie.b].apply(&tie.point);
                add_point_block(&mut j, base, cb, &x, -1.0);
            }
        }
        j
    }

    /// Signed dihedral across hinge `h`, measured about the axis as carried
    /// by panel A; zero when coplanar, +-pi at a flat fold.
    pub fn dihedral(&self, config: &Configuration, h: usize) -> f64 {
        let hinge = &self.hinges[h];
        let n_a = config.deltas[hinge.a].apply_vector(&self.normals[hinge.a]);
        let n_b = config.deltas[hinge.b].apply_vector(&self.normals[hinge.b]);
        let axis = config.deltas[hinge.a].apply_vector(&hinge.axis);
        signed_dihedral(&n_a, &n_b, &axis)
    }

    /// Jacobian row of one dihedral: relative angular rate about the axis.
    pub fn dihedral_gradient(&self, config: &Configuration, h: usize) -> Vec<(usize, f64)> {
        let hinge = &self.hinges[h];
        let axis = config.deltas[hinge.a].apply_vector(&hinge.axis);
        let mut row = Vec::with_capacity(6);
        if let Some(ca) = self.col_base(hinge.a) {
            for ax in 0..3 {
                row.push((ca + ax, -axis[ax]));
            }
        }
        if let Some(cb) = self.col_base(hinge.b) {
            for ax in 0..3 {
                row.push((cb + ax, axis[ax]));
            }
        }
        row
    }

    /// Turn absolute per-panel deltas into a configuration in this
    /// assembly's gauge: left-compose everything with the inverse of the
    /// ground panel's delta so the ground keeps its deployed pose.
    pub fn configuration_from_placements(
        &self,
        placed: &BTreeMap<String, Placement>,
    ) -> Configuration {
        let g_inv = placed[&self.panel_ids[self.ground]].inverse();
        let deltas = self
            .panel_ids
            .iter()
            .map(|id| g_inv.compose(&placed[id]).renormalized())
            .collect();
        Configuration { deltas }
    }

    /// World boundary rings of every panel at a configuration.
    pub fn world_boundaries(&self, config: &Configuration) -> Vec<Vec<Vector3<f64>>> {
        self.boundaries
            .iter()
            .enumerate()
            .map(|(i, ring)| {
                ring.iter()
                    .map(|p| config.deltas[i].apply(p))
                    .collect()
            })
            .collect()
    }

    /// Centroid of one panel's boundary ring at a configuration.
    pub fn panel_centroid(&self, config: &Configuration, i: usize) -> Vector3<f64> {
        let ring = &self.boundaries[i];
        let sum: Vector3<f64> = ring.iter().fold(Vector3::zeros(), |acc, p| acc + p);
        config.deltas[i].apply(&(sum / ring.len() as f64))
    }
}

fn add_point_block(
    j: &mut SparseRowMatrix,
    row: usize,
    col: usize,
    x: &Vector3<f64>,
    sign: f64,
) {
    // sign * (-[x]_cross) for the omega block, sign * I for the v block.
    let neg = [
        [0.0, x.z, -x.y],
        [-x.z, 0.0, x.x],
        [x.y, -x.x, 0.0],
    ];
    for r in 0..3 {
        for c in 0..3 {
            let val = sign * neg[r][c];
            if val != 0.0 {
                j.add(row + r, col + c, val);
            }
        }
        j.add(row + r, col + 3 + r, sign);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterngen::unit::build_loop_unit;
    use nalgebra::Unit;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn finite_difference_jacobian(
        assembly: &Assembly,
        config: &Configuration,
        step: f64,
    ) -> ndarray::Array2<f64> {
        let cols = assembly.coords();
        let rows = assembly.rows();
        let mut out = ndarray::Array2::zeros((rows, cols));
        for c in 0..cols {
            let mut plus = config.clone();
            let mut minus = config.clone();
            let mut dp = vec![0.0; cols];
            dp[c] = step;
            plus.apply_step(assembly, &dp);
            dp[c] = -step;
            minus.apply_step(assembly, &dp);
            let rp = assembly.residual(&plus);
            let rm = assembly.residual(&minus);
            for r in 0..rows {
                out[(r, c)] = (rp[r] - rm[r]) / (2.0 * step);
            }
        }
        out
    }

    #[test]
    fn deployed_configuration_has_zero_residual() {
        let pattern = build_loop_unit(3).unwrap();
        let assembly = Assembly::from_pattern(&pattern).unwrap();
        let r = assembly.residual(&Configuration::identity(assembly.panels()));
        assert!(r.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn jacobian_matches_finite_differences_off_manifold() {
        let pattern = build_loop_unit(3).unwrap();
        let assembly = Assembly::from_pattern(&pattern).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        let mut config = Configuration::identity(assembly.panels());
        let step: Vec<f64> = (0..assembly.coords())
            .map(|_| rng.random_range(-0.05..0.05))
            .collect();
        config.apply_step(&assembly, &step);
        let analytic = assembly.jacobian(&config).to_dense();
        let numeric = finite_difference_jacobian(&assembly, &config, 1e-6);
        let mut worst = 0.0_f64;
        for r in 0..assembly.rows() {
            for c in 0..assembly.coords() {
                worst = worst.max((analytic[(r, c)] - numeric[(r, c)]).abs());
            }
        }
        assert!(worst < 1e-6, "jacobian mismatch {worst}");
    }

    #[test]
    fn residual_is_invariant_under_global_rigid_motion() {
        let pattern = build_loop_unit(3).unwrap();
        let assembly = Assembly::from_pattern(&pattern).unwrap();
        // The residual never pins the ground delta, so moving every panel by
        // the same rigid map must leave it at zero.
        let g = Placement::rotation_about_line(
            &Vector3::new(0.3, -0.7, 0.2),
            &Unit::new_normalize(Vector3::new(1.0, 2.0, -0.5)),
            0.9,
        )
        .compose(&Placement::from_translation(Vector3::new(0.4, 0.1, -0.8)));
        let config = Configuration {
            deltas: vec![g; pattern.sheets.len()],
        };
        let r = assembly.residual(&config);
        assert!(r.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn single_hinge_constrains_five_of_six_relative_freedoms() {
        // Two unit-square panels sharing an edge: rank must be exactly 5 and
        // the free motion must be the relative hinge rotation.
        use crate::patterngen::{
            CreaseHinge, CreaseOwner, FoldSign, HingeLabel, HollowClass, KirigamiPattern,
            PanelMotion, PanelSheet, RadialProfile, SheetRole,
        };
        use nalgebra::Vector2;
        let square = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(0.0, 1.0),
        ];
        let sheet = |id: &str, deployed: Placement| PanelSheet {
            id: id.into(),
            role: SheetRole::Platform,
            boundary: square.clone(),
            deployed,
            face: None,
            face_polygon: None,
        };
        let flip = Placement::new(
            nalgebra::Matrix3::from_columns(&[
                Vector3::x(),
                -Vector3::y(),
                -Vector3::z(),
            ]),
            Vector3::zeros(),
        );
        let pattern = KirigamiPattern {
            name: "hinge pair".into(),
            source: crate::solids::SolidId::Cube,
            edge_length: 1.0,
            ties: vec![],
            sheets: vec![sheet("a", Placement::identity()), sheet("b", flip)],
            hinges: vec![CreaseHinge {
                panel_a: "a".into(),
                panel_b: "b".into(),
                axis_a: (Vector2::new(0.0, 0.0), Vector2::new(1.0, 0.0)),
                axis_b: (Vector2::new(0.0, 0.0), Vector2::new(1.0, 0.0)),
                sign: FoldSign::Mountain,
                label: HingeLabel::PlatformSquare,
                owner: CreaseOwner::Pattern,
            }],
            units: vec![],
            profile: RadialProfile {
                s_end: 1.0,
                driving_backoff: 0.0,
                classes: vec![HollowClass {
                    cos_beta: 0.0,
                    sin_beta: 1.0,
                    ell: 1.0,
                    v0: Vector2::new(1.0, 0.0),
                    core_edge: 1.0,
                }],
                motions: [
                    ("a".to_string(), PanelMotion::Translate { dir: Vector3::z() }),
                    ("b".to_string(), PanelMotion::Translate { dir: Vector3::z() }),
                ]
                .into_iter()
                .collect(),
                driving_hinge: 0,
                driving_class: 0,
            },
            superposed: false,
        };
        let assembly = Assembly::from_pattern(&pattern).unwrap();
        let config = Configuration::identity(2);
        let j = assembly.jacobian(&config).to_dense();
        let sv = crate::linalg::singular_values(&j);
        let rank = crate::linalg::rank_from_singular_values(&sv, 1e-10);
        assert_eq!(rank, 5);
        // The surviving freedom rotates about the shared edge: check that a
        // pure hinge twist is in the nullspace.
        let twist = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let jv = j.dot(&ndarray::arr1(&twist));
        assert!(jv.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn two_fixed_hinges_lock_a_panel() {
        // A panel hinged to ground along two non-parallel edges cannot move:
        // rank 6 once both hinges act on the same 6 coordinates.
        use crate::patterngen::{
            CreaseHinge, CreaseOwner, FoldSign, HingeLabel, HollowClass, KirigamiPattern,
            PanelMotion, PanelSheet, RadialProfile, SheetRole,
        };
        use nalgebra::Vector2;
        let tri = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(0.0, 1.0),
        ];
        let sheet = |id: &str| PanelSheet {
            id: id.into(),
            role: SheetRole::Platform,
            boundary: tri.clone(),
            deployed: Placement::identity(),
            face: None,
            face_polygon: None,
        };
        let hinge = |a: &str, b: &str, p: Vector2<f64>, q: Vector2<f64>| CreaseHinge {
            panel_a: a.into(),
            panel_b: b.into(),
            axis_a: (p, q),
            axis_b: (p, q),
            sign: FoldSign::Mountain,
            label: HingeLabel::PlatformSquare,
            owner: CreaseOwner::Pattern,
        };
        let pattern = KirigamiPattern {
            name: "locked pair".into(),
            source: crate::solids::SolidId::Cube,
            edge_length: 1.0,
            ties: vec![],
            sheets: vec![sheet("g"), sheet("m")],
            hinges: vec![
                hinge("g", "m", Vector2::new(0.0, 0.0), Vector2::new(1.0, 0.0)),
                hinge("g", "m", Vector2::new(0.0, 0.0), Vector2::new(0.0, 1.0)),
            ],
            units: vec![],
            profile: RadialProfile {
                s_end: 1.0,
                driving_backoff: 0.0,
                classes: vec![HollowClass {
                    cos_beta: 0.0,
                    sin_beta: 1.0,
                    ell: 1.0,
                    v0: Vector2::new(1.0, 0.0),
                    core_edge: 1.0,
                }],
                motions: [
                    ("g".to_string(), PanelMotion::Translate { dir: Vector3::z() }),
                    ("m".to_string(), PanelMotion::Translate { dir: Vector3::z() }),
                ]
                .into_iter()
                .collect(),
                driving_hinge: 0,
                driving_class: 0,
            },
            superposed: false,
        };
        let assembly = Assembly::from_pattern(&pattern).unwrap();
        let j = assembly
            .jacobian(&Configuration::identity(2))
            .to_dense();
        let sv = crate::linalg::singular_values(&j);
        assert_eq!(crate::linalg::rank_from_singular_values(&sv, 1e-10), 6);
    }

    #[test]
    fn a_tie_pair_acts_like_the_hinge_through_its_points() {
        // Two squares joined only by point ties at their two shared corners:
        // the pair must behave exactly like a revolute joint on that edge,
        // which is what lets superposed patterns replace a lost platform
        // hinge with two corner ties.
        use crate::patterngen::{
            CornerTie, HollowClass, KirigamiPattern, PanelMotion, PanelSheet, RadialProfile,
            SheetRole,
        };
        use nalgebra::Vector2;
        let square = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(0.0, 1.0),
        ];
        let sheet = |id: &str, deployed: Placement| PanelSheet {
            id: id.into(),
            role: SheetRole::SquareQuarter,
            boundary: square.clone(),
            deployed,
            face: None,
            face_polygon: None,
        };
        let flip = Placement::new(
            nalgebra::Matrix3::from_columns(&[
                Vector3::x(),
                -Vector3::y(),
                -Vector3::z(),
            ]),
            Vector3::zeros(),
        );
        let tie = |p: Vector2<f64>| CornerTie {
            panel_a: "a".into(),
            panel_b: "b".into(),
            point_a: p,
            point_b: p,
        };
        let pattern = KirigamiPattern {
            name: "tied pair".into(),
            source: crate::solids::SolidId::Cube,
            edge_length: 1.0,
            sheets: vec![sheet("a", Placement::identity()), sheet("b", flip)],
            hinges: vec![],
            ties: vec![
                tie(Vector2::new(0.0, 0.0)),
                tie(Vector2::new(1.0, 0.0)),
            ],
            units: vec![],
            profile: RadialProfile {
                s_end: 1.0,
                driving_backoff: 0.0,
                classes: vec![HollowClass {
                    cos_beta: 0.0,
                    sin_beta: 1.0,
                    ell: 1.0,
                    v0: Vector2::new(1.0, 0.0),
                    core_edge: 1.0,
                }],
                motions: [
                    ("a".to_string(), PanelMotion::Translate { dir: Vector3::z() }),
                    ("b".to_string(), PanelMotion::Translate { dir: Vector3::z() }),
                ]
                .into_iter()
                .collect(),
                driving_hinge: 0,
                driving_class: 0,
            },
            superposed: true,
        };
        let assembly = Assembly::from_pattern(&pattern).unwrap();
        assert_eq!(assembly.rows(), 6);
        let config = Configuration::identity(2);
        assert!(assembly.residual(&config).iter().all(|v| v.abs() < 1e-12));
        let j = assembly.jacobian(&config).to_dense();
        let sv = crate::linalg::singular_values(&j);
        assert_eq!(crate::linalg::rank_from_singular_values(&sv, 1e-10), 5);
        // The surviving freedom is the rotation about the tied edge.
        let twist = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let jv = j.dot(&ndarray::arr1(&twist));
        assert!(jv.iter().all(|v| v.abs() < 1e-12));
        // Tie rows must also match finite differences away from closure.
        let mut rng = StdRng::seed_from_u64(11);
        let mut off = Configuration::identity(2);
        let step: Vec<f64> = (0..assembly.coords())
            .map(|_| rng.random_range(-0.05..0.05))
            .collect();
        off.apply_step(&assembly, &step);
        let analytic = assembly.jacobian(&off).to_dense();
        let numeric = finite_difference_jacobian(&assembly, &off, 1e-6);
        let mut worst = 0.0_f64;
        for r in 0..assembly.rows() {
            for c in 0..assembly.coords() {
                worst = worst.max((analytic[(r, c)] - numeric[(r, c)]).abs());
            }
        }
        assert!(worst < 1e-6, "tie jacobian mismatch {worst}");
    }
}
