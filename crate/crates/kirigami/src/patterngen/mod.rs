//! Cut-and-crease patterns over convex solids.
//!
//! A pattern keeps a subset of faces rigid (platforms), removes the remaining
//! faces, and fills each removed face with a sunken assembly: a central core
//! polygon joined to the surrounding platforms by rectangular trapezoid
//! panels, two parallel hinges each. Squares caught between two platforms are
//! instead split by a central valley crease into two half panels. The panels
//! and hinges here are pure geometry; `rigidkin` turns them into constraint
//! systems. Two patterns with swapped roles over the same solid superimpose
//! into a single sheet set carrying both motions; see `superpose`.

mod build;
pub mod foldmap;
pub mod superpose;
pub mod unit;

pub use build::{build_radial_pattern, PatternSpec};
pub use superpose::superimpose;

use crate::error::{KirigamiError, Result};
use crate::geom::{polygon_area, Placement};
use crate::solids::SolidId;
use nalgebra::{Vector2, Vector3};
use std::collections::BTreeMap;

/// Role of a source face under a radial transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceRole {
    /// Kept rigid; translates toward the center during folding.
    Reserved,
    /// Removed and replaced by a core-and-trapezoid assembly.
    FoldedPrimary,
    /// Removed as well: either a square split by a valley crease (sevenfold
    /// circuits) or a second hollow family (eightfold circuits).
    FoldedSecondary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SheetRole {
    Platform,
    SquareHalf,
    Trapezoid,
    Core,
    SquareQuarter,
}

/// Mountain/valley tag at the deployed state, viewed from outside the solid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FoldSign {
    Mountain,
    Valley,
}

/// Which parent pattern activates a crease of a superposed pattern. Plain
/// patterns use `Pattern` throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CreaseOwner {
    Pattern,
    ParentA,
    ParentB,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum HingeLabel {
    /// Platform to half-square along a source edge.
    PlatformSquare,
    /// Central valley crease between the two halves of a square.
    SquareCrease,
    /// Platform (or its corner flap) to a trapezoid.
    PlatformTrapezoid,
    /// Core to a trapezoid; the designated one drives the fold.
    CoreTrapezoid,
    /// Midline segment between square quarters of a superposed pattern.
    QuarterCrease,
}

impl HingeLabel {
    pub fn name(&self) -> &'static str {
        match self {
            HingeLabel::PlatformSquare => "platform-square",
            HingeLabel::SquareCrease => "square-crease",
            HingeLabel::PlatformTrapezoid => "platform-trapezoid",
            HingeLabel::CoreTrapezoid => "core-trapezoid",
            HingeLabel::QuarterCrease => "quarter-crease",
        }
    }
}

/// A rigid planar panel. The boundary is a simple counterclockwise polygon in
/// the local frame (z = 0, outward normal +z); `deployed` maps local to world
/// coordinates at the deployed state.
#[derive(Debug, Clone)]
pub struct PanelSheet {
    pub id: String,
    pub role: SheetRole,
    pub boundary: Vec<Vector2<f64>>,
    pub deployed: Placement,
    /// Source face index the panel derives from, when it does.
    pub face: Option<usize>,
    /// For platforms with corner flaps: the bare reserved-face polygon, used
    /// by endpoint checks that compare against the target solid.
    pub face_polygon: Option<Vec<Vector2<f64>>>,
}

impl PanelSheet {
    pub fn area(&self) -> f64 {
        polygon_area(&self.boundary)
    }

    pub fn world_boundary(&self) -> Vec<Vector3<f64>> {
        self.boundary
            .iter()
            .map(|p| self.deployed.apply(&Vector3::new(p.x, p.y, 0.0)))
            .collect()
    }

    /// Deployed world outer normal.
    pub fn world_normal(&self) -> Vector3<f64> {
        self.deployed.apply_vector(&Vector3::z())
    }
}

/// A revolute crease between two panels. The axis segment is stored in each
/// panel's local frame; at the deployed state both map to the same world
/// segment.
#[derive(Debug, Clone)]
pub struct CreaseHinge {
    pub panel_a: String,
    pub panel_b: String,
    pub axis_a: (Vector2<f64>, Vector2<f64>),
    pub axis_b: (Vector2<f64>, Vector2<f64>),
    pub sign: FoldSign,
    pub label: HingeLabel,
    pub owner: CreaseOwner,
}

/// A spherical joint pinning one boundary point of panel A to one of panel
/// B. Superposed patterns tie the square-quarter corners to the trapezoid
/// ends that meet them at each source vertex; the shared point is an
/// endpoint of every hinge axis involved, so either parent's motion carries
/// all three corners with the same moving platform and the tie stays slack
/// along both branches.
#[derive(Debug, Clone)]
pub struct CornerTie {
    pub panel_a: String,
    pub panel_b: String,
    pub point_a: Vector2<f64>,
    pub point_b: Vector2<f64>,
}

/// One folding circuit around a removed face: its platforms, square halves
/// (sevenfold circuits only), trapezoids, and core.
#[derive(Debug, Clone)]
pub struct LoopUnit {
    pub hollow_face: usize,
    pub order: usize,
    pub class: usize,
    pub sheets: Vec<String>,
    /// Panel id cycles of the independent hinge circuits, one per platform.
    pub circuits: Vec<Vec<String>>,
}

/// Geometry of one hollow family, shared by all its trapezoid hinges: the
/// platform tilt `beta` against the hollow plane, the trapezoid span `ell`,
/// and the deployed offset `v0` from core edge to attachment line in the
/// (outward, normal) frame of the hollow.
#[derive(Debug, Clone, Copy)]
pub struct HollowClass {
    pub cos_beta: f64,
    pub sin_beta: f64,
    pub ell: f64,
    pub v0: Vector2<f64>,
    pub core_edge: f64,
}

impl HollowClass {
    /// Core sink depth at travel `s`; zero at deployed.
    pub fn sigma(&self, s: f64) -> f64 {
        let vxi = self.v0.x - s * self.sin_beta;
        let radicand = self.ell * self.ell - vxi * vxi;
        assert!(radicand >= -1e-12, "fold relation leaves the admissible range");
        s * self.cos_beta - self.v0.y + radicand.max(0.0).sqrt()
    }

    /// Trapezoid rotation angle at travel `s`: the turn carrying the deployed
    /// offset `v0` onto `v(s)` about the attachment direction.
    pub fn swing(&self, s: f64) -> f64 {
        let vxi = self.v0.x - s * self.sin_beta;
        let vzeta = (self.ell * self.ell - vxi * vxi).max(0.0).sqrt();
        vzeta.atan2(vxi) - self.v0.y.atan2(self.v0.x)
    }
}

/// How a panel moves along the closed-form radial path, as a function of the
/// travel parameter `s`.
#[derive(Debug, Clone)]
pub enum PanelMotion {
    /// Reserved panels: translate by `-s * dir`.
    Translate { dir: Vector3<f64> },
    /// Cores: translate by `-sigma_class(s) * dir`.
    Sink { class: usize, dir: Vector3<f64> },
    /// Trapezoids: translate with the platform, rotate by `swing(s)` about
    /// the attachment axis.
    Swing {
        class: usize,
        platform_dir: Vector3<f64>,
        pivot: Vector3<f64>,
        axis: Vector3<f64>,
    },
    /// Square halves: translate with the platform, rotate about the platform
    /// hinge so the free edge meets the tent apex shared with the twin half.
    Tent {
        platform_dir: Vector3<f64>,
        pivot: Vector3<f64>,
        axis: Vector3<f64>,
        /// Deployed vector from own hinge midpoint to the opposite hinge
        /// midpoint; its direction is travel-invariant.
        chord: Vector3<f64>,
        /// Closing rate: separation is `|chord| - s * rate`.
        rate: f64,
        /// Unit normal of the square pointing out of the solid.
        outward: Vector3<f64>,
    },
}

/// Closed-form description of the one-parameter radial motion of a pattern.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    /// Travel at the folded state.
    pub s_end: f64,
    /// Driving-angle backoff before the flat-fold limit of the halved
    /// squares; zero for patterns without them.
    pub driving_backoff: f64,
    pub classes: Vec<HollowClass>,
    pub motions: BTreeMap<String, PanelMotion>,
    /// Index into `hinges` of the designated driving crease.
    pub driving_hinge: usize,
    pub driving_class: usize,
}

#[derive(Debug, Clone)]
pub struct KirigamiPattern {
    pub name: String,
    pub source: SolidId,
    pub edge_length: f64,
    pub sheets: Vec<PanelSheet>,
    pub hinges: Vec<CreaseHinge>,
    /// Point ties of a superposed pattern; empty for plain patterns.
    pub ties: Vec<CornerTie>,
    pub units: Vec<LoopUnit>,
    pub profile: RadialProfile,
    /// Built by `superimpose`: hinge owners tag which parent motion folds
    /// each crease, and the square quarters hang on corner ties.
    pub superposed: bool,
}

impl KirigamiPattern {
    pub fn sheet(&self, id: &str) -> Option<&PanelSheet> {
        self.sheets.iter().find(|s| s.id == id)
    }

    pub fn sheet_index(&self, id: &str) -> Option<usize> {
        self.sheets.iter().position(|s| s.id == id)
    }

    /// World axis segment of hinge `h` at the deployed state, from panel A's
    /// side.
    pub fn world_axis(&self, h: usize) -> (Vector3<f64>, Vector3<f64>) {
        let hinge = &self.hinges[h];
        let a = self.sheet(&hinge.panel_a).expect("hinge panel exists");
        let lift = |p: &Vector2<f64>| a.deployed.apply(&Vector3::new(p.x, p.y, 0.0));
        (lift(&hinge.axis_a.0), lift(&hinge.axis_a.1))
    }

    pub fn total_sheet_area(&self) -> f64 {
        self.sheets.iter().map(|s| s.area()).sum()
    }

    /// Structural invariants: simple positively oriented boundaries, hinge
    /// axes of equal length whose two local segments coincide in world space
    /// at the deployed state, tie points that coincide when deployed, all
    /// referenced panels present, and a hinge-and-tie graph in one piece.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-9 * self.edge_length.max(1.0);
        let fail = |msg: String| Err(KirigamiError::Pattern(msg));
        let mut ids = std::collections::BTreeSet::new();
        for sheet in &self.sheets {
            if !ids.insert(sheet.id.clone()) {
                return fail(format!("duplicate sheet id {}", sheet.id));
            }
            if sheet.boundary.len() < 3 {
                return fail(format!("sheet {} has a degenerate boundary", sheet.id));
            }
            if sheet.area() <= tol * tol {
                return fail(format!("sheet {} has non-positive area", sheet.id));
            }
            if sheet.deployed.orthonormality_defect() > 1e-12 {
                return fail(format!("sheet {} has a non-rigid placement", sheet.id));
            }
        }
        for (h, hinge) in self.hinges.iter().enumerate() {
            let a = self
                .sheet(&hinge.panel_a)
                .ok_or_else(|| KirigamiError::Pattern(format!("hinge {h} panel missing")))?;
            let b = self
                .sheet(&hinge.panel_b)
                .ok_or_else(|| KirigamiError::Pattern(format!("hinge {h} panel missing")))?;
            let la = (hinge.axis_a.1 - hinge.axis_a.0).norm();
            let lb = (hinge.axis_b.1 - hinge.axis_b.0).norm();
            if (la - lb).abs() > tol || la < tol {
                return fail(format!("hinge {h} axis segments disagree in length"));
            }
            let lift_a = |p: &Vector2<f64>| a.deployed.apply(&Vector3::new(p.x, p.y, 0.0));
            let lift_b = |p: &Vector2<f64>| b.deployed.apply(&Vector3::new(p.x, p.y, 0.0));
            if (lift_a(&hinge.axis_a.0) - lift_b(&hinge.axis_b.0)).norm() > tol
                || (lift_a(&hinge.axis_a.1) - lift_b(&hinge.axis_b.1)).norm() > tol
            {
                return fail(format!("hinge {h} axis segments do not coincide when deployed"));
            }
        }
        for (t, tie) in self.ties.iter().enumerate() {
            if tie.panel_a == tie.panel_b {
                return fail(format!("tie {t} pins a panel to itself"));
            }
            let a = self
                .sheet(&tie.panel_a)
                .ok_or_else(|| KirigamiError::Pattern(format!("tie {t} panel missing")))?;
            let b = self
                .sheet(&tie.panel_b)
                .ok_or_else(|| KirigamiError::Pattern(format!("tie {t} panel missing")))?;
            let wa = a.deployed.apply(&Vector3::new(tie.point_a.x, tie.point_a.y, 0.0));
            let wb = b.deployed.apply(&Vector3::new(tie.point_b.x, tie.point_b.y, 0.0));
            if (wa - wb).norm() > tol {
                return fail(format!("tie {t} points do not coincide when deployed"));
            }
        }
        let n = self.sheets.len();
        let index: BTreeMap<&str, usize> = self
            .sheets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), i))
            .collect();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let pairs = self
            .hinges
            .iter()
            .map(|h| (&h.panel_a, &h.panel_b))
            .chain(self.ties.iter().map(|t| (&t.panel_a, &t.panel_b)));
        for (pa, pb) in pairs {
            let a = find(&mut parent, index[pa.as_str()]);
            let b = find(&mut parent, index[pb.as_str()]);
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        for i in 1..n {
            if find(&mut parent, i) != root {
                return fail(format!(
                    "the pattern is disconnected at sheet {}",
                    self.sheets[i].id
                ));
            }
        }
        Ok(())
    }
}
