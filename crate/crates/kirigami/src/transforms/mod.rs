//! Catalog of radial transformation paths between convex solids, and the
//! verification battery run over their traced folds.
//!
//! Each path names a source solid, the faces it keeps rigid, and the smaller
//! solid those faces land on when the fold closes. `run_path` traces the
//! motion and bundles the endpoint, radial, symmetry, and mobility checks
//! into one report.

use crate::error::{KirigamiError, Result};
use crate::patterngen::{build_radial_pattern, FaceRole, KirigamiPattern, PatternSpec};
use crate::solids::symmetry::{symmetry_group, GroupKind, SymmetryGroup};
use crate::solids::{build_polyhedron, Polyhedron, SolidId};
use std::fmt;

mod report;
mod run;
mod suppress;
mod verify;

pub use report::{summary_table, MetricCheck, PathReport, Tolerances};
pub use suppress::{suppression_check, SuppressionReport};
pub use run::{mobility_summary, run_path, run_path_with, run_reverse, MobilitySummary, PathRun, RunOptions};
pub use verify::{
    max_vertex_deviation, register_points, register_state, verify_endpoint,
    verify_endpoint_congruence, verify_radial, verify_symmetry, EndpointReport, EndpointStatus,
    RadialFaceCheck, RadialReport, RadialSampleMetrics, Registration, SymmetryReport,
};

/// Identifier of one catalog path.
///
/// The numbered families fold a truncated solid onto a smaller one by
/// sinking hollow loops; the lettered family works from corner flaps
/// instead, collapsing an expanded solid onto a Platonic core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathId {
    /// `Tp(2, 1)` prints as `TP2.1`.
    Tp(u8, u8),
    /// Zero-based letter: `F3(0)` prints as `F3a`.
    F3(u8),
}

impl fmt::Display for PathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathId::Tp(a, b) => write!(f, "TP{a}.{b}"),
            PathId::F3(i) => write!(f, "F3{}", (b'a' + i) as char),
        }
    }
}

impl std::str::FromStr for PathId {
    type Err = KirigamiError;

    fn from_str(s: &str) -> Result<PathId> {
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_uppercase();
        if let Some(rest) = compact.strip_prefix("TP") {
            if let Some((a, b)) = rest.split_once('.') {
                if let (Ok(a), Ok(b)) = (a.parse::<u8>(), b.parse::<u8>()) {
                    return Ok(PathId::Tp(a, b));
                }
            }
        } else if let Some(rest) = compact.strip_prefix("F3") {
            let mut letters = rest.chars();
            if let (Some(c @ 'A'..='E'), None) = (letters.next(), letters.next()) {
                return Ok(PathId::F3(c as u8 - b'A'));
            }
        }
        Err(KirigamiError::UnknownPath(s.to_string()))
    }
}

/// Hinge count of the closed kinematic loop around each sunken hollow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkageClass {
    SevenR,
    EightR,
}

impl LinkageClass {
    pub fn name(&self) -> &'static str {
        match self {
            LinkageClass::SevenR => "7R",
            LinkageClass::EightR => "8R",
        }
    }
}

/// One radial transformation: a source solid, a face-role assignment, and
/// the target solid its reserved faces close onto.
#[derive(Debug, Clone, Copy)]
pub struct TransformationPath {
    pub id: PathId,
    pub source: SolidId,
    /// Alternate construction name for the source, where one is in use.
    pub source_alias: Option<&'static str>,
    pub target: SolidId,
    pub target_alias: Option<&'static str>,
    /// Symmetry kind preserved along the whole motion.
    pub symmetry: GroupKind,
    pub linkage: LinkageClass,
    /// Faces kept rigid through the motion, by polygon name.
    pub reserved: &'static str,
    /// Side counts of the faces that open into folding loops.
    pub loop_orders: &'static [usize],
}

static CATALOG: [TransformationPath; 14] = [
    TransformationPath {
        id: PathId::Tp(1, 1),
        source: SolidId::TruncatedOctahedron,
        source_alias: Some("truncated tetratetrahedron"),
        target: SolidId::TruncatedTetrahedron,
        target_alias: None,
        symmetry: GroupKind::Td,
        linkage: LinkageClass::SevenR,
        reserved: "hexagons (one tetrahedral family)",
        loop_orders: &[6],
    },
    TransformationPath {
        id: PathId::Tp(1, 2),
        source: SolidId::TruncatedOctahedron,
        source_alias: Some("truncated tetratetrahedron"),
        target: SolidId::TruncatedTetrahedron,
        target_alias: None,
        symmetry: GroupKind::Td,
        linkage: LinkageClass::SevenR,
        reserved: "hexagons (the dual tetrahedral family)",
        loop_orders: &[6],
    },
    TransformationPath {
        id: PathId::Tp(1, 3),
        source: SolidId::TruncatedOctahedron,
        source_alias: Some("truncated tetratetrahedron"),
        target: SolidId::Cuboctahedron,
        target_alias: Some("rhombitetratetrahedron"),
        symmetry: GroupKind::Td,
        linkage: LinkageClass::EightR,
        reserved: "squares",
        loop_orders: &[6, 6],
    },
    TransformationPath {
        id: PathId::Tp(2, 1),
        source: SolidId::TruncatedCuboctahedron,
        source_alias: None,
        target: SolidId::TruncatedCube,
        target_alias: None,
        symmetry: GroupKind::Oh,
        linkage: LinkageClass::SevenR,
        reserved: "octagons",
        loop_orders: &[6],
    },
    TransformationPath {
        id: PathId::Tp(2, 2),
        source: SolidId::TruncatedCuboctahedron,
        source_alias: None,
        target: SolidId::TruncatedOctahedron,
        target_alias: None,
        symmetry: GroupKind::Oh,
        linkage: LinkageClass::SevenR,
        reserved: "hexagons",
        loop_orders: &[8],
    },
    TransformationPath {
        id: PathId::Tp(2, 3),
        source: SolidId::TruncatedCuboctahedron,
        source_alias: None,
        target: SolidId::Rhombicuboctahedron,
        target_alias: None,
        symmetry: GroupKind::Oh,
        linkage: LinkageClass::EightR,
        reserved: "squares",
        loop_orders: &[6, 8],
    },
    TransformationPath {
        id: PathId::Tp(3, 1),
        source: SolidId::TruncatedIcosidodecahedron,
        source_alias: None,
        target: SolidId::TruncatedDodecahedron,
        target_alias: None,
        symmetry: GroupKind::Ih,
        linkage: LinkageClass::SevenR,
        reserved: "decagons",
        loop_orders: &[6],
    },
    TransformationPath {
        id: PathId::Tp(3, 2),
        source: SolidId::TruncatedIcosidodecahedron,
        source_alias: None,
        target: SolidId::TruncatedIcosahedron,
        target_alias: None,
        symmetry: GroupKind::Ih,
        linkage: LinkageClass::SevenR,
        reserved: "hexagons",
        loop_orders: &[10],
    },
    TransformationPath {
        id: PathId::Tp(3, 3),
        source: SolidId::TruncatedIcosidodecahedron,
        source_alias: None,
        target: SolidId::Rhombicosidodecahedron,
        target_alias: None,
        symmetry: GroupKind::Ih,
        linkage: LinkageClass::EightR,
        reserved: "squares",
        loop_orders: &[6, 10],
    },
    TransformationPath {
        id: PathId::F3(0),
        source: SolidId::Cuboctahedron,
        source_alias: Some("rhombitetratetrahedron"),
        target: SolidId::Tetrahedron,
        target_alias: None,
        symmetry: GroupKind::Td,
        linkage: LinkageClass::SevenR,
        reserved: "triangles (one tetrahedral family)",
        loop_orders: &[3],
    },
    TransformationPath {
        id: PathId::F3(1),
        source: SolidId::Rhombicuboctahedron,
        source_alias: None,
        target: SolidId::Cube,
        target_alias: None,
        symmetry: GroupKind::Oh,
        linkage: LinkageClass::SevenR,
        reserved: "axial squares",
        loop_orders: &[3],
    },
    TransformationPath {
        id: PathId::F3(2),
        source: SolidId::Rhombicuboctahedron,
        source_alias: None,
        target: SolidId::Octahedron,
        target_alias: None,
        symmetry: GroupKind::Oh,
        linkage: LinkageClass::SevenR,
        reserved: "triangles",
        loop_orders: &[4],
    },
    TransformationPath {
        id: PathId::F3(3),
        source: SolidId::Rhombicosidodecahedron,
        source_alias: None,
        target: SolidId::Dodecahedron,
        target_alias: None,
        symmetry: GroupKind::Ih,
        linkage: LinkageClass::SevenR,
        reserved: "pentagons",
        loop_orders: &[3],
    },
    TransformationPath {
        id: PathId::F3(4),
        source: SolidId::Rhombicosidodecahedron,
        source_alias: None,
        target: SolidId::Icosahedron,
        target_alias: None,
        symmetry: GroupKind::Ih,
        linkage: LinkageClass::SevenR,
        reserved: "triangles",
        loop_orders: &[5],
    },
];

/// Every supported transformation path, in catalog order.
pub fn catalog() -> &'static [TransformationPath] {
    &CATALOG
}

pub fn find_path(id: PathId) -> Option<&'static TransformationPath> {
    CATALOG.iter().find(|p| p.id == id)
}

/// Parse a path name and resolve it against the catalog.
pub fn lookup_path(name: &str) -> Result<&'static TransformationPath> {
    let id: PathId = name.parse()?;
    find_path(id).ok_or_else(|| KirigamiError::UnknownPath(name.to_string()))
}

impl TransformationPath {
    pub fn group(&self) -> SymmetryGroup {
        symmetry_group(self.symmetry)
    }

    /// Corner-flap construction, as opposed to a sunken-hollow one.
    pub fn is_flap(&self) -> bool {
        matches!(self.id, PathId::F3(_))
    }

    /// Solid name with its alternate construction name, when one exists.
    pub fn source_label(&self) -> String {
        label(self.source, self.source_alias)
    }

    pub fn target_label(&self) -> String {
        label(self.target, self.target_alias)
    }

    pub fn describe(&self) -> String {
        format!(
            "{}: {} -> {} [{}, {}]",
            self.id,
            self.source_label(),
            self.target_label(),
            self.symmetry.name(),
            self.linkage.name()
        )
    }

    /// Role of every source face under this path.
    pub fn classify(&self, poly: &Polyhedron) -> Vec<FaceRole> {
        (0..poly.faces.len()).map(|f| self.face_role(poly, f)).collect()
    }

    fn face_role(&self, poly: &Polyhedron, f: usize) -> FaceRole {
        let sides = poly.faces[f].sides();
        let n = poly.face_normal(f);
        // Splits the eight threefold axes into the two tetrahedral families.
        let octant = n.x * n.y * n.z;
        // Separates face normals on coordinate axes from diagonal ones.
        let axial = n.amax() > 0.9;
        match self.id {
            PathId::Tp(1, 1) => match sides {
                4 => FaceRole::FoldedSecondary,
                _ if octant > 0.0 => FaceRole::FoldedPrimary,
                _ => FaceRole::Reserved,
            },
            PathId::Tp(1, 2) => match sides {
                4 => FaceRole::FoldedSecondary,
                _ if octant > 0.0 => FaceRole::Reserved,
                _ => FaceRole::FoldedPrimary,
            },
            PathId::Tp(1, 3) => match sides {
                4 => FaceRole::Reserved,
                _ if octant > 0.0 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::Tp(2, 1) => match sides {
                8 => FaceRole::Reserved,
                6 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::Tp(2, 2) => match sides {
                6 => FaceRole::Reserved,
                8 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::Tp(2, 3) => match sides {
                4 => FaceRole::Reserved,
                6 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::Tp(3, 1) => match sides {
                10 => FaceRole::Reserved,
                6 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::Tp(3, 2) => match sides {
                6 => FaceRole::Reserved,
                10 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::Tp(3, 3) => match sides {
                4 => FaceRole::Reserved,
                6 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::F3(0) => match sides {
                4 => FaceRole::FoldedSecondary,
                _ if octant > 0.0 => FaceRole::FoldedPrimary,
                _ => FaceRole::Reserved,
            },
            PathId::F3(1) => match sides {
                3 => FaceRole::FoldedPrimary,
                _ if axial => FaceRole::Reserved,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::F3(2) => match sides {
                3 => FaceRole::Reserved,
                _ if axial => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::F3(3) => match sides {
                5 => FaceRole::Reserved,
                3 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            PathId::F3(4) => match sides {
                3 => FaceRole::Reserved,
                5 => FaceRole::FoldedPrimary,
                _ => FaceRole::FoldedSecondary,
            },
            _ => unreachable!("no such catalog path"),
        }
    }

    /// Cut-and-crease pattern for this path at the given edge length. Flap
    /// paths use a chord width of five percent of the edge.
    pub fn pattern(&self, edge_length: f64) -> Result<KirigamiPattern> {
        self.build(edge_length, None)
    }

    /// Override the corner-flap chord width; only flap paths carry one.
    pub fn pattern_with_flap(&self, edge_length: f64, flap_h: f64) -> Result<KirigamiPattern> {
        if !self.is_flap() {
            return Err(KirigamiError::InvalidParameter(format!(
                "{} has no corner flaps to size",
                self.id
            )));
        }
        self.build(edge_length, Some(flap_h))
    }

    fn build(&self, edge_length: f64, flap_h: Option<f64>) -> Result<KirigamiPattern> {
        if !(edge_length.is_finite() && edge_length > 0.0) {
            return Err(KirigamiError::InvalidParameter(format!(
                "edge length must be positive, got {edge_length}"
            )));
        }
        let poly = build_polyhedron(self.source, edge_length)?;
        let spec = PatternSpec {
            poly: &poly,
            roles: self.classify(&poly),
            name: self.id.to_string(),
            secondary_hollows: self.linkage == LinkageClass::EightR,
            flap_h: if self.is_flap() {
                Some(flap_h.unwrap_or(0.05 * edge_length))
            } else {
                None
            },
        };
        build_radial_pattern(&spec)
    }
}

fn label(id: SolidId, alias: Option<&'static str>) -> String {
    match alias {
        Some(alias) => format!("{} ({alias})", id.name()),
        None => id.name().to_string(),
    }
}
