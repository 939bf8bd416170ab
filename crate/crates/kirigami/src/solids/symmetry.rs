//! Point symmetry groups and their action on solid faces.
//!
//! The three groups used by the catalog are realized as explicit orthogonal
//! matrices: the full tetrahedral group (order 24), the full octahedral group
//! (order 48), and the full icosahedral group (order 120). Elements are
//! generated from closed-form seeds and closed under multiplication, so group
//! axioms hold by construction and are re-checked in tests.

use super::Polyhedron;
use crate::error::{KirigamiError, Result};
use nalgebra::{Matrix3, Unit, Vector3};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    Td,
    Oh,
    Ih,
}

impl GroupKind {
    pub fn order(&self) -> usize {
        match self {
            GroupKind::Td => 24,
            GroupKind::Oh => 48,
            GroupKind::Ih => 120,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::Td => "Td",
            GroupKind::Oh => "Oh",
            GroupKind::Ih => "Ih",
        }
    }

    pub fn parse(name: &str) -> Result<GroupKind> {
        match name.trim().to_lowercase().as_str() {
            "td" | "t_d" => Ok(GroupKind::Td),
            "oh" | "o_h" => Ok(GroupKind::Oh),
            "ih" | "i_h" => Ok(GroupKind::Ih),
            other => Err(KirigamiError::InvalidParameter(format!(
                "unknown symmetry group `{other}` (expected Td, Oh, or Ih)"
            ))),
        }
    }
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    pub kind: GroupKind,
    pub elements: Vec<Matrix3<f64>>,
}

/// All 3x3 signed permutation matrices, optionally restricted to an even
/// number of sign flips.
fn signed_permutations(even_flips_only: bool) -> Vec<Matrix3<f64>> {
    let perms: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for p in perms {
        for mask in 0..8u8 {
            let flips = (mask & 1) + ((mask >> 1) & 1) + ((mask >> 2) & 1);
            if even_flips_only && flips % 2 != 0 {
                continue;
            }
            let mut m = Matrix3::zeros();
            for (row, &col) in p.iter().enumerate() {
                let sign = if mask & (1 << row) != 0 { -1.0 } else { 1.0 };
                m[(row, col)] = sign;
            }
            out.push(m);
        }
    }
    out
}

fn matrix_key(m: &Matrix3<f64>) -> [i64; 9] {
    let mut key = [0i64; 9];
    for (i, v) in m.iter().enumerate() {
        key[i] = (v * 1e9).round() as i64;
    }
    key
}

/// Multiplicative closure of a generator set of orthogonal matrices.
fn close_under_product(generators: &[Matrix3<f64>]) -> Vec<Matrix3<f64>> {
    let mut elements: Vec<Matrix3<f64>> = vec![Matrix3::identity()];
    let mut seen: std::collections::BTreeSet<[i64; 9]> =
        std::collections::BTreeSet::new();
    seen.insert(matrix_key(&Matrix3::identity()));
    let mut frontier = elements.clone();
    while let Some(m) = frontier.pop() {
        for g in generators {
            let prod = g * m;
            if seen.insert(matrix_key(&prod)) {
                elements.push(prod);
                frontier.push(prod);
            }
        }
    }
    elements.sort_by(|a, b| matrix_key(a).cmp(&matrix_key(b)));
    elements
}

/// Builds the group of `kind`.
pub fn symmetry_group(kind: GroupKind) -> SymmetryGroup {
    let elements = match kind {
        // Full octahedral group: every signed permutation of the axes.
        GroupKind::Oh => {
            let mut v = signed_permutations(false);
            v.sort_by(|a, b| matrix_key(a).cmp(&matrix_key(b)));
            v
        }
        // Full tetrahedral group: signed permutations with an even number of
        // sign flips. These are exactly the octahedral elements preserving
        // each diagonal tetrahedron.
        GroupKind::Td => {
            let mut v = signed_permutations(true);
            v.sort_by(|a, b| matrix_key(a).cmp(&matrix_key(b)));
            v
        }
        // Full icosahedral group: rotations generated by a coordinate cycle
        // and a fivefold turn about an icosahedron vertex axis, times -I.
        GroupKind::Ih => {
            let cycle = Matrix3::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
            let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
            let axis = Unit::new_normalize(Vector3::new(0.0, 1.0, phi));
            let five = nalgebra::Rotation3::from_axis_angle(
                &axis,
                2.0 * std::f64::consts::PI / 5.0,
            )
            .into_inner();
            close_under_product(&[cycle, five, -Matrix3::identity()])
        }
    };
    SymmetryGroup { kind, elements }
}

impl SymmetryGroup {
    /// Index of the face whose vertex set is carried onto face `f` by `g`,
    /// i.e. the image of `f` under `g`.
    pub fn face_image(&self, poly: &Polyhedron, g: &Matrix3<f64>, f: usize) -> Option<usize> {
        let tol = 1e-7 * poly.edge_length.max(1.0);
        let image_centroid = g * poly.face_centroid(f);
        (0..poly.faces.len()).find(|&cand| {
            poly.faces[cand].vertices.len() == poly.faces[f].vertices.len()
                && (poly.face_centroid(cand) - image_centroid).norm() < tol
        })
    }

    /// Partition of the face set into orbits, each sorted ascending; orbits
    /// ordered by their smallest member.
    pub fn face_orbits(&self, poly: &Polyhedron) -> Vec<Vec<usize>> {
        let n = poly.faces.len();
        let mut assigned = vec![false; n];
        let mut orbits = Vec::new();
        for f in 0..n {
            if assigned[f] {
                continue;
            }
            let mut orbit = std::collections::BTreeSet::new();
            for g in &self.elements {
                if let Some(img) = self.face_image(poly, g, f) {
                    orbit.insert(img);
                }
            }
            let orbit: Vec<usize> = orbit.into_iter().collect();
            for &m in &orbit {
                assigned[m] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }
}
