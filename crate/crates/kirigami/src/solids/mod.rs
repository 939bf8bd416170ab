//! Convex solids: canonical coordinates, face recovery, and validation.
//!
//! A `Polyhedron` is a unit-edge convex solid with faces ordered
//! counterclockwise as seen from outside. Faces are recovered from the vertex
//! set by enumerating supporting planes, so the coordinate seeds stay the
//! single source of truth.

mod coords;
pub mod symmetry;

use crate::error::{KirigamiError, Result};
use nalgebra::Vector3;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SolidId {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
    TruncatedTetrahedron,
    TruncatedOctahedron,
    TruncatedCube,
    Cuboctahedron,
    TruncatedCuboctahedron,
    Rhombicuboctahedron,
    TruncatedDodecahedron,
    TruncatedIcosahedron,
    TruncatedIcosidodecahedron,
    Rhombicosidodecahedron,
}

impl SolidId {
    pub const ALL: [SolidId; 15] = [
        SolidId::Tetrahedron,
        SolidId::Cube,
        SolidId::Octahedron,
        SolidId::Dodecahedron,
        SolidId::Icosahedron,
        SolidId::TruncatedTetrahedron,
        SolidId::TruncatedOctahedron,
        SolidId::TruncatedCube,
        SolidId::Cuboctahedron,
        SolidId::TruncatedCuboctahedron,
        SolidId::Rhombicuboctahedron,
        SolidId::TruncatedDodecahedron,
        SolidId::TruncatedIcosahedron,
        SolidId::TruncatedIcosidodecahedron,
        SolidId::Rhombicosidodecahedron,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SolidId::Tetrahedron => "tetrahedron",
            SolidId::Cube => "cube",
            SolidId::Octahedron => "octahedron",
            SolidId::Dodecahedron => "dodecahedron",
            SolidId::Icosahedron => "icosahedron",
            SolidId::TruncatedTetrahedron => "truncated tetrahedron",
            SolidId::TruncatedOctahedron => "truncated octahedron",
            SolidId::TruncatedCube => "truncated cube",
            SolidId::Cuboctahedron => "cuboctahedron",
            SolidId::TruncatedCuboctahedron => "truncated cuboctahedron",
            SolidId::Rhombicuboctahedron => "rhombicuboctahedron",
            SolidId::TruncatedDodecahedron => "truncated dodecahedron",
            SolidId::TruncatedIcosahedron => "truncated icosahedron",
            SolidId::TruncatedIcosidodecahedron => "truncated icosidodecahedron",
            SolidId::Rhombicosidodecahedron => "rhombicosidodecahedron",
        }
    }

    /// Case-insensitive name lookup; hyphens and underscores read as spaces.
    pub fn parse(name: &str) -> Result<SolidId> {
        let needle = name.trim().to_lowercase().replace(['-', '_'], " ");
        SolidId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == needle)
            .ok_or_else(|| KirigamiError::UnknownSolid(name.to_string()))
    }
}

impl std::fmt::Display for SolidId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Face {
    /// Vertex indices, counterclockwise as seen from outside the solid.
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn sides(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Polyhedron {
    pub id: SolidId,
    pub edge_length: f64,
    pub vertices: Vec<Vector3<f64>>,
    pub faces: Vec<Face>,
}

/// Builds the unit-edge solid, then scales every vertex by `edge`.
pub fn build_polyhedron(id: SolidId, edge: f64) -> Result<Polyhedron> {
    if !(edge > 0.0) || !edge.is_finite() {
        return Err(KirigamiError::InvalidParameter(format!(
            "edge length must be positive and finite, got {edge}"
        )));
    }
    let mut vertices = coords::vertices(id);
    for v in &mut vertices {
        *v *= edge;
    }
    let faces = extract_faces(&vertices, edge)?;
    let poly = Polyhedron { id, edge_length: edge, vertices, faces };
    poly.validate()?;
    Ok(poly)
}

/// Supporting-plane face recovery for a convex vertex set with the origin
/// strictly inside.
fn extract_faces(vertices: &[Vector3<f64>], edge: f64) -> Result<Vec<Face>> {
    let tol = 1e-9 * edge.max(1.0);
    let n = vertices.len();
    // Vertex adjacency at the minimum pairwise distance.
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if ((vertices[i] - vertices[j]).norm() - edge).abs() < tol {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    let mut seen: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    let mut faces: Vec<Face> = Vec::new();
    for v in 0..n {
        let nb = &neighbors[v];
        for ai in 0..nb.len() {
            for bi in ai + 1..nb.len() {
                let (a, b) = (nb[ai], nb[bi]);
                let mut normal = (vertices[a] - vertices[v]).cross(&(vertices[b] - vertices[v]));
                if normal.norm() < tol {
                    continue;
                }
                normal.normalize_mut();
                if normal.dot(&vertices[v]) < 0.0 {
                    normal = -normal;
                }
                let offset = normal.dot(&vertices[v]);
                let mut members: Vec<usize> = Vec::new();
                let mut supporting = true;
                for (k, p) in vertices.iter().enumerate() {
                    let d = normal.dot(p) - offset;
                    if d > tol {
                        supporting = false;
                        break;
                    }
                    if d.abs() < tol {
                        members.push(k);
                    }
                }
                if !supporting || members.len() < 3 {
                    continue;
                }
                members.sort_unstable();
                if seen.insert(members.clone()) {
                    faces.push(order_face(vertices, &members, &normal));
                }
            }
        }
    }
    // Stable order: by size, then by vertex list.
    faces.sort_by(|f, g| {
        f.vertices
            .len()
            .cmp(&g.vertices.len())
            .then_with(|| f.vertices.cmp(&g.vertices))
    });
    Ok(faces)
}

/// Orders face members counterclockwise about the outward normal, starting
/// from the smallest vertex index.
fn order_face(vertices: &[Vector3<f64>], members: &[usize], normal: &Vector3<f64>) -> Face {
    let centroid: Vector3<f64> =
        members.iter().map(|&i| vertices[i]).sum::<Vector3<f64>>() / members.len() as f64;
    let u = (vertices[members[0]] - centroid).normalize();
    let w = normal.cross(&u);
    let mut angular: Vec<(f64, usize)> = members
        .iter()
        .map(|&i| {
            let d = vertices[i] - centroid;
            (d.dot(&w).atan2(d.dot(&u)), i)
        })
        .collect();
    angular.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
    let mut ring: Vec<usize> = angular.into_iter().map(|(_, i)| i).collect();
    let start = ring
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(k, _)| k)
        .expect("nonempty face");
    ring.rotate_left(start);
    Face { vertices: ring }
}

impl Polyhedron {
    pub fn face_vertices(&self, f: usize) -> Vec<Vector3<f64>> {
        self.faces[f].vertices.iter().map(|&i| self.vertices[i]).collect()
    }

    pub fn face_centroid(&self, f: usize) -> Vector3<f64> {
        let pts = self.face_vertices(f);
        pts.iter().sum::<Vector3<f64>>() / pts.len() as f64
    }

    /// Unit outward face normal.
    pub fn face_normal(&self, f: usize) -> Vector3<f64> {
        let pts = self.face_vertices(f);
        let mut n = Vector3::zeros();
        for i in 0..pts.len() {
            n += pts[i].cross(&pts[(i + 1) % pts.len()]);
        }
        n.normalize()
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let pts = self.face_vertices(f);
        let c = self.face_centroid(f);
        let mut doubled = 0.0;
        for i in 0..pts.len() {
            doubled += (pts[i] - c).cross(&(pts[(i + 1) % pts.len()] - c)).norm();
        }
        doubled / 2.0
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    /// Undirected edges as sorted vertex-index pairs, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = std::collections::BTreeSet::new();
        for face in &self.faces {
            let k = face.vertices.len();
            for i in 0..k {
                let a = face.vertices[i];
                let b = face.vertices[(i + 1) % k];
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.into_iter().collect()
    }

    /// The face on the other side of edge `(a, b)` from face `f`.
    pub fn neighbor_across(&self, f: usize, a: usize, b: usize) -> Option<usize> {
        self.faces.iter().enumerate().position(|(g, face)| {
            g != f && {
                let k = face.vertices.len();
                (0..k).any(|i| {
                    let p = face.vertices[i];
                    let q = face.vertices[(i + 1) % k];
                    (p == a && q == b) || (p == b && q == a)
                })
            }
        })
    }

    /// Interior dihedral angle between adjacent faces `f` and `g`, measured
    /// through the solid.
    pub fn interior_dihedral(&self, f: usize, g: usize) -> f64 {
        let c = self.face_normal(f).dot(&self.face_normal(g)).clamp(-1.0, 1.0);
        std::f64::consts::PI - c.acos()
    }

    /// Faces that contain vertex `v`.
    pub fn faces_at_vertex(&self, v: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&f| self.faces[f].vertices.contains(&v))
            .collect()
    }

    /// Structural soundness: uniform edges, planar regular faces, every edge
    /// shared by exactly two faces, Euler characteristic 2, outward
    /// counterclockwise orientation.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-9 * self.edge_length.max(1.0);
        let fail = |msg: String| Err(KirigamiError::Solid(msg));
        let mut edge_count: std::collections::BTreeMap<(usize, usize), usize> =
            std::collections::BTreeMap::new();
        for (fi, face) in self.faces.iter().enumerate() {
            let pts = self.face_vertices(fi);
            let k = pts.len();
            let centroid = self.face_centroid(fi);
            let normal = self.face_normal(fi);
            if normal.dot(&centroid) <= 0.0 {
                return fail(format!("face {fi} is not oriented outward"));
            }
            let offset = normal.dot(&centroid);
            let radius = (pts[0] - centroid).norm();
            for i in 0..k {
                let a = face.vertices[i];
                let b = face.vertices[(i + 1) % k];
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                let len = (pts[i] - pts[(i + 1) % k]).norm();
                if (len - self.edge_length).abs() > tol {
                    return fail(format!("face {fi} has a non-unit edge of length {len}"));
                }
                if (normal.dot(&pts[i]) - offset).abs() > tol {
                    return fail(format!("face {fi} is not planar"));
                }
                if ((pts[i] - centroid).norm() - radius).abs() > tol {
                    return fail(format!("face {fi} is not a regular polygon"));
                }
            }
        }
        for (&(a, b), &count) in &edge_count {
            if count != 2 {
                return fail(format!("edge ({a},{b}) belongs to {count} faces, expected 2"));
            }
        }
        let v = self.vertices.len() as i64;
        let e = edge_count.len() as i64;
        let f = self.faces.len() as i64;
        if v - e + f != 2 {
            return fail(format!("Euler characteristic violated: V={v} E={e} F={f}"));
        }
        Ok(())
    }

    /// Count of faces per polygon size, ascending by size.
    pub fn face_census(&self) -> Vec<(usize, usize)> {
        let mut census: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
        for face in &self.faces {
            *census.entry(face.vertices.len()).or_insert(0) += 1;
        }
        census.into_iter().collect()
    }
}
