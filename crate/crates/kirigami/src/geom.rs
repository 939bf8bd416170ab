//! Rigid placements and small geometric helpers.

use nalgebra::{Matrix3, Unit, Vector2, Vector3};

/// Rigid placement of a panel in space: `x_world = rotation * x_local + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Placement {
    pub fn identity() -> Self {
        Placement { rotation: Matrix3::identity(), translation: Vector3::zeros() }
    }

    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Placement { rotation, translation }
    }

    /// Rotation about `axis` by `angle`, no translation.
    pub fn from_axis_angle(axis: &Unit<Vector3<f64>>, angle: f64) -> Self {
        Placement {
            rotation: nalgebra::Rotation3::from_axis_angle(axis, angle).into_inner(),
            translation: Vector3::zeros(),
        }
    }

    pub fn from_translation(translation: Vector3<f64>) -> Self {
        Placement { rotation: Matrix3::identity(), translation }
    }

    /// Rotation by `angle` about the line through `point` with direction `axis`.
    pub fn rotation_about_line(
        point: &Vector3<f64>,
        axis: &Unit<Vector3<f64>>,
        angle: f64,
    ) -> Self {
        let r = nalgebra::Rotation3::from_axis_angle(axis, angle).into_inner();
        Placement { rotation: r, translation: point - r * point }
    }

    /// Rigid increment from a twist: rotation `exp([omega])`, translation `v`.
    /// Linearizes to velocity `omega x x + v` at a world point `x`.
    pub fn from_twist(omega: &Vector3<f64>, v: &Vector3<f64>) -> Self {
        Placement {
            rotation: nalgebra::Rotation3::from_scaled_axis(*omega).into_inner(),
            translation: *v,
        }
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    /// Composition: `(self * other).apply(p) == self.apply(other.apply(p))`.
    pub fn compose(&self, other: &Placement) -> Placement {
        Placement {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Placement {
        let rt = self.rotation.transpose();
        Placement { rotation: rt, translation: -(rt * self.translation) }
    }

    /// Deviation of the rotation block from a proper rotation:
    /// `max(|R^T R - I|_max, |det R - 1|)`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.rotation.transpose() * self.rotation - Matrix3::identity();
        let g = gram.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        g.max((self.rotation.determinant() - 1.0).abs())
    }

    /// Projects the rotation block onto the nearest proper rotation (polar
    /// factor). Keeps long twist-update chains orthonormal to machine precision.
    pub fn renormalized(&self) -> Placement {
        let svd = self.rotation.svd(true, true);
        let u = svd.u.unwrap();
        let vt = svd.v_t.unwrap();
        let mut r = u * vt;
        if r.determinant() < 0.0 {
            // Flip the smallest singular direction; rotations under small
            // perturbations never actually take this branch.
            let mut u2 = u;
            u2.column_mut(2).iter_mut().for_each(|x| *x = -*x);
            r = u2 * vt;
        }
        Placement { rotation: r, translation: self.translation }
    }

    /// Rotation angle of the rotation block, in `[0, pi]`.
    pub fn rotation_angle(&self) -> f64 {
        let tr = self.rotation.trace();
        ((tr - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }
}

/// Signed dihedral angle between oriented panel planes sharing the hinge
/// direction `axis`: `atan2((n_a x n_b) . axis, n_a . n_b)`. Zero for coplanar
/// panels with matching orientation, `+-pi` at the flat-folded limit.
pub fn signed_dihedral(n_a: &Vector3<f64>, n_b: &Vector3<f64>, axis: &Vector3<f64>) -> f64 {
    let cross = n_a.cross(n_b);
    cross.dot(axis).atan2(n_a.dot(n_b))
}

/// Angle between two nonzero vectors, in `[0, pi]`.
pub fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let c = a.dot(b) / (a.norm() * b.norm());
    c.clamp(-1.0, 1.0).acos()
}

/// Signed area of a simple 2D polygon; positive for counterclockwise boundaries.
pub fn polygon_area(boundary: &[Vector2<f64>]) -> f64 {
    let n = boundary.len();
    let mut twice = 0.0;
    for i in 0..n {
        let p = boundary[i];
        let q = boundary[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    twice / 2.0
}

/// Area centroid of a simple 2D polygon.
pub fn polygon_centroid(boundary: &[Vector2<f64>]) -> Vector2<f64> {
    let n = boundary.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    let mut twice = 0.0;
    for i in 0..n {
        let p = boundary[i];
        let q = boundary[(i + 1) % n];
        let w = p.x * q.y - q.x * p.y;
        twice += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Vector2::new(cx / (3.0 * twice), cy / (3.0 * twice))
}
