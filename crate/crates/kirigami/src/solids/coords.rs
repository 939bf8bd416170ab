//! Canonical unit-edge vertex coordinates for the supported solids.
//!
//! Each set is generated from a closed-form seed list (permutations and sign
//! patterns of exact algebraic values) and rescaled so the shortest vertex
//! distance is exactly one. Face structure is recovered separately from the
//! point set; `validate` downstream checks edge uniformity, face planarity,
//! and regularity, so a wrong seed cannot survive silently.

use super::SolidId;
use nalgebra::Vector3;

const PHI: f64 = 1.618_033_988_749_894_8;

/// Unit-edge vertex set for `id`, deterministically ordered.
pub fn vertices(id: SolidId) -> Vec<Vector3<f64>> {
    let phi = PHI;
    let raw: Vec<Vector3<f64>> = match id {
        SolidId::Tetrahedron => vec![
            Vector3::new(1.0, 1.0, 1.0),
            Vector3::new(1.0, -1.0, -1.0),
            Vector3::new(-1.0, 1.0, -1.0),
            Vector3::new(-1.0, -1.0, 1.0),
        ],
        SolidId::Cube => signs_of(&[1.0, 1.0, 1.0]),
        SolidId::Octahedron => all_perms_signs(&[1.0, 0.0, 0.0]),
        // The icosahedral family shares one orientation: fivefold axes along
        // cyclic permutations of (0, +-1, +-phi), matching the icosahedron.
        SolidId::Dodecahedron => {
            let mut v = signs_of(&[1.0, 1.0, 1.0]);
            v.extend(cyclic_signs(&[0.0, phi, 1.0 / phi]));
            v
        }
        SolidId::Icosahedron => cyclic_signs(&[0.0, 1.0, phi]),
        SolidId::TruncatedTetrahedron => perms_even_minus(&[3.0, 1.0, 1.0]),
        SolidId::TruncatedOctahedron => all_perms_signs(&[0.0, 1.0, 2.0]),
        SolidId::TruncatedCube => {
            let xi = std::f64::consts::SQRT_2 - 1.0;
            all_perms_signs(&[xi, 1.0, 1.0])
        }
        SolidId::Cuboctahedron => all_perms_signs(&[1.0, 1.0, 0.0]),
        SolidId::TruncatedCuboctahedron => {
            let r2 = std::f64::consts::SQRT_2;
            all_perms_signs(&[1.0, 1.0 + r2, 1.0 + 2.0 * r2])
        }
        SolidId::Rhombicuboctahedron => {
            let r2 = std::f64::consts::SQRT_2;
            all_perms_signs(&[1.0, 1.0, 1.0 + r2])
        }
        SolidId::TruncatedDodecahedron => {
            let mut v = cyclic_signs(&[0.0, 2.0 + phi, 1.0 / phi]);
            v.extend(cyclic_signs(&[1.0 / phi, 2.0 * phi, phi]));
            v.extend(cyclic_signs(&[phi, phi + 1.0, 2.0]));
            v
        }
        SolidId::TruncatedIcosahedron => {
            let mut v = cyclic_signs(&[0.0, 1.0, 3.0 * phi]);
            v.extend(cyclic_signs(&[1.0, 2.0 + phi, 2.0 * phi]));
            v.extend(cyclic_signs(&[phi, 2.0, 2.0 * phi + 1.0]));
            v
        }
        SolidId::TruncatedIcosidodecahedron => {
            let mut v = cyclic_signs(&[1.0 / phi, 3.0 + phi, 1.0 / phi]);
            v.extend(cyclic_signs(&[2.0 / phi, 1.0 + 2.0 * phi, phi]));
            v.extend(cyclic_signs(&[1.0 / phi, 3.0 * phi - 1.0, phi * phi]));
            v.extend(cyclic_signs(&[2.0 * phi - 1.0, 2.0 + phi, 2.0]));
            v.extend(cyclic_signs(&[phi, 2.0 * phi, 3.0]));
            v
        }
        SolidId::Rhombicosidodecahedron => {
            let mut v = cyclic_signs(&[1.0, phi * phi * phi, 1.0]);
            v.extend(cyclic_signs(&[phi * phi, 2.0 * phi, phi]));
            v.extend(cyclic_signs(&[2.0 + phi, phi * phi, 0.0]));
            v
        }
    };
    let mut pts = dedup(raw);
    let edge = min_distance(&pts);
    for p in &mut pts {
        *p /= edge;
    }
    // Deterministic ordering independent of generation order.
    pts.sort_by(|a, b| {
        lex_key(a)
            .partial_cmp(&lex_key(b))
            .expect("finite coordinates")
    });
    pts
}

fn lex_key(p: &Vector3<f64>) -> (i64, i64, i64) {
    let q = |v: f64| (v * 1e9).round() as i64;
    (q(p.x), q(p.y), q(p.z))
}

/// All sign patterns over the nonzero components of `base`.
fn signs_of(base: &[f64; 3]) -> Vec<Vector3<f64>> {
    let mut out = Vec::new();
    for mask in 0..8u8 {
        let mut p = [0.0f64; 3];
        let mut ok = true;
        for i in 0..3 {
            let flip = mask & (1 << i) != 0;
            if flip && base[i] == 0.0 {
                ok = false;
                break;
            }
            p[i] = if flip { -base[i] } else { base[i] };
        }
        if ok {
            out.push(Vector3::new(p[0], p[1], p[2]));
        }
    }
    out
}

/// The three cyclic permutations of `base`, each under all sign patterns.
fn cyclic_signs(base: &[f64; 3]) -> Vec<Vector3<f64>> {
    let rolls = [
        [base[0], base[1], base[2]],
        [base[1], base[2], base[0]],
        [base[2], base[0], base[1]],
    ];
    rolls.iter().flat_map(signs_of).collect()
}

/// All six permutations of `base`, each under all sign patterns.
fn all_perms_signs(base: &[f64; 3]) -> Vec<Vector3<f64>> {
    let perms = [
        [base[0], base[1], base[2]],
        [base[0], base[2], base[1]],
        [base[1], base[0], base[2]],
        [base[1], base[2], base[0]],
        [base[2], base[0], base[1]],
        [base[2], base[1], base[0]],
    ];
    perms.iter().flat_map(signs_of).collect()
}

/// All permutations of `base` with an even number of negated components.
fn perms_even_minus(base: &[f64; 3]) -> Vec<Vector3<f64>> {
    all_perms_signs(base)
        .into_iter()
        .filter(|p| {
            let minus = p.iter().filter(|&&c| c < 0.0).count();
            minus % 2 == 0
        })
        .collect()
}

fn dedup(pts: Vec<Vector3<f64>>) -> Vec<Vector3<f64>> {
    let mut out: Vec<Vector3<f64>> = Vec::new();
    for p in pts {
        if !out.iter().any(|q| (q - p).norm() < 1e-9) {
            out.push(p);
        }
    }
    out
}

fn min_distance(pts: &[Vector3<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min((pts[i] - pts[j]).norm());
        }
    }
    best
}
