//! Damped least-squares Newton iteration onto the constraint manifold.

use super::{Assembly, Configuration};
use crate::error::{KirigamiError, Result};
use crate::linalg::{cgls_damped, svd_least_squares, SparseRowMatrix};
use ndarray::Array1;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Infinity-norm bound on the hinge residual, in length units.
    pub residual_tol: f64,
    /// Absolute bound on each dihedral target error, radians.
    pub target_tol: f64,
    pub max_iterations: usize,
    /// Tikhonov damping for the linear solves.
    pub damping: f64,
    /// Coordinate count above which the linear solves go through conjugate
    /// gradients on the normal equations instead of a dense decomposition.
    pub dense_limit: usize,
}

impl SolveOptions {
    pub fn for_edge(edge_length: f64) -> Self {
        SolveOptions {
            residual_tol: 1e-10 * edge_length,
            target_tol: 1e-12,
            max_iterations: 60,
            damping: 1e-9 * edge_length,
            dense_limit: 600,
        }
    }
}

/// Move `config` onto the constraint manifold while driving the listed
/// dihedrals to their targets. The iteration minimizes the stacked system
/// [hinge residual; dihedral errors] by damped minimum-norm steps, with a
/// halving line search on the squared merit.
pub fn solve_closure(
    assembly: &Assembly,
    config: &mut Configuration,
    targets: &[(usize, f64)],
    opts: &SolveOptions,
) -> Result<usize> {
    let rows = assembly.rows() + targets.len();
    let cols = assembly.coords();
    let mut best = config.clone();
    let mut best_merit = f64::INFINITY;
    for iter in 0..opts.max_iterations {
        let r = assembly.residual(config);
        let errs: Vec<f64> = targets
            .iter()
            .map(|&(h, want)| assembly.dihedral(config, h) - want)
            .collect();
        let r_inf = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let e_inf = errs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if r_inf <= opts.residual_tol && e_inf <= opts.target_tol {
            return Ok(iter);
        }
        let mut jac = assembly.jacobian(config);
        jac.resize_rows(rows);
        for (k, &(h, _)) in targets.iter().enumerate() {
            for (c, v) in assembly.dihedral_gradient(config, h) {
                jac.add(assembly.rows() + k, c, v);
            }
        }
        let mut rhs = Array1::zeros(rows);
        for (i, v) in r.iter().enumerate() {
            rhs[i] = -v;
        }
        for (k, e) in errs.iter().enumerate() {
            rhs[assembly.rows() + k] = -e;
        }
        let step = linear_step(&jac, &rhs, cols, opts);
        // Halving line search on the squared merit; accept the first
        // improvement, keep the best iterate seen either way.
        let merit0 = merit(assembly, config, targets);
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            let mut trial = config.clone();
            let scaled: Vec<f64> = step.iter().map(|v| v * scale).collect();
            trial.apply_step(assembly, &scaled);
            let m = merit(assembly, &trial, targets);
            if m < merit0 {
                *config = trial;
                accepted = true;
                if m < best_merit {
                    best_merit = m;
                    best = config.clone();
                }
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            // A full step that fails to improve can still converge from the
            // shifted linearization; take the smallest trial and continue.
            let scaled: Vec<f64> = step.iter().map(|v| v * scale).collect();
            config.apply_step(assembly, &scaled);
        }
    }
    *config = best;
    Err(KirigamiError::Solver(format!(
        "closure iteration did not converge in {} steps (merit {best_merit:.3e})",
        opts.max_iterations
    )))
}

fn merit(assembly: &Assembly, config: &Configuration, targets: &[(usize, f64)]) -> f64 {
    let r = assembly.residual(config);
    let mut m: f64 = r.iter().map(|v| v * v).sum();
    for &(h, want) in targets {
        let e = assembly.dihedral(config, h) - want;
        m += e * e;
    }
    m
}

fn linear_step(
    jac: &SparseRowMatrix,
    rhs: &Array1<f64>,
    cols: usize,
    opts: &SolveOptions,
) -> Vec<f64> {
    let sol = if cols <= opts.dense_limit {
        svd_least_squares(&jac.to_dense(), rhs, opts.damping)
    } else {
        cgls_damped(jac, rhs, opts.damping, 1e-13, 4 * cols)
    };
    sol.to_vec()
}
