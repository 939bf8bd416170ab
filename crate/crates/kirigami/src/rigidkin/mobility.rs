//! Numerical mobility: degrees of freedom from the constraint Jacobian rank.

use super::{Assembly, Configuration};
use crate::linalg::{rank_from_singular_values, singular_values};

/// Rank audit of one configuration.
#[derive(Debug, Clone)]
pub struct MobilityReport {
    /// Degrees of freedom at the default rank tolerance.
    pub dof: usize,
    pub rank: usize,
    pub coords: usize,
    pub rows: usize,
    /// (tolerance, dof) across the tolerance sweep.
    pub sweep: Vec<(f64, usize)>,
    /// Largest and smallest retained singular values at the default
    /// tolerance, for diagnostics.
    pub sigma_max: f64,
    pub sigma_cut: f64,
}

impl MobilityReport {
    /// True when every swept tolerance agrees on the count.
    pub fn sweep_agrees(&self) -> bool {
        self.sweep.iter().all(|&(_, d)| d == self.dof)
    }
}

/// Rank tolerances audited alongside the default, two orders apart.
pub const RANK_TOL_SWEEP: [f64; 3] = [1e-7, 1e-8, 1e-9];
pub const RANK_TOL_DEFAULT: f64 = 1e-8;

/// Count the assembly's instantaneous degrees of freedom at `config`.
///
/// The rank comes from a dense singular value decomposition of the full
/// constraint Jacobian; singular values below `tol * sigma_max` count as
/// zero. Freedoms are what the rank leaves of the twist coordinates.
pub fn mobility(assembly: &Assembly, config: &Configuration) -> MobilityReport {
    let dense = assembly.jacobian(config).to_dense();
    let sv = singular_values(&dense);
    let coords = assembly.coords();
    let rows = assembly.rows();
    let rank = rank_from_singular_values(&sv, RANK_TOL_DEFAULT);
    let sweep = RANK_TOL_SWEEP
        .iter()
        .map(|&tol| (tol, coords - rank_from_singular_values(&sv, tol)))
        .collect();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let sigma_cut = if rank > 0 { sv[rank - 1] } else { 0.0 };
    MobilityReport {
        dof: coords - rank,
        rank,
        coords,
        rows,
        sweep,
        sigma_max,
        sigma_cut,
    }
}
