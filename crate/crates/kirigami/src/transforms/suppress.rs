//! Crease suppression on superposed patterns.
//!
//! Driving one parent's crease through its whole branch must leave every
//! crease owned by the other parent at its deployed angle. The check traces
//! the active branch and measures the worst drift of the inactive parent's
//! dihedrals against the deployed baseline.
//!
//! The rank audits along such a branch count more than one freedom by
//! design: each suppressed hollow assembly sits at its own flat state for
//! the whole sweep, and a flat assembly keeps a first-order toggle (the
//! strips can all tip off the plane at matching rates while the core starts
//! to sink). Those toggles do not extend to finite motion without moving
//! the surrounding panels, so the expected instantaneous count is one
//! finite mechanism plus one toggle per suppressed loop.

use crate::error::{KirigamiError, Result};
use crate::patterngen::foldmap::{driving_dihedral, radial_placements, travel_of_driving_angle};
use crate::patterngen::{CreaseOwner, HingeLabel, KirigamiPattern};
use crate::rigidkin::{
    trace_fold, Assembly, Configuration, PredictorUse, TraceOptions, TraceSchedule,
};
use std::collections::BTreeSet;

/// Drift measurement over one traced branch of a superposed pattern.
#[derive(Debug, Clone)]
pub struct SuppressionReport {
    /// Name of the superposed pattern.
    pub pattern: String,
    pub samples: usize,
    /// Creases owned by the inactive parent.
    pub suppressed_hinges: usize,
    /// Hollow assemblies of the inactive parent, each contributing one
    /// flat-state toggle to the instantaneous freedom count.
    pub suppressed_loops: usize,
    /// Largest |dihedral - deployed| over the suppressed creases, radians.
    pub max_drift: f64,
    /// Largest dihedral change over the driven parent's creases, radians;
    /// the scale the drift is to be read against.
    pub active_motion: f64,
    pub max_residual: f64,
    /// Freedom counts at the audited samples past the deployed one.
    pub interior_dofs: Vec<usize>,
}

/// Trace the first parent's branch of a superposed pattern and measure how
/// far the second parent's creases move.
pub fn suppression_check(pattern: &KirigamiPattern, samples: usize) -> Result<SuppressionReport> {
    if !pattern.superposed {
        return Err(KirigamiError::Verify(
            "crease suppression is defined for superposed patterns".into(),
        ));
    }
    if samples < 2 {
        return Err(KirigamiError::InvalidParameter(
            "crease suppression needs at least two samples".into(),
        ));
    }
    let assembly = Assembly::from_pattern(pattern)?;
    let driving = pattern.profile.driving_hinge;
    if assembly.hinges[driving].owner != CreaseOwner::ParentA {
        return Err(KirigamiError::Verify(
            "the driving crease must belong to the active parent alone".into(),
        ));
    }
    let deployed = Configuration::identity(assembly.panels());
    let theta0 = assembly.dihedral(&deployed, driving);
    let theta_end = driving_dihedral(pattern, pattern.profile.s_end);
    let stop = theta_end - (theta_end - theta0).signum() * pattern.profile.driving_backoff;

    let schedule = TraceSchedule::linear(driving, theta0, stop, samples);
    let mut opts = TraceOptions::for_edge(pattern.edge_length);
    opts.allow_extra_dof = true;
    // Along the flat toggles the Newton merit is quartic, so a residual
    // tolerance of 1e-10 alone admits excursions off flat of about 1e-5
    // rad and secant continuation duly wanders that far. The suppressed
    // branch has an exact closed form (the driven parent's fold map, with
    // the inactive panels riding their platform translation), so every
    // sample is seeded there and certified by Newton closure and the rank
    // audit; the drift is measured on the solved states.
    opts.predictor_use = PredictorUse::EveryStep;
    let mut audited = vec![1, samples / 4, samples / 2, samples - 1];
    audited.retain(|&k| k >= 1);
    audited.sort_unstable();
    audited.dedup();
    opts.audit_samples = Some(audited);
    let seed = |theta: f64| {
        let s = travel_of_driving_angle(pattern, theta);
        assembly.configuration_from_placements(&radial_placements(pattern, s))
    };
    let trace = trace_fold(&assembly, &schedule, &opts, None, Some(&seed))?;

    let suppressed: Vec<usize> = (0..assembly.hinges.len())
        .filter(|&h| assembly.hinges[h].owner == CreaseOwner::ParentB)
        .collect();
    let active: Vec<usize> = (0..assembly.hinges.len())
        .filter(|&h| assembly.hinges[h].owner != CreaseOwner::ParentB)
        .collect();
    let loops: BTreeSet<usize> = pattern
        .hinges
        .iter()
        .filter(|h| h.label == HingeLabel::CoreTrapezoid && h.owner == CreaseOwner::ParentB)
        .map(|h| pattern.sheet_index(&h.panel_a).expect("validated hinge panel"))
        .collect();

    let baseline: Vec<f64> = (0..assembly.hinges.len())
        .map(|h| assembly.dihedral(&deployed, h))
        .collect();
    let mut max_drift = 0.0_f64;
    let mut active_motion = 0.0_f64;
    let mut max_residual = 0.0_f64;
    for sample in &trace.samples {
        max_residual = max_residual.max(sample.residual_inf);
        for &h in &suppressed {
            max_drift = max_drift.max((assembly.dihedral(&sample.config, h) - baseline[h]).abs());
        }
        for &h in &active {
            active_motion =
                active_motion.max((assembly.dihedral(&sample.config, h) - baseline[h]).abs());
        }
    }
    let interior_dofs = trace
        .samples
        .iter()
        .filter(|s| s.index > 0)
        .filter_map(|s| s.mobility.as_ref().map(|m| m.dof))
        .collect();
    Ok(SuppressionReport {
        pattern: pattern.name.clone(),
        samples,
        suppressed_hinges: suppressed.len(),
        suppressed_loops: loops.len(),
        max_drift,
        active_motion,
        max_residual,
        interior_dofs,
    })
}
