//! Tracing a catalog path end to end and certifying its mobility.

use super::verify::{verify_endpoint, verify_radial, verify_symmetry};
use super::{EndpointReport, PathId, RadialReport, SymmetryReport, TransformationPath};
use crate::error::{KirigamiError, Result};
use crate::patterngen::foldmap::{driving_dihedral, radial_placements, travel_of_driving_angle};
use crate::patterngen::KirigamiPattern;
use crate::rigidkin::{
    mobility, solve_closure, trace_fold, Assembly, Configuration, FoldTrace, MobilityReport,
    TraceOptions, TraceSchedule,
};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub edge_length: f64,
    pub samples: usize,
    /// Corner-flap chord width override for flap paths.
    pub flap_h: Option<f64>,
    /// Coordinate count above which only a spread of samples is
    /// rank-audited instead of every one.
    pub audit_all_below: usize,
    /// Number of trace samples fed to the symmetry check.
    pub symmetry_samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            edge_length: 1.0,
            samples: 50,
            flap_h: None,
            audit_all_below: 700,
            symmetry_samples: 10,
        }
    }
}

/// Freedom counts along the fold. The deployed state itself is a fold limit
/// and rank-deficient by design, so the deployed report is taken just
/// inside the motion; the flat report sits on the far limit and is
/// informational.
#[derive(Debug, Clone)]
pub struct MobilitySummary {
    pub deployed_limit: MobilityReport,
    pub quarter: MobilityReport,
    pub half: MobilityReport,
    pub final_fold: MobilityReport,
    pub flat_state: MobilityReport,
}

impl MobilitySummary {
    /// Freedom counts at the four certified stations.
    pub fn dofs(&self) -> [usize; 4] {
        [
            self.deployed_limit.dof,
            self.quarter.dof,
            self.half.dof,
            self.final_fold.dof,
        ]
    }
}

/// A traced path with its verification battery.
#[derive(Debug, Clone)]
pub struct PathRun {
    pub path: &'static TransformationPath,
    pub pattern: KirigamiPattern,
    pub assembly: Assembly,
    pub trace: FoldTrace,
    /// Configuration at the exact folded travel, solved past any driving
    /// backoff the trace keeps from the flat-fold limit.
    pub terminal: Configuration,
    pub terminal_angle: f64,
    pub mobility: MobilitySummary,
    pub endpoint: EndpointReport,
    pub radial: RadialReport,
    pub symmetry: SymmetryReport,
}

/// Trace a catalog path and run every verification over the result.
pub fn run_path(id: PathId, samples: usize) -> Result<PathRun> {
    run_path_with(id, &RunOptions { samples, ..RunOptions::default() })
}

pub fn run_path_with(id: PathId, opts: &RunOptions) -> Result<PathRun> {
    let path = super::find_path(id)
        .ok_or_else(|| KirigamiError::UnknownPath(id.to_string()))?;
    if opts.samples == 0 {
        return Err(KirigamiError::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    let pattern = match opts.flap_h {
        Some(h) => path.pattern_with_flap(opts.edge_length, h)?,
        None => path.pattern(opts.edge_length)?,
    };
    let assembly = Assembly::from_pattern(&pattern)?;
    let driving = pattern.profile.driving_hinge;
    let deployed = Configuration::identity(assembly.panels());
    let theta0 = assembly.dihedral(&deployed, driving);
    let theta_end = driving_dihedral(&pattern, pattern.profile.s_end);
    let stop = backed_off_stop(&pattern, theta0, theta_end);

    let schedule = TraceSchedule::linear(driving, theta0, stop, opts.samples);
    let trace_opts = trace_options(&pattern, &assembly, opts.samples, opts.audit_all_below);
    let (trace, terminal, terminal_angle) = {
        let seed = foldmap_seed(&pattern, &assembly);
        let trace = trace_fold(&assembly, &schedule, &trace_opts, None, Some(&seed))
            .map_err(|e| in_path(id, e))?;
        let (terminal, terminal_angle) = if opts.samples == 1 {
            (deployed, theta0)
        } else if pattern.profile.driving_backoff > 0.0 {
            // One more Newton push onto the exact fold limit; the limit is
            // singular, so it is excluded from the rank audits above.
            let mut cfg = trace.final_config().clone();
            solve_closure(&assembly, &mut cfg, &[(driving, theta_end)], &trace_opts.solve)
                .map_err(|e| in_path(id, e))?;
            (cfg, theta_end)
        } else {
            (trace.final_config().clone(), theta_end)
        };
        (trace, terminal, terminal_angle)
    };

    let mobility = summarize_mobility(path, &pattern, &assembly, &terminal, terminal_angle)?;
    let endpoint = verify_endpoint(path, &pattern, &assembly, &trace, &terminal)
        .map_err(|e| in_path(id, e))?;
    let radial = verify_radial(&assembly, &trace);
    let symmetry = verify_symmetry(path, &assembly, &trace, opts.symmetry_samples)
        .map_err(|e| in_path(id, e))?;

    Ok(PathRun {
        path,
        pattern,
        assembly,
        trace,
        terminal,
        terminal_angle,
        mobility,
        endpoint,
        radial,
        symmetry,
    })
}

/// Freedom counts at the deployed limit, quarter, half, and final stations
/// of an already-traced path, plus the flat state.
pub fn mobility_summary(run: &PathRun) -> Result<MobilitySummary> {
    summarize_mobility(
        run.path,
        &run.pattern,
        &run.assembly,
        &run.terminal,
        run.terminal_angle,
    )
}

/// Drive the fold back from the terminal state to the deployed angle.
///
/// Near the deployed limit the travel shrinks with the square of the
/// driving angle, so the schedule closes in geometrically there before the
/// final step; a plain uniform last step strands the solution off the flat
/// state along the near-null toggle directions. The deployed terminus is a
/// fold limit, so its own rank audit is informational.
pub fn run_reverse(run: &PathRun) -> Result<FoldTrace> {
    let pattern = &run.pattern;
    let assembly = &run.assembly;
    let driving = pattern.profile.driving_hinge;
    let samples = run.trace.samples.len();
    if samples < 2 {
        return Err(KirigamiError::Trace(
            "nothing to reverse: the forward trace never left the deployed state".into(),
        ));
    }
    let deployed = Configuration::identity(assembly.panels());
    let theta0 = assembly.dihedral(&deployed, driving);
    let stop = backed_off_stop(pattern, theta0, run.terminal_angle);

    let mut targets = Vec::with_capacity(samples + 24);
    targets.push(run.terminal_angle);
    if pattern.profile.driving_backoff > 0.0 {
        targets.push(stop);
    }
    for k in (1..samples - 1).rev() {
        targets.push(theta0 + (stop - theta0) * k as f64 / (samples - 1) as f64);
    }
    let mut tail = targets.last().copied().unwrap() / 4.0;
    while tail.abs() > 1e-4 {
        targets.push(tail);
        tail /= 4.0;
    }
    targets.push(theta0);

    let mut opts = trace_options(pattern, assembly, targets.len(), usize::MAX);
    opts.exempt_last = true;
    if run.trace.samples.len() > 2 {
        // The forward audits already certified this branch; spot-check.
        opts.audit_samples = Some(vec![1, targets.len() / 2]);
    }
    let schedule = TraceSchedule { driving_hinge: driving, targets };
    let seed = foldmap_seed(pattern, assembly);
    trace_fold(assembly, &schedule, &opts, Some(&run.terminal), Some(&seed))
        .map_err(|e| in_path(run.path.id, e))
}

fn backed_off_stop(pattern: &KirigamiPattern, theta0: f64, theta_end: f64) -> f64 {
    theta_end - (theta_end - theta0).signum() * pattern.profile.driving_backoff
}

fn trace_options(
    pattern: &KirigamiPattern,
    assembly: &Assembly,
    samples: usize,
    audit_all_below: usize,
) -> TraceOptions {
    let mut opts = TraceOptions::for_edge(pattern.edge_length);
    if assembly.coords() > audit_all_below && samples > 4 {
        let mut picks = vec![1, samples / 4, samples / 2, samples - 1];
        picks.dedup();
        opts.audit_samples = Some(picks);
    }
    opts
}

/// Closed-form seed for the Newton iteration, re-anchored to the
/// assembly's ground panel.
fn foldmap_seed<'a>(
    pattern: &'a KirigamiPattern,
    assembly: &'a Assembly,
) -> impl Fn(f64) -> Configuration + 'a {
    move |theta| {
        let s = travel_of_driving_angle(pattern, theta);
        assembly.configuration_from_placements(&radial_placements(pattern, s))
    }
}

fn summarize_mobility(
    path: &TransformationPath,
    pattern: &KirigamiPattern,
    assembly: &Assembly,
    terminal: &Configuration,
    terminal_angle: f64,
) -> Result<MobilitySummary> {
    let driving = pattern.profile.driving_hinge;
    let deployed = Configuration::identity(assembly.panels());
    let theta0 = assembly.dihedral(&deployed, driving);
    let span = terminal_angle - theta0;
    if span.abs() < 1e-9 {
        // Deployed-only run: every station is the same flat limit.
        let report = mobility(assembly, terminal);
        return Ok(MobilitySummary {
            deployed_limit: report.clone(),
            quarter: report.clone(),
            half: report.clone(),
            final_fold: report.clone(),
            flat_state: report,
        });
    }
    let stop = backed_off_stop(pattern, theta0, terminal_angle);
    let solve = TraceOptions::for_edge(pattern.edge_length).solve;
    let seed = foldmap_seed(pattern, assembly);
    let station = |theta: f64| -> Result<MobilityReport> {
        let mut cfg = seed(theta);
        solve_closure(assembly, &mut cfg, &[(driving, theta)], &solve)
            .map_err(|e| in_path(path.id, e))?;
        Ok(mobility(assembly, &cfg))
    };
    Ok(MobilitySummary {
        deployed_limit: station(theta0 + 1e-3 * span)?,
        quarter: station(theta0 + 0.25 * span)?,
        half: station(theta0 + 0.5 * span)?,
        final_fold: station(stop)?,
        flat_state: mobility(assembly, terminal),
    })
}

fn in_path(id: PathId, e: KirigamiError) -> KirigamiError {
    match e {
        KirigamiError::Solver(m) => KirigamiError::Solver(format!("{id}: {m}")),
        KirigamiError::Trace(m) => KirigamiError::Trace(format!("{id}: {m}")),
        KirigamiError::Verify(m) => KirigamiError::Verify(format!("{id}: {m}")),
        other => other,
    }
}
