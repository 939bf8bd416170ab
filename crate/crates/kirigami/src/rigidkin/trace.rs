//! Path tracing: continuation along the fold by driving one dihedral.

use super::{mobility, solve_closure, Assembly, Configuration, MobilityReport, SolveOptions};
use crate::error::{KirigamiError, Result};

/// Driving-angle targets for one traced path. The first target must equal
/// the dihedral of the deployed state, which is taken as sample zero without
/// solving.
#[derive(Debug, Clone)]
pub struct TraceSchedule {
    pub driving_hinge: usize,
    pub targets: Vec<f64>,
}

impl TraceSchedule {
    /// Evenly spaced targets from the deployed angle to `stop`.
    pub fn linear(driving_hinge: usize, start: f64, stop: f64, samples: usize) -> Self {
        assert!(samples >= 1);
        let targets = if samples == 1 {
            vec![start]
        } else {
            (0..samples)
                .map(|k| start + (stop - start) * k as f64 / (samples - 1) as f64)
                .collect()
        };
        TraceSchedule { driving_hinge, targets }
    }
}

/// When the closed-form branch predictor seeds the Newton iteration.
///
/// Leaving the deployed state crosses a fold point of the constraint
/// manifold where plain continuation stalls, so radial paths seed the first
/// step; superposed assemblies keep their islands on the intended branch by
/// seeding every step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictorUse {
    None,
    FirstStep,
    EveryStep,
}

#[derive(Clone)]
pub struct TraceOptions {
    pub solve: SolveOptions,
    /// Sample indices to rank-audit; `None` audits every sample.
    pub audit_samples: Option<Vec<usize>>,
    /// Permit more than one surviving freedom without stopping. Only the
    /// crease-suppression check runs with this set.
    pub allow_extra_dof: bool,
    /// Exempt the final sample from the branch-point stop, for schedules
    /// that deliberately end on a fold limit.
    pub exempt_last: bool,
    /// Bisection depth when a step fails to converge.
    pub max_substeps: u32,
    pub predictor_use: PredictorUse,
}

impl TraceOptions {
    pub fn for_edge(edge_length: f64) -> Self {
        TraceOptions {
            solve: SolveOptions::for_edge(edge_length),
            audit_samples: None,
            allow_extra_dof: false,
            exempt_last: false,
            max_substeps: 8,
            predictor_use: PredictorUse::FirstStep,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FoldSample {
    pub index: usize,
    pub driving_angle: f64,
    pub config: Configuration,
    pub residual_inf: f64,
    /// Rank audit, present on audited samples.
    pub mobility: Option<MobilityReport>,
}

#[derive(Debug, Clone)]
pub struct FoldTrace {
    pub driving_hinge: usize,
    pub samples: Vec<FoldSample>,
}

impl FoldTrace {
    pub fn final_config(&self) -> &Configuration {
        &self.samples.last().expect("trace has samples").config
    }
}

/// Trace the fold through the scheduled driving angles.
///
/// Sample zero is the exact deployed state, or `origin` when resuming from
/// an already-folded configuration. Every later sample is solved by damped
/// Newton from the previous one (optionally seeded by `predictor`), with
/// interval bisection on convergence failures. Audited samples get a rank
/// count; a persistent count above one across the tolerance sweep stops the
/// trace as a branch point unless `allow_extra_dof` is set. Sample zero
/// itself is exempt, since the flat state is singular by design.
pub fn trace_fold(
    assembly: &Assembly,
    schedule: &TraceSchedule,
    opts: &TraceOptions,
    origin: Option<&Configuration>,
    predictor: Option<&dyn Fn(f64) -> Configuration>,
) -> Result<FoldTrace> {
    let start = origin
        .cloned()
        .unwrap_or_else(|| Configuration::identity(assembly.panels()));
    let theta0 = assembly.dihedral(&start, schedule.driving_hinge);
    let first = *schedule.targets.first().ok_or_else(|| {
        KirigamiError::Trace("empty target schedule".into())
    })?;
    if (theta0 - first).abs() > 1e-9 {
        return Err(KirigamiError::Trace(format!(
            "schedule starts at {first:.6} but the origin dihedral is {theta0:.6}"
        )));
    }
    let last = schedule.targets.len() - 1;
    let mut samples = Vec::with_capacity(schedule.targets.len());
    samples.push(make_sample(assembly, opts, 0, theta0, start.clone(), true)?);
    let mut prev = start;
    let mut prev_angle = theta0;
    let mut history: Option<(f64, Configuration)> = None;
    for (k, &target) in schedule.targets.iter().enumerate().skip(1) {
        let seeded = match (opts.predictor_use, predictor) {
            (PredictorUse::EveryStep, Some(p)) => Some(p(target)),
            (PredictorUse::FirstStep, Some(p)) if k == 1 => Some(p(target)),
            _ => None,
        };
        let start = match seeded {
            Some(c) => c,
            None => secant_guess(&prev, history.as_ref()),
        };
        let config = advance(
            assembly,
            schedule.driving_hinge,
            start,
            &prev,
            prev_angle,
            target,
            opts,
            opts.max_substeps,
        )?;
        history = Some((prev_angle, prev.clone()));
        let exempt = opts.exempt_last && k == last;
        samples.push(make_sample(assembly, opts, k, target, config.clone(), exempt)?);
        prev = config;
        prev_angle = target;
    }
    Ok(FoldTrace {
        driving_hinge: schedule.driving_hinge,
        samples,
    })
}

fn make_sample(
    assembly: &Assembly,
    opts: &TraceOptions,
    index: usize,
    driving_angle: f64,
    config: Configuration,
    exempt: bool,
) -> Result<FoldSample> {
    let residual_inf = assembly
        .residual(&config)
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let audited = match &opts.audit_samples {
        None => true,
        Some(list) => list.contains(&index),
    };
    let report = audited.then(|| mobility(assembly, &config));
    if !exempt && !opts.allow_extra_dof {
        if let Some(r) = &report {
            if r.dof > 1 && r.sweep.iter().all(|&(_, d)| d > 1) {
                return Err(KirigamiError::Trace(format!(
                    "branch point at driving angle {driving_angle:.6}: \
                     {} freedoms persist across the rank tolerance sweep",
                    r.dof
                )));
            }
        }
    }
    Ok(FoldSample {
        index,
        driving_angle,
        config,
        residual_inf,
        mobility: report,
    })
}

/// Reuse the last accepted inter-sample motion as the starting guess.
fn secant_guess(prev: &Configuration, history: Option<&(f64, Configuration)>) -> Configuration {
    let Some((_, before)) = history else {
        return prev.clone();
    };
    let deltas = prev
        .deltas
        .iter()
        .zip(&before.deltas)
        .map(|(t, t0)| {
            let increment = t.compose(&t0.inverse());
            increment.compose(t).renormalized()
        })
        .collect();
    Configuration { deltas }
}

#[allow(clippy::too_many_arguments)]
fn advance(
    assembly: &Assembly,
    hinge: usize,
    start: Configuration,
    from: &Configuration,
    from_angle: f64,
    to_angle: f64,
    opts: &TraceOptions,
    depth: u32,
) -> Result<Configuration> {
    let mut config = start;
    match solve_closure(assembly, &mut config, &[(hinge, to_angle)], &opts.solve) {
        Ok(_) => Ok(config),
        Err(_) if depth > 0 => {
            let mid_angle = 0.5 * (from_angle + to_angle);
            let mid = advance(
                assembly,
                hinge,
                from.clone(),
                from,
                from_angle,
                mid_angle,
                opts,
                depth - 1,
            )?;
            advance(
                assembly,
                hinge,
                mid.clone(),
                &mid,
                mid_angle,
                to_angle,
                opts,
                depth - 1,
            )
        }
        Err(e) => Err(KirigamiError::Trace(format!(
            "no convergence at driving angle {to_angle:.6} \
             after {} bisections: {e}",
            opts.max_substeps
        ))),
    }
}
