//! Verification reports: one JSON document per traced path, with every
//! metric against its tolerance, and a human-readable summary table.

use super::run::PathRun;
use super::verify::EndpointStatus;
use serde::{Serialize, Serializer};

/// A float that serializes with sixteen fractional digits of scientific
/// notation, so reports are byte-identical across runs and platforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric(pub f64);

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = format!("{:.16e}", self.0);
            let raw = serde_json::value::RawValue::from_string(raw)
                .expect("fixed-format float is valid json");
            raw.serialize(s)
        } else {
            s.serialize_f64(self.0)
        }
    }
}

/// Acceptance thresholds, scaled to the pattern's edge length where the
/// metric is a distance.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Closure residual along the trace.
    pub closure: f64,
    /// Endpoint registration deviation.
    pub geometric: f64,
    /// Ray deviation and orientation drift, radians.
    pub radial_angle: f64,
    /// Reserved-face distance spread per sample.
    pub equidistance: f64,
    /// Symmetry commutation error.
    pub symmetry: f64,
}

impl Tolerances {
    pub fn for_edge(edge_length: f64) -> Self {
        Tolerances {
            closure: 1e-10 * edge_length,
            geometric: 1e-6 * edge_length,
            radial_angle: 1e-8,
            equidistance: 1e-10 * edge_length,
            symmetry: 1e-8 * edge_length,
        }
    }
}

/// One verified metric against its threshold.
#[derive(Debug, Clone, Serialize)]
pub struct MetricCheck {
    pub name: &'static str,
    pub value: Metric,
    pub tolerance: Metric,
    pub passed: bool,
}

impl MetricCheck {
    fn within(name: &'static str, value: f64, tolerance: f64) -> Self {
        MetricCheck {
            name,
            value: Metric(value),
            tolerance: Metric(tolerance),
            passed: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MobilityBlock {
    pub deployed_limit: usize,
    pub quarter: usize,
    pub half: usize,
    pub final_fold: usize,
    /// Freedom count on the flat fold limit itself; informational, the
    /// limit is singular by design for patterns that close flat.
    pub flat_state: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointBlock {
    pub status: &'static str,
    pub target: String,
    pub target_alias: Option<String>,
    pub aligned_deviation: Metric,
    pub scale_ratio: Metric,
    pub rotation: [[Metric; 3]; 3],
    pub vertex_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flap_limit_deviation: Option<Metric>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialBlock {
    pub max_ray_deviation: Metric,
    pub max_orientation_drift: Metric,
    pub max_equidistance_spread: Metric,
    pub monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryBlock {
    pub group: &'static str,
    pub elements: usize,
    pub samples: usize,
    pub max_commutation_error: Metric,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub driving_angle: Metric,
    pub residual: Metric,
    /// Present on rank-audited samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dof: Option<usize>,
}

/// The complete verification record of one traced path.
#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    pub schema: &'static str,
    pub path: String,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_alias: Option<String>,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_alias: Option<String>,
    pub symmetry: &'static str,
    pub linkage: &'static str,
    pub edge_length: Metric,
    pub panels: usize,
    pub hinges: usize,
    pub samples: usize,
    pub terminal_angle: Metric,
    pub travel: Metric,
    pub passed: bool,
    pub checks: Vec<MetricCheck>,
    pub mobility: MobilityBlock,
    pub endpoint: EndpointBlock,
    pub radial: RadialBlock,
    pub symmetry_check: SymmetryBlock,
    pub trace: Vec<SampleRow>,
}

impl PathReport {
    pub fn from_run(run: &PathRun, tol: &Tolerances) -> Self {
        let path = run.path;
        let worst_residual = run
            .trace
            .samples
            .iter()
            .map(|s| s.residual_inf)
            .fold(0.0, f64::max);
        let moved = run.trace.samples.len() > 1;
        let mut checks = vec![
            MetricCheck::within("trace residual", worst_residual, tol.closure),
            MetricCheck::within(
                "mobility single freedom",
                run.mobility
                    .dofs()
                    .iter()
                    .map(|&d| (d as f64 - 1.0).abs())
                    .fold(0.0, f64::max),
                0.0,
            ),
            MetricCheck::within(
                "radial ray deviation",
                run.radial.max_ray_deviation,
                tol.radial_angle,
            ),
            MetricCheck::within(
                "radial orientation drift",
                run.radial.max_orientation_drift,
                tol.radial_angle,
            ),
            MetricCheck::within(
                "reserved-face equidistance",
                run.radial.max_equidistance_spread,
                tol.equidistance,
            ),
            MetricCheck::within(
                "symmetry commutation",
                run.symmetry.max_commutation_error,
                tol.symmetry,
            ),
        ];
        if moved && run.endpoint.status == EndpointStatus::Registered {
            checks.push(MetricCheck::within(
                "endpoint registration",
                run.endpoint.aligned_deviation,
                tol.geometric,
            ));
        }
        let passed = checks.iter().all(|c| c.passed);
        PathReport {
            schema: "kirigami-report/1",
            path: path.id.to_string(),
            source: path.source.name().to_string(),
            source_alias: path.source_alias.map(str::to_string),
            target: path.target.name().to_string(),
            target_alias: path.target_alias.map(str::to_string),
            symmetry: path.symmetry.name(),
            linkage: path.linkage.name(),
            edge_length: Metric(run.pattern.edge_length),
            panels: run.assembly.panels(),
            hinges: run.assembly.hinges.len(),
            samples: run.trace.samples.len(),
            terminal_angle: Metric(run.terminal_angle),
            travel: Metric(run.pattern.profile.s_end),
            passed,
            checks,
            mobility: MobilityBlock {
                deployed_limit: run.mobility.deployed_limit.dof,
                quarter: run.mobility.quarter.dof,
                half: run.mobility.half.dof,
                final_fold: run.mobility.final_fold.dof,
                flat_state: run.mobility.flat_state.dof,
            },
            endpoint: EndpointBlock {
                status: run.endpoint.status.name(),
                target: run.endpoint.target.name().to_string(),
                target_alias: path.target_alias.map(str::to_string),
                aligned_deviation: Metric(run.endpoint.aligned_deviation),
                scale_ratio: Metric(run.endpoint.scale_ratio),
                rotation: matrix_block(&run.endpoint.rotation),
                vertex_count: run.endpoint.vertex_count,
                flap_limit_deviation: run.endpoint.flap_limit_deviation.map(Metric),
            },
            radial: RadialBlock {
                max_ray_deviation: Metric(run.radial.max_ray_deviation),
                max_orientation_drift: Metric(run.radial.max_orientation_drift),
                max_equidistance_spread: Metric(run.radial.max_equidistance_spread),
                monotone: run.radial.monotone,
            },
            symmetry_check: SymmetryBlock {
                group: run.symmetry.group.name(),
                elements: run.symmetry.elements,
                samples: run.symmetry.samples,
                max_commutation_error: Metric(run.symmetry.max_commutation_error),
            },
            trace: run
                .trace
                .samples
                .iter()
                .map(|s| SampleRow {
                    index: s.index,
                    driving_angle: Metric(s.driving_angle),
                    residual: Metric(s.residual_inf),
                    dof: s.mobility.as_ref().map(|m| m.dof),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn matrix_block(m: &nalgebra::Matrix3<f64>) -> [[Metric; 3]; 3] {
    [
        [Metric(m[(0, 0)]), Metric(m[(0, 1)]), Metric(m[(0, 2)])],
        [Metric(m[(1, 0)]), Metric(m[(1, 1)]), Metric(m[(1, 2)])],
        [Metric(m[(2, 0)]), Metric(m[(2, 1)]), Metric(m[(2, 2)])],
    ]
}

/// Fixed-width table over a batch of path reports, one line each.
pub fn summary_table(reports: &[PathReport]) -> String {
    let mut rows = vec![[
        "path".to_string(),
        "transformation".to_string(),
        "linkage".to_string(),
        "dof".to_string(),
        "endpoint".to_string(),
        "radial".to_string(),
        "symmetry".to_string(),
        "status".to_string(),
    ]];
    for r in reports {
        let m = &r.mobility;
        rows.push([
            r.path.clone(),
            format!("{} -> {}", r.source, r.target),
            r.linkage.to_string(),
            format!("{}/{}/{}/{}", m.deployed_limit, m.quarter, m.half, m.final_fold),
            match r.endpoint.status {
                "registered" => format!("{:.2e}", r.endpoint.aligned_deviation.0),
                other => other.to_string(),
            },
            format!("{:.2e}", r.radial.max_ray_deviation.0),
            format!("{:.2e}", r.symmetry_check.max_commutation_error.0),
            if r.passed { "pass".into() } else { "FAIL".into() },
        ]);
    }
    let mut widths = [0usize; 8];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (w, cell) in widths.iter().zip(row) {
            line.push_str(&format!("{cell:<width$}  ", width = w));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
