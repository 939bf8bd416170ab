//! Geometric verification of traced folds: endpoint registration against
//! the target solid, radial-motion metrics, and symmetry commutation.

use super::TransformationPath;
use crate::error::{KirigamiError, Result};
use crate::patterngen::{KirigamiPattern, SheetRole};
use crate::rigidkin::{solve_closure, Assembly, Configuration, FoldTrace, SolveOptions};
use crate::solids::symmetry::{symmetry_group, GroupKind};
use crate::solids::{build_polyhedron, SolidId};
use nalgebra::{Matrix3, Vector3};

/// Best-fit similarity `x -> scale * rotation * x + translation`.
#[derive(Debug, Clone)]
pub struct Registration {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
    pub scale: f64,
    /// Greatest distance between a mapped point and its mate.
    pub max_deviation: f64,
}

/// Least-squares similarity registration of `xs` onto `ys`.
///
/// Covariance SVD with the sign of the smallest singular direction flipped
/// when needed, so the rotation stays proper. With `with_scale` off the
/// scale is pinned to one and the fit is rigid.
pub fn register_points(
    xs: &[Vector3<f64>],
    ys: &[Vector3<f64>],
    with_scale: bool,
) -> Registration {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let n = xs.len() as f64;
    let mx: Vector3<f64> = xs.iter().sum::<Vector3<f64>>() / n;
    let my: Vector3<f64> = ys.iter().sum::<Vector3<f64>>() / n;
    let mut sigma = Matrix3::zeros();
    let mut var_x = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sigma += dy * dx.transpose();
        var_x += dx.norm_squared();
    }
    sigma /= n;
    var_x /= n;
    let svd = sigma.svd(true, true);
    let u = svd.u.expect("svd of a 3x3 always yields u");
    let vt = svd.v_t.expect("svd of a 3x3 always yields v_t");
    let flip = (u.determinant() * vt.determinant()).signum();
    let s = Vector3::new(1.0, 1.0, flip);
    let rotation = u * Matrix3::from_diagonal(&s) * vt;
    let scale = if with_scale && var_x > 0.0 {
        svd.singular_values.dot(&s) / var_x
    } else {
        1.0
    };
    let translation = my - rotation * mx * scale;
    let max_deviation = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (scale * (rotation * x) + translation - y).norm())
        .fold(0.0, f64::max);
    Registration { rotation, translation, scale, max_deviation }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointStatus {
    Registered,
    /// Trace never left the deployed state, so there is no endpoint.
    Skipped,
}

impl EndpointStatus {
    pub fn name(&self) -> &'static str {
        match self {
            EndpointStatus::Registered => "registered",
            EndpointStatus::Skipped => "skipped",
        }
    }
}

/// Similarity registration of the folded reserved faces against the target
/// solid's matching face orbit.
#[derive(Debug, Clone)]
pub struct EndpointReport {
    pub target: SolidId,
    pub status: EndpointStatus,
    /// Greatest per-vertex distance after registration.
    pub aligned_deviation: f64,
    pub scale_ratio: f64,
    pub rotation: Matrix3<f64>,
    pub vertex_count: usize,
    /// For corner-flap paths: the deviation in the vanishing-flap limit.
    /// The flaps are rigid extensions of their reserved face, so the bare
    /// face already measures it and the value equals `aligned_deviation`.
    pub flap_limit_deviation: Option<f64>,
}

impl EndpointReport {
    fn skipped(target: SolidId) -> Self {
        EndpointReport {
            target,
            status: EndpointStatus::Skipped,
            aligned_deviation: 0.0,
            scale_ratio: 1.0,
            rotation: Matrix3::identity(),
            vertex_count: 0,
            flap_limit_deviation: None,
        }
    }
}

/// Full geometric point group of a solid, one step up from the symmetry a
/// path preserves: the tetrahedral paths run on solids whose deployed
/// geometry still has the octahedral symmetry.
fn geometric_group(id: SolidId) -> GroupKind {
    match id {
        SolidId::Tetrahedron | SolidId::TruncatedTetrahedron => GroupKind::Td,
        SolidId::Dodecahedron
        | SolidId::Icosahedron
        | SolidId::TruncatedDodecahedron
        | SolidId::TruncatedIcosahedron
        | SolidId::TruncatedIcosidodecahedron
        | SolidId::Rhombicosidodecahedron => GroupKind::Ih,
        _ => GroupKind::Oh,
    }
}

/// Reserved-face positions of a configuration: per platform panel, the
/// current world vertices of the reserved polygon proper (flap chords
/// excluded) and its current normal.
struct ReservedState {
    verts: Vec<Vec<Vector3<f64>>>,
    normals: Vec<Vector3<f64>>,
    sides: usize,
}

fn reserved_state(
    pattern: &KirigamiPattern,
    assembly: &Assembly,
    config: &Configuration,
) -> Result<ReservedState> {
    let mut verts = Vec::new();
    let mut normals = Vec::new();
    let mut sides = 0;
    for (i, sheet) in pattern.sheets.iter().enumerate() {
        if sheet.role != SheetRole::Platform {
            continue;
        }
        let local: Vec<Vector3<f64>> = match &sheet.face_polygon {
            Some(poly) => poly.iter().map(|p| Vector3::new(p.x, p.y, 0.0)).collect(),
            None => sheet.boundary.iter().map(|p| Vector3::new(p.x, p.y, 0.0)).collect(),
        };
        let delta = &config.deltas[i];
        verts.push(
            local
                .iter()
                .map(|p| delta.apply(&sheet.deployed.apply(p)))
                .collect(),
        );
        normals.push(delta.rotation * assembly.normals[i]);
        if sides == 0 {
            sides = local.len();
        } else if sides != local.len() {
            return Err(KirigamiError::Verify(
                "reserved faces disagree on side count".into(),
            ));
        }
    }
    if verts.is_empty() {
        return Err(KirigamiError::Verify("pattern has no reserved faces".into()));
    }
    Ok(ReservedState { verts, normals, sides })
}

/// Register the reserved faces of one configuration against a target solid.
///
/// The match tries every proper element of the source geometry's point
/// group as a candidate alignment, pairs reserved faces with target faces
/// of the same side count by normal direction, pairs vertices within each
/// face by nearest neighbour about the face centre, and keeps the candidate
/// whose global similarity registration lands closest.
pub fn register_state(
    pattern: &KirigamiPattern,
    assembly: &Assembly,
    config: &Configuration,
    target: SolidId,
) -> Result<EndpointReport> {
    let state = reserved_state(pattern, assembly, config)?;
    let target_poly = build_polyhedron(target, pattern.edge_length)?;
    let faces: Vec<usize> = (0..target_poly.faces.len())
        .filter(|&f| target_poly.faces[f].sides() == state.sides)
        .collect();
    if faces.len() < state.verts.len() {
        return Err(KirigamiError::Verify(format!(
            "{} has {} faces with {} sides but {} reserved faces need a match",
            target.name(),
            faces.len(),
            state.sides,
            state.verts.len()
        )));
    }
    let target_normals: Vec<Vector3<f64>> =
        faces.iter().map(|&f| target_poly.face_normal(f)).collect();
    let target_verts: Vec<Vec<Vector3<f64>>> = faces
        .iter()
        .map(|&f| target_poly.face_vertices(f))
        .collect();
    let target_centers: Vec<Vector3<f64>> =
        faces.iter().map(|&f| target_poly.face_centroid(f)).collect();

    let group = symmetry_group(geometric_group(pattern.source));
    let mut best: Option<Registration> = None;
    let mut vertex_count = 0;
    for g in group.elements.iter().filter(|g| g.determinant() > 0.0) {
        let Some(pairs) = candidate_pairs(
            g,
            &state,
            &target_normals,
            &target_verts,
            &target_centers,
        ) else {
            continue;
        };
        let (xs, ys): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let reg = register_points(&xs, &ys, true);
        vertex_count = xs.len();
        if best
            .as_ref()
            .map(|b| reg.max_deviation < b.max_deviation)
            .unwrap_or(true)
        {
            best = Some(reg);
        }
    }
    let best = best.ok_or_else(|| {
        KirigamiError::Verify(format!(
            "no alignment matches the reserved faces onto {}",
            target.name()
        ))
    })?;
    Ok(EndpointReport {
        target,
        status: EndpointStatus::Registered,
        aligned_deviation: best.max_deviation,
        scale_ratio: best.scale,
        rotation: best.rotation,
        vertex_count,
        flap_limit_deviation: None,
    })
}

/// Vertex pairs (current, target) under one candidate alignment, or `None`
/// when the candidate fails to pair the face normals bijectively.
fn candidate_pairs(
    g: &Matrix3<f64>,
    state: &ReservedState,
    target_normals: &[Vector3<f64>],
    target_verts: &[Vec<Vector3<f64>>],
    target_centers: &[Vector3<f64>],
) -> Option<Vec<(Vector3<f64>, Vector3<f64>)>> {
    let mut taken = vec![false; target_normals.len()];
    let mut pairs = Vec::new();
    for (verts, normal) in state.verts.iter().zip(&state.normals) {
        let rotated = g * normal;
        let j = target_normals
            .iter()
            .position(|t| t.dot(&rotated) > 1.0 - 1e-6)?;
        if taken[j] {
            return None;
        }
        taken[j] = true;
        let center: Vector3<f64> =
            verts.iter().sum::<Vector3<f64>>() / verts.len() as f64;
        for v in verts {
            let probe = g * (v - center) + target_centers[j];
            let w = target_verts[j]
                .iter()
                .min_by(|a, b| {
                    (*a - probe).norm().total_cmp(&(*b - probe).norm())
                })
                .unwrap();
            pairs.push((*v, *w));
        }
    }
    Some(pairs)
}

/// Endpoint check of a traced path: register the terminal state against
/// the path's target solid. A single-sample trace has no endpoint and is
/// reported as skipped.
pub fn verify_endpoint(
    path: &TransformationPath,
    pattern: &KirigamiPattern,
    assembly: &Assembly,
    trace: &FoldTrace,
    terminal: &Configuration,
) -> Result<EndpointReport> {
    if trace.samples.len() < 2 {
        return Ok(EndpointReport::skipped(path.target));
    }
    let mut report = register_state(pattern, assembly, terminal, path.target)?;
    if path.is_flap() {
        report.flap_limit_deviation = Some(report.aligned_deviation);
    }
    Ok(report)
}

/// Deviation between the terminal shapes of two paths from the same
/// source, after rigid registration of their reserved-face vertices. Used
/// for paths that claim congruent folded shapes.
pub fn verify_endpoint_congruence(
    a: (&KirigamiPattern, &Assembly, &Configuration),
    b: (&KirigamiPattern, &Assembly, &Configuration),
) -> Result<f64> {
    let sa = reserved_state(a.0, a.1, a.2)?;
    let sb = reserved_state(b.0, b.1, b.2)?;
    if sa.verts.len() != sb.verts.len() || sa.sides != sb.sides {
        return Err(KirigamiError::Verify(
            "folded shapes have different reserved-face counts".into(),
        ));
    }
    let group = symmetry_group(geometric_group(a.0.source));
    let centers_b: Vec<Vector3<f64>> = sb
        .verts
        .iter()
        .map(|v| v.iter().sum::<Vector3<f64>>() / v.len() as f64)
        .collect();
    let target: ReservedState = sb;
    let mut best: Option<f64> = None;
    for g in group.elements.iter().filter(|g| g.determinant() > 0.0) {
        let Some(pairs) = candidate_pairs(
            g,
            &sa,
            &target.normals,
            &target.verts,
            &centers_b,
        ) else {
            continue;
        };
        let (xs, ys): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let reg = register_points(&xs, &ys, false);
        if best.map(|b| reg.max_deviation < b).unwrap_or(true) {
            best = Some(reg.max_deviation);
        }
    }
    best.ok_or_else(|| {
        KirigamiError::Verify("folded shapes admit no aligning rotation".into())
    })
}

/// Greatest vertex distance between two configurations of one assembly.
pub fn max_vertex_deviation(
    assembly: &Assembly,
    a: &Configuration,
    b: &Configuration,
) -> f64 {
    let ra = assembly.world_boundaries(a);
    let rb = assembly.world_boundaries(b);
    ra.iter()
        .zip(&rb)
        .flat_map(|(ring_a, ring_b)| {
            ring_a.iter().zip(ring_b).map(|(p, q)| (p - q).norm())
        })
        .fold(0.0, f64::max)
}

/// Radial metrics of one reserved face across the trace.
#[derive(Debug, Clone)]
pub struct RadialFaceCheck {
    pub panel: String,
    /// Worst angle between the face's centre ray and its deployed normal.
    pub max_ray_deviation: f64,
    /// Worst rotation of the face normal away from its deployed direction.
    pub max_orientation_drift: f64,
    /// Centre distance never increases along the fold.
    pub monotone: bool,
}

/// Per-sample radial metrics, maximised over the reserved faces.
#[derive(Debug, Clone)]
pub struct RadialSampleMetrics {
    pub index: usize,
    pub driving_angle: f64,
    /// Mean distance of the reserved faces from the moving centre.
    pub mean_distance: f64,
    pub ray_deviation: f64,
    pub orientation_drift: f64,
    /// Spread between the nearest and farthest reserved face.
    pub equidistance_spread: f64,
}

#[derive(Debug, Clone)]
pub struct RadialReport {
    pub faces: Vec<RadialFaceCheck>,
    pub samples: Vec<RadialSampleMetrics>,
    pub max_ray_deviation: f64,
    pub max_orientation_drift: f64,
    pub max_equidistance_spread: f64,
    pub monotone: bool,
}

/// Check that the reserved faces translate radially: centres stay on rays
/// through the moving centre, normals never rotate, and symmetric faces
/// keep a common distance. Reports metrics, never fails.
///
/// The assembly is anchored to its ground panel, so the body centre moves
/// through the trace. The reserved faces form a full symmetry orbit whose
/// normals sum to zero, which makes the mean of their centres equal the
/// translated body centre; all metrics are taken about that point.
pub fn verify_radial(assembly: &Assembly, trace: &FoldTrace) -> RadialReport {
    let platforms: Vec<usize> = (0..assembly.panels())
        .filter(|&i| assembly.roles[i] == SheetRole::Platform)
        .collect();
    let anchors: Vec<Vector3<f64>> = platforms
        .iter()
        .map(|&i| assembly.deployed[i].translation)
        .collect();
    let mut faces: Vec<RadialFaceCheck> = platforms
        .iter()
        .map(|&i| RadialFaceCheck {
            panel: assembly.panel_ids[i].clone(),
            max_ray_deviation: 0.0,
            max_orientation_drift: 0.0,
            monotone: true,
        })
        .collect();
    let mut samples = Vec::with_capacity(trace.samples.len());
    let mut last_distance: Vec<f64> = Vec::new();
    // Distances may jitter at the solver tolerance without counting as
    // real growth.
    let slack = 1e-9 * assembly.edge_length;
    for (t, sample) in trace.samples.iter().enumerate() {
        let config = polished_config(assembly, trace, t);
        let centers: Vec<Vector3<f64>> = platforms
            .iter()
            .zip(&anchors)
            .map(|(&i, c)| config.deltas[i].apply(c))
            .collect();
        let origin: Vector3<f64> =
            centers.iter().sum::<Vector3<f64>>() / centers.len() as f64;
        let mut metrics = RadialSampleMetrics {
            index: sample.index,
            driving_angle: sample.driving_angle,
            mean_distance: 0.0,
            ray_deviation: 0.0,
            orientation_drift: 0.0,
            equidistance_spread: 0.0,
        };
        let mut dmin = f64::INFINITY;
        let mut dmax = 0.0_f64;
        for (k, (&i, center)) in platforms.iter().zip(&centers).enumerate() {
            let ray = center - origin;
            let d = ray.norm();
            dmin = dmin.min(d);
            dmax = dmax.max(d);
            metrics.mean_distance += d / centers.len() as f64;
            let ray_dev = angle_between_safe(&ray, &assembly.normals[i]);
            let drift = angle_between_safe(
                &(config.deltas[i].rotation * assembly.normals[i]),
                &assembly.normals[i],
            );
            metrics.ray_deviation = metrics.ray_deviation.max(ray_dev);
            metrics.orientation_drift = metrics.orientation_drift.max(drift);
            faces[k].max_ray_deviation = faces[k].max_ray_deviation.max(ray_dev);
            faces[k].max_orientation_drift =
                faces[k].max_orientation_drift.max(drift);
            if let Some(&prev) = last_distance.get(k) {
                if d > prev + slack {
                    faces[k].monotone = false;
                }
            }
        }
        metrics.equidistance_spread = dmax - dmin;
        last_distance = centers
            .iter()
            .map(|c| (c - origin).norm())
            .collect();
        samples.push(metrics);
    }
    let max_ray_deviation = samples
        .iter()
        .map(|s| s.ray_deviation)
        .fold(0.0, f64::max);
    let max_orientation_drift = samples
        .iter()
        .map(|s| s.orientation_drift)
        .fold(0.0, f64::max);
    let max_equidistance_spread = samples
        .iter()
        .map(|s| s.equidistance_spread)
        .fold(0.0, f64::max);
    let monotone = faces.iter().all(|f| f.monotone);
    RadialReport {
        faces,
        samples,
        max_ray_deviation,
        max_orientation_drift,
        max_equidistance_spread,
        monotone,
    }
}

/// Re-solve one traced state well below the verification tolerances.
///
/// The trace guarantees its residual bound, but on the larger patterns the
/// corresponding position error sits near the strictest check thresholds.
/// The refinement may only move vertices within the solver's own error
/// budget; a state needing a larger correction is genuinely off the
/// manifold and is measured as stored rather than repaired.
fn polished_config(assembly: &Assembly, trace: &FoldTrace, t: usize) -> Configuration {
    let mut opts = SolveOptions::for_edge(assembly.edge_length);
    opts.residual_tol = 1e-13 * assembly.edge_length;
    opts.damping = 1e-12 * assembly.edge_length;
    opts.max_iterations = 8;
    let sample = &trace.samples[t];
    let mut config = sample.config.clone();
    solve_closure(
        assembly,
        &mut config,
        &[(trace.driving_hinge, sample.driving_angle)],
        &opts,
    )
    .ok();
    let budget = 1e-6 * assembly.edge_length;
    let moved = assembly
        .world_boundaries(&sample.config)
        .iter()
        .zip(assembly.world_boundaries(&config).iter())
        .flat_map(|(a, b)| a.iter().zip(b.iter()))
        .map(|(p, q)| (p - q).norm())
        .fold(0.0_f64, f64::max);
    if moved > budget {
        return sample.config.clone();
    }
    config
}

/// Angle between two directions, exact near zero. A degenerate ray (the
/// centre face of nothing) reads as zero rather than poisoning the report.
fn angle_between_safe(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let cross = a.cross(b).norm() / (na * nb);
    let dot = a.dot(b) / (na * nb);
    cross.atan2(dot)
}

/// Commutation of the traced motion with the path's symmetry group.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub group: GroupKind,
    pub elements: usize,
    pub samples: usize,
    /// Worst vertex mismatch between a transformed-and-relabelled state
    /// and the state itself, over all elements and samples.
    pub max_commutation_error: f64,
}

/// Panel permutation and per-panel vertex permutations realizing one group
/// element on the deployed pattern.
struct Automorphism {
    panel: Vec<usize>,
    vertex: Vec<Vec<usize>>,
}

fn automorphism(
    assembly: &Assembly,
    g: &Matrix3<f64>,
    tol: f64,
) -> Result<Automorphism> {
    let centroids: Vec<Vector3<f64>> = (0..assembly.panels())
        .map(|i| {
            let ring = &assembly.boundaries[i];
            ring.iter().sum::<Vector3<f64>>() / ring.len() as f64
        })
        .collect();
    let mut panel = vec![usize::MAX; assembly.panels()];
    let mut used = vec![false; assembly.panels()];
    for i in 0..assembly.panels() {
        let image = g * centroids[i];
        let mut found = None;
        for j in 0..assembly.panels() {
            if used[j]
                || assembly.roles[j] != assembly.roles[i]
                || (centroids[j] - image).norm() > tol
            {
                continue;
            }
            found = Some(j);
            break;
        }
        let j = found.ok_or_else(|| {
            KirigamiError::Verify(format!(
                "pattern has no automorphism for a symmetry element: panel {} maps nowhere",
                assembly.panel_ids[i]
            ))
        })?;
        used[j] = true;
        panel[i] = j;
    }
    let mut vertex = Vec::with_capacity(assembly.panels());
    for i in 0..assembly.panels() {
        let j = panel[i];
        let ring = &assembly.boundaries[i];
        let image_ring = &assembly.boundaries[j];
        let mut perm = Vec::with_capacity(ring.len());
        if ring.len() != image_ring.len() {
            return Err(KirigamiError::Verify(
                "automorphism maps a panel onto one with a different corner count".into(),
            ));
        }
        for p in ring {
            let image = g * p;
            let (k, dist) = image_ring
                .iter()
                .enumerate()
                .map(|(k, q)| (k, (q - image).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if dist > tol {
                return Err(KirigamiError::Verify(
                    "automorphism misaligns panel corners".into(),
                ));
            }
            perm.push(k);
        }
        vertex.push(perm);
    }
    Ok(Automorphism { panel, vertex })
}

/// Measure how exactly the motion commutes with the path's symmetry group.
///
/// For each group element (improper ones included, the fold keeps its
/// mirrors) and each sampled state: transform every panel vertex by the
/// element, relabel panels and corners by the deployed automorphism, and
/// rigid-register against the untransformed state. The registration
/// absorbs the ground-panel gauge, which differs per element by a proper
/// motion. The worst vertex mismatch over the battery comes back.
pub fn verify_symmetry(
    path: &TransformationPath,
    assembly: &Assembly,
    trace: &FoldTrace,
    samples: usize,
) -> Result<SymmetryReport> {
    let group = path.group();
    let tol = 1e-6 * assembly.edge_length;
    let tables: Vec<Automorphism> = group
        .elements
        .iter()
        .map(|g| automorphism(assembly, g, tol))
        .collect::<Result<_>>()?;
    let picks = sample_spread(trace.samples.len(), samples);
    let mut max_error = 0.0_f64;
    for &t in &picks {
        // The commutation error of a state is bounded by the asymmetric part
        // of its solve error, so the check needs the polished precision.
        let config = polished_config(assembly, trace, t);
        let rings = assembly.world_boundaries(&config);
        for (g, table) in group.elements.iter().zip(&tables) {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for i in 0..assembly.panels() {
                let j = table.panel[i];
                for (k, p) in rings[i].iter().enumerate() {
                    xs.push(g * p);
                    ys.push(rings[j][table.vertex[i][k]]);
                }
            }
            let reg = register_points(&xs, &ys, false);
            max_error = max_error.max(reg.max_deviation);
        }
    }
    Ok(SymmetryReport {
        group: path.symmetry,
        elements: group.elements.len(),
        samples: picks.len(),
        max_commutation_error: max_error,
    })
}

/// Evenly spread sample indices, always keeping the first and last.
fn sample_spread(len: usize, want: usize) -> Vec<usize> {
    if len == 0 {
        return Vec::new();
    }
    let want = want.clamp(1, len);
    if want == 1 {
        return vec![0];
    }
    let mut picks: Vec<usize> = (0..want)
        .map(|k| k * (len - 1) / (want - 1))
        .collect();
    picks.dedup();
    picks
}
