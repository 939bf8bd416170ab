//! Catalog integrity and the verification battery over traced paths.

use kirigami::patterngen::FaceRole;
use kirigami::rigidkin::{Assembly, Configuration, FoldSample, FoldTrace};
use kirigami::solids::{build_polyhedron, SolidId};
use kirigami::transforms::{
    catalog, find_path, lookup_path, register_state, run_path, run_path_with, run_reverse,
    max_vertex_deviation, summary_table, verify_endpoint_congruence, verify_symmetry,
    EndpointStatus, LinkageClass, PathId, PathReport, RunOptions, Tolerances,
};
use nalgebra::Vector3;
use proptest::prelude::*;

#[test]
fn catalog_matches_the_published_pairs() {
    let paths = catalog();
    assert_eq!(paths.len(), 14);
    let mut ids: Vec<PathId> = paths.iter().map(|p| p.id).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), 14, "catalog ids are unique");

    let expect = [
        ("TP1.1", SolidId::TruncatedOctahedron, SolidId::TruncatedTetrahedron, "7R"),
        ("TP1.2", SolidId::TruncatedOctahedron, SolidId::TruncatedTetrahedron, "7R"),
        ("TP1.3", SolidId::TruncatedOctahedron, SolidId::Cuboctahedron, "8R"),
        ("TP2.1", SolidId::TruncatedCuboctahedron, SolidId::TruncatedCube, "7R"),
        ("TP2.2", SolidId::TruncatedCuboctahedron, SolidId::TruncatedOctahedron, "7R"),
        ("TP2.3", SolidId::TruncatedCuboctahedron, SolidId::Rhombicuboctahedron, "8R"),
        ("TP3.1", SolidId::TruncatedIcosidodecahedron, SolidId::TruncatedDodecahedron, "7R"),
        ("TP3.2", SolidId::TruncatedIcosidodecahedron, SolidId::TruncatedIcosahedron, "7R"),
        ("TP3.3", SolidId::TruncatedIcosidodecahedron, SolidId::Rhombicosidodecahedron, "8R"),
        ("F3a", SolidId::Cuboctahedron, SolidId::Tetrahedron, "7R"),
        ("F3b", SolidId::Rhombicuboctahedron, SolidId::Cube, "7R"),
        ("F3c", SolidId::Rhombicuboctahedron, SolidId::Octahedron, "7R"),
        ("F3d", SolidId::Rhombicosidodecahedron, SolidId::Dodecahedron, "7R"),
        ("F3e", SolidId::Rhombicosidodecahedron, SolidId::Icosahedron, "7R"),
    ];
    for (name, source, target, linkage) in expect {
        let path = lookup_path(name).unwrap();
        assert_eq!(path.source, source, "{name} source");
        assert_eq!(path.target, target, "{name} target");
        assert_eq!(path.linkage.name(), linkage, "{name} linkage");
    }
}

#[test]
fn path_names_parse_leniently() {
    assert_eq!("TP2.2".parse::<PathId>().unwrap(), PathId::Tp(2, 2));
    assert_eq!("tp 2.2".parse::<PathId>().unwrap(), PathId::Tp(2, 2));
    assert_eq!("F3a".parse::<PathId>().unwrap(), PathId::F3(0));
    assert_eq!("f3 E".parse::<PathId>().unwrap(), PathId::F3(4));
    assert!("TP2".parse::<PathId>().is_err());
    assert!("F3f".parse::<PathId>().is_err());
    assert!("whatever".parse::<PathId>().is_err());
    // Parses as an id but is no catalog entry.
    assert!("TP9.9".parse::<PathId>().is_ok());
    assert!(lookup_path("TP9.9").is_err());
}

#[test]
fn both_construction_names_appear_in_labels() {
    let path = lookup_path("TP1.3").unwrap();
    assert_eq!(path.source_label(), "truncated octahedron (truncated tetratetrahedron)");
    assert_eq!(path.target_label(), "cuboctahedron (rhombitetratetrahedron)");
    let plain = lookup_path("TP2.1").unwrap();
    assert_eq!(plain.source_label(), "truncated cuboctahedron");
}

fn role_census(id: PathId) -> (usize, usize, usize) {
    let path = find_path(id).unwrap();
    let poly = build_polyhedron(path.source, 1.0).unwrap();
    let roles = path.classify(&poly);
    let count = |want: FaceRole| roles.iter().filter(|&&r| r == want).count();
    (
        count(FaceRole::Reserved),
        count(FaceRole::FoldedPrimary),
        count(FaceRole::FoldedSecondary),
    )
}

#[test]
fn face_roles_split_the_census() {
    assert_eq!(role_census(PathId::Tp(1, 1)), (4, 4, 6));
    assert_eq!(role_census(PathId::Tp(1, 3)), (6, 4, 4));
    assert_eq!(role_census(PathId::Tp(2, 1)), (6, 8, 12));
    assert_eq!(role_census(PathId::Tp(2, 2)), (8, 6, 12));
    assert_eq!(role_census(PathId::Tp(2, 3)), (12, 8, 6));
    assert_eq!(role_census(PathId::Tp(3, 1)), (12, 20, 30));
    assert_eq!(role_census(PathId::Tp(3, 2)), (20, 12, 30));
    assert_eq!(role_census(PathId::Tp(3, 3)), (30, 20, 12));
    assert_eq!(role_census(PathId::F3(0)), (4, 4, 6));
    assert_eq!(role_census(PathId::F3(1)), (6, 8, 12));
    assert_eq!(role_census(PathId::F3(2)), (8, 6, 12));
    assert_eq!(role_census(PathId::F3(3)), (12, 20, 30));
    assert_eq!(role_census(PathId::F3(4)), (20, 12, 30));
}

#[test]
fn dual_tetrahedral_paths_swap_hexagon_families() {
    let poly = build_polyhedron(SolidId::TruncatedOctahedron, 1.0).unwrap();
    let first = find_path(PathId::Tp(1, 1)).unwrap().classify(&poly);
    let second = find_path(PathId::Tp(1, 2)).unwrap().classify(&poly);
    for (f, (a, b)) in first.iter().zip(&second).enumerate() {
        if poly.faces[f].sides() == 4 {
            assert_eq!(a, b);
        } else {
            assert_ne!(a, b, "hexagon {f} keeps its role");
        }
    }
}

#[test]
fn deployed_state_registers_onto_the_source() {
    let path = lookup_path("TP2.2").unwrap();
    let pattern = path.pattern(1.0).unwrap();
    let assembly = Assembly::from_pattern(&pattern).unwrap();
    let deployed = Configuration::identity(assembly.panels());
    let report = register_state(&pattern, &assembly, &deployed, path.source).unwrap();
    assert!(report.aligned_deviation < 1e-12);
    assert!((report.scale_ratio - 1.0).abs() < 1e-12);
    assert_eq!(report.vertex_count, 8 * 6);
}

/// Per-path short trace with the full battery asserted. The acceptance
/// suite runs the long traces; nine samples already cross the fold's
/// interior and exercise every check.
fn battery(id: PathId) {
    let run = run_path(id, 9).unwrap();
    let edge = run.pattern.edge_length;
    assert_eq!(run.trace.samples.len(), 9, "{id}");
    for sample in &run.trace.samples[1..] {
        if let Some(report) = &sample.mobility {
            assert_eq!(report.dof, 1, "{id} sample {}", sample.index);
        }
        assert!(sample.residual_inf < 1e-9 * edge, "{id} residual");
    }
    assert_eq!(run.mobility.dofs(), [1, 1, 1, 1], "{id} stations");
    assert_eq!(run.endpoint.status, EndpointStatus::Registered, "{id}");
    assert!(
        run.endpoint.aligned_deviation < 1e-6 * edge,
        "{id} endpoint deviation {:.3e}",
        run.endpoint.aligned_deviation
    );
    assert!(
        (run.endpoint.scale_ratio - 1.0).abs() < 1e-8,
        "{id} endpoint scale {:.3e}",
        run.endpoint.scale_ratio - 1.0
    );
    assert!(
        run.radial.max_ray_deviation < 1e-8,
        "{id} ray deviation {:.3e}",
        run.radial.max_ray_deviation
    );
    assert!(
        run.radial.max_orientation_drift < 1e-8,
        "{id} orientation drift {:.3e}",
        run.radial.max_orientation_drift
    );
    assert!(
        run.radial.max_equidistance_spread < 1e-10 * edge,
        "{id} equidistance {:.3e}",
        run.radial.max_equidistance_spread
    );
    assert!(run.radial.monotone, "{id} monotone travel");
    assert_eq!(run.symmetry.elements, run.path.group().elements.len());
    assert!(
        run.symmetry.max_commutation_error < 1e-8 * edge,
        "{id} symmetry error {:.3e}",
        run.symmetry.max_commutation_error
    );
    if run.path.linkage == LinkageClass::EightR {
        assert_eq!(run.pattern.profile.driving_backoff, 0.0);
    }
}

#[test]
fn battery_tp1_family() {
    battery(PathId::Tp(1, 1));
    battery(PathId::Tp(1, 2));
    battery(PathId::Tp(1, 3));
}

#[test]
fn battery_tp2_family() {
    battery(PathId::Tp(2, 1));
    battery(PathId::Tp(2, 2));
    battery(PathId::Tp(2, 3));
}

#[test]
fn battery_tp3_family() {
    battery(PathId::Tp(3, 1));
    battery(PathId::Tp(3, 2));
    battery(PathId::Tp(3, 3));
}

#[test]
fn battery_flap_family() {
    for k in 0..5 {
        battery(PathId::F3(k));
    }
}

#[test]
fn dual_paths_fold_congruent_shapes() {
    let a = run_path(PathId::Tp(1, 1), 9).unwrap();
    let b = run_path(PathId::Tp(1, 2), 9).unwrap();
    let deviation = verify_endpoint_congruence(
        (&a.pattern, &a.assembly, &a.terminal),
        (&b.pattern, &b.assembly, &b.terminal),
    )
    .unwrap();
    assert!(deviation < 1e-6, "congruence deviation {deviation:.3e}");
}

#[test]
fn reverse_trace_returns_to_the_deployed_state() {
    let run = run_path(PathId::Tp(1, 1), 9).unwrap();
    let reverse = run_reverse(&run).unwrap();
    let home = Configuration::identity(run.assembly.panels());
    let miss = max_vertex_deviation(&run.assembly, reverse.final_config(), &home);
    assert!(miss < 1e-8, "round trip misses by {miss:.3e}");
}

#[test]
fn single_sample_run_skips_the_endpoint() {
    let run = run_path(PathId::Tp(1, 1), 1).unwrap();
    assert_eq!(run.trace.samples.len(), 1);
    assert_eq!(run.endpoint.status, EndpointStatus::Skipped);
    assert_eq!(run.endpoint.vertex_count, 0);
    assert_eq!(run.terminal_angle, run.trace.samples[0].driving_angle);
    // No motion, no metrics beyond rounding noise.
    assert!(run.radial.max_ray_deviation < 1e-12);
    assert!(run.radial.max_equidistance_spread < 1e-12);
}

#[test]
fn zero_samples_are_rejected() {
    assert!(run_path(PathId::Tp(1, 1), 0).is_err());
}

#[test]
fn planted_fault_shows_up_in_the_symmetry_error() {
    let run = run_path(PathId::Tp(1, 1), 5).unwrap();
    let mut broken = run.trace.samples.last().unwrap().config.clone();
    let victim = (run.assembly.ground + 1) % run.assembly.panels();
    broken.deltas[victim].translation += Vector3::new(1e-3, 0.0, 0.0);
    broken.deltas[victim].rotation *=
        nalgebra::Rotation3::from_axis_angle(&Vector3::x_axis(), 1e-3).into_inner();
    let fake = FoldTrace {
        driving_hinge: run.trace.driving_hinge,
        samples: vec![FoldSample {
            index: 0,
            driving_angle: 0.0,
            config: broken,
            residual_inf: 0.0,
            mobility: None,
        }],
    };
    let report = verify_symmetry(run.path, &run.assembly, &fake, 1).unwrap();
    assert!(
        report.max_commutation_error >= 1e-3,
        "fault under-reported: {:.3e}",
        report.max_commutation_error
    );
}

#[test]
fn report_carries_every_check_and_passes() {
    let run = run_path(PathId::F3(0), 7).unwrap();
    let tol = Tolerances::for_edge(run.pattern.edge_length);
    let report = PathReport::from_run(&run, &tol);
    assert_eq!(report.schema, "kirigami-report/1");
    assert!(report.passed);
    assert_eq!(report.samples, 7);
    assert_eq!(report.trace.len(), 7);
    assert!(report.checks.iter().all(|c| c.passed));
    assert!(report.checks.iter().any(|c| c.name == "endpoint registration"));
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["schema"], "kirigami-report/1");
    assert_eq!(json["endpoint"]["status"], "registered");
    assert!(json["endpoint"]["flap_limit_deviation"].is_number());
    let table = summary_table(&[report]);
    assert!(table.contains("F3a"));
    assert!(table.contains("pass"));
}

#[test]
fn reports_are_deterministic_across_runs() {
    let first = run_path(PathId::F3(0), 5).unwrap();
    let second = run_path(PathId::F3(0), 5).unwrap();
    let tol = Tolerances::for_edge(first.pattern.edge_length);
    let a = PathReport::from_run(&first, &tol).to_json();
    let b = PathReport::from_run(&second, &tol).to_json();
    assert_eq!(a, b);
}

#[test]
fn flap_width_override_is_validated() {
    let flap = lookup_path("F3a").unwrap();
    assert!(flap.pattern_with_flap(1.0, 0.1).is_ok());
    // Wide flaps collide on the shared cut edge.
    assert!(flap.pattern_with_flap(1.0, 0.6).is_err());
    let hollow = lookup_path("TP2.2").unwrap();
    assert!(hollow.pattern_with_flap(1.0, 0.1).is_err());
}

#[test]
fn run_options_pick_up_flap_width() {
    let run = run_path_with(
        PathId::F3(0),
        &RunOptions { samples: 5, flap_h: Some(0.02), ..RunOptions::default() },
    )
    .unwrap();
    assert_eq!(run.endpoint.status, EndpointStatus::Registered);
    assert!(run.endpoint.aligned_deviation < 1e-6);
    assert_eq!(
        run.endpoint.flap_limit_deviation,
        Some(run.endpoint.aligned_deviation)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn path_names_round_trip(a in 1u8..=3, b in 1u8..=3, f in 0u8..5) {
        let tp = PathId::Tp(a, b);
        prop_assert_eq!(tp.to_string().parse::<PathId>().unwrap(), tp);
        let flap = PathId::F3(f);
        prop_assert_eq!(flap.to_string().parse::<PathId>().unwrap(), flap);
    }

    #[test]
    fn registration_recovers_random_similarities(
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in -3.0f64..3.0,
        scale in 0.2f64..4.0,
        shift in prop::array::uniform3(-5.0f64..5.0),
    ) {
        let axis_v = Vector3::new(axis[0], axis[1], axis[2]);
        prop_assume!(axis_v.norm() > 1e-3);
        let rot = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_normalize(axis_v),
            angle,
        );
        let shift_v = Vector3::new(shift[0], shift[1], shift[2]);
        let pts: Vec<Vector3<f64>> = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
            Vector3::new(-1.0, 2.0, 0.5),
        ];
        let images: Vec<Vector3<f64>> =
            pts.iter().map(|p| scale * (rot * p) + shift_v).collect();
        let reg = kirigami::transforms::register_points(&pts, &images, true);
        prop_assert!((reg.scale - scale).abs() < 1e-9 * scale);
        prop_assert!(reg.max_deviation < 1e-9);
    }
}
