use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use approx::assert_relative_eq;
use meshreg::io::{parse_mesh, write_mesh};
use meshreg_core::Mesh;
use proptest::prelude::*;
use serde_json::Value;

fn testdata(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meshreg")).args(args).output().unwrap()
}

fn td(name: &str) -> String {
    testdata(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn check_writes_report_file_and_stdout_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_str = path.to_str().unwrap();
    let mesh = td("corner_tet.json");
    let to_file = run(&["check", &mesh, "--alpha0", "0.7", "-o", path_str]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let to_stdout = run(&["check", &mesh, "--alpha0", "0.7", "-o", "-"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn corner_report_values() {
    let out = run(&["check", &td("corner_tet.json"), "--alpha0", "0.7", "--dsine-min", "0.6"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let agg = &report["aggregates"];
    assert_relative_eq!(agg["min_dihedral_rad"].as_f64().unwrap(), std::f64::consts::FRAC_PI_4, epsilon = 1e-12);
    assert_relative_eq!(agg["min_dsine"].as_f64().unwrap(), 1.0 / 3f64.sqrt(), epsilon = 1e-12);
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert_eq!(verdicts[0]["condition"], "minimum_dihedral_angle");
    assert_eq!(verdicts[0]["satisfied"], true);
    assert_eq!(verdicts[1]["condition"], "generalized_dsine");
    assert_eq!(verdicts[1]["satisfied"], false);
}

#[test]
fn degrees_annotate_reports() {
    let out = run(&["check", &td("regular_tet.json"), "--alpha0", "59", "--degrees"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let v = &report["verdicts"][0];
    assert_relative_eq!(v["threshold_deg"].as_f64().unwrap(), 59.0, epsilon = 1e-12);
    assert_relative_eq!(v["threshold"].as_f64().unwrap(), 59f64.to_radians(), epsilon = 1e-15);
    assert_relative_eq!(report["aggregates"]["min_dihedral_deg"].as_f64().unwrap(), 60.0, epsilon = 1e-9);

    let plain = json(&run(&["check", &td("regular_tet.json"), "--alpha0", "1.0"]));
    assert!(plain["aggregates"].get("min_dihedral_deg").is_none());
}

#[test]
fn degenerate_cell_is_reported_not_fatal() {
    let out = run(&["check", &td("degenerate_pair.json"), "--alpha0", "0.1"]);
    assert_eq!(out.status.code(), Some(3));
    let report = json(&out);
    assert!(report["cells"][0]["min_dsine"].is_f64());
    assert!(report["cells"][1]["min_dsine"].is_null());
    assert_eq!(report["cells"][1]["degenerate_vertices"], serde_json::json!([0, 1, 2]));
    assert_eq!(report["verdicts"][0]["degenerate_cells"], serde_json::json!([1]));
    assert_eq!(report["verdicts"][0]["satisfied"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"ambient_dimension\": 2,\n \"vertices\": [[0, 0], [1]],\n \"cells\": [[0, 1, 2]]}").unwrap();
    let out = run(&["check", bad.to_str().unwrap(), "--alpha0", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // no thresholds
    assert_eq!(run(&["check", &td("regular_tet.json")]).status.code(), Some(2));
    // unknown subcommand
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // flatten without its parameter
    assert_eq!(run(&["generate", "--kind", "flatten", "--dim", "3"]).status.code(), Some(2));
    // parameter outside (0, 1]
    assert_eq!(
        run(&["generate", "--kind", "flatten", "--dim", "3", "--param", "1.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn audit_regular_tet_margins() {
    let out = run(&["audit", &td("regular_tet.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let cell = &report["audit"]["cells"][0];
    assert_relative_eq!(cell["backward_margin"].as_f64().unwrap(), 0.12028, epsilon = 1e-4);
    assert_relative_eq!(cell["certified_bound"].as_f64().unwrap(), 0.75f64.sqrt().powi(3), epsilon = 1e-12);
    assert!(cell["forward_margin"].as_f64().unwrap() >= -1e-9);
    assert_eq!(report["audit"]["margins_hold"], true);
}

#[test]
fn family_report_tracks_worst_mesh() {
    let out = run(&["family", &td("family_flatten.json"), "--alpha0", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["meshes"].as_array().unwrap().len(), 3);
    assert_eq!(report["verdicts"][0]["worst_mesh"], 2);
    let trend = report["trend"].as_array().unwrap();
    let dihedral: Vec<f64> = trend.iter().map(|r| r["min_dihedral_rad"].as_f64().unwrap()).collect();
    assert!(dihedral.windows(2).all(|w| w[1] < w[0]), "{dihedral:?}");
}

#[test]
fn generated_mesh_feeds_back_into_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("needle.json");
    let gen = run(&["generate", "--kind", "needle", "--dim", "3", "--param", "0.01", "-o", path.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    let out = run(&["check", path.to_str().unwrap(), "--dsine-min", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn info_lists_cell_table() {
    let out = run(&["info", &td("regular_tet.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ambient dimension: 3"));
    assert!(text.contains("1.0471976"));
    assert!(text.contains("0.7698004"));
    assert!(text.contains("0.2041241"));
}

fn mesh_strategy() -> impl Strategy<Value = Mesh> {
    (2usize..5).prop_flat_map(|d| {
        prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), d), d + 1..d + 4)
            .prop_map(move |verts| {
                let cell: Vec<usize> = (0..=d).collect();
                Mesh::new(d, verts, vec![cell]).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn mesh_io_round_trip_is_bit_exact(mesh in mesh_strategy()) {
        let mut first = Vec::new();
        write_mesh(&mesh, &mut first).unwrap();
        let back = parse_mesh(&first).unwrap();
        let mut second = Vec::new();
        write_mesh(&back, &mut second).unwrap();
        prop_assert_eq!(&first, &second);
        for (a, b) in back.vertices().flatten().zip(mesh.vertices().flatten()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
