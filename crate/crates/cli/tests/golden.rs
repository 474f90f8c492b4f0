//! Every subcommand against checked-in inputs and expected reports.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_hyperideal");

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    code: i32,
}

const CASES: &[Case] = &[
    Case {
        name: "validate_cube",
        args: &["validate", "cube.json"],
        code: 0,
    },
    Case {
        name: "validate_flipped",
        args: &["validate", "cube_flipped.json"],
        code: 1,
    },
    Case {
        name: "dual_cube",
        args: &["dual", "cube.json"],
        code: 0,
    },
    Case {
        name: "dual_ideal_tetrahedron",
        args: &["dual", "ideal_tetrahedron.json"],
        code: 0,
    },
    Case {
        name: "dual_needs_truncation",
        args: &["dual", "mixed_tetrahedron.json"],
        code: 1,
    },
    Case {
        name: "truncate_mixed",
        args: &["truncate", "mixed_tetrahedron.json"],
        code: 0,
    },
    Case {
        name: "untruncate_mixed",
        args: &["untruncate", "mixed_truncation.json"],
        code: 0,
    },
    Case {
        name: "untruncate_cube",
        args: &["untruncate", "cube_as_truncation.json"],
        code: 1,
    },
    Case {
        name: "angles_cube",
        args: &["angles", "cube.json"],
        code: 0,
    },
    Case {
        name: "angles_mixed",
        args: &["angles", "mixed_tetrahedron.json"],
        code: 0,
    },
    Case {
        name: "check_ideal",
        args: &["check-angles", "tetra_ideal_graph.json"],
        code: 0,
    },
    Case {
        name: "check_light",
        args: &["check-angles", "tetra_light_graph.json"],
        code: 1,
    },
    Case {
        name: "check_pyramid",
        args: &["check-angles", "pyramid_graph.json"],
        code: 1,
    },
    Case {
        name: "check_near",
        args: &["check-angles", "tetra_near_graph.json"],
        code: 1,
    },
    Case {
        name: "check_near_narrow_band",
        args: &["check-angles", "tetra_near_graph.json", "--tol-eq", "1e-9"],
        code: 0,
    },
    Case {
        name: "metric_hyperideal",
        args: &["metric", "tetra_hyperideal_graph.json"],
        code: 0,
    },
    Case {
        name: "metric_light",
        args: &["metric", "tetra_light_graph.json"],
        code: 1,
    },
    Case {
        name: "search_ideal",
        args: &[
            "geodesic-search",
            "tetra_ideal_graph.json",
            "--budget-shots",
            "500",
        ],
        code: 0,
    },
    Case {
        name: "search_pyramid",
        args: &[
            "geodesic-search",
            "pyramid_graph.json",
            "--budget-shots",
            "500",
            "--budget-depth",
            "8",
            "--seed",
            "3",
        ],
        code: 1,
    },
    Case {
        name: "selftest",
        args: &["pogorelov-selftest", "--samples", "20", "--seed", "1"],
        code: 0,
    },
    Case {
        name: "obj_mixed",
        args: &["export-obj", "mixed_tetrahedron.json"],
        code: 0,
    },
    Case {
        name: "obj_ideal",
        args: &["export-obj", "ideal_tetrahedron.json"],
        code: 0,
    },
];

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN)
        .args(args)
        .current_dir(dir())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for case in CASES {
        let (code, stdout, stderr) = run(case.args);
        assert_eq!(code, case.code, "{}: exit code, stderr {stderr}", case.name);
        let ext = if case.args[0] == "export-obj" {
            "obj"
        } else {
            "json"
        };
        let path = dir().join("expected").join(format!("{}.{ext}", case.name));
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &stdout).unwrap();
            continue;
        }
        let expected =
            std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        if expected != stdout {
            mismatched.push(case.name);
        }
    }
    assert!(
        mismatched.is_empty(),
        "reports differ from golden files: {mismatched:?}"
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &[
            "geodesic-search",
            "pyramid_graph.json",
            "--budget-shots",
            "500",
        ][..],
        &["pogorelov-selftest", "--samples", "10", "--seed", "9"][..],
    ] {
        assert_eq!(run(args).1, run(args).1);
    }
}

#[test]
fn malformed_input_exits_with_two() {
    let (code, stdout, stderr) = run(&["validate", "malformed.json"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("malformed input"));
    let (code, _, stderr) = run(&["check-angles", "missing.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("cannot read"));
    // A polyhedron file is not a graph file.
    assert_eq!(run(&["check-angles", "cube.json"]).0, 2);
}

#[test]
fn ideal_tetrahedron_report_names_all_faces_ideal() {
    let (_, stdout, _) = run(&["check-angles", "tetra_ideal_graph.json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(
        r["payload"]["c1"]["ideal_faces"],
        serde_json::json!([0, 1, 2, 3])
    );
}

#[test]
fn cube_dual_is_octahedral() {
    let (_, stdout, _) = run(&["dual", "cube.json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["payload"]["dual_vertices"], 6);
    assert_eq!(r["payload"]["dual_faces"], 8);
    for f in r["payload"]["dual"]["faces"].as_array().unwrap() {
        assert_eq!(f.as_array().unwrap().len(), 3);
    }
}

#[test]
fn flipped_cube_reports_convexity() {
    let (_, stdout, _) = run(&["validate", "cube_flipped.json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let items = r["verdicts"][0]["items"].as_array().unwrap();
    assert!(items.iter().any(|i| i["check"] == "convexity"));
}

#[test]
fn out_flag_writes_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("report.json");
    let (code, stdout, _) = run(&[
        "truncate",
        "mixed_tetrahedron.json",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written, run(&["truncate", "mixed_tetrahedron.json"]).1);
}

#[test]
fn truncation_output_untruncates() {
    let tmp = tempfile::tempdir().unwrap();
    let (_, stdout, _) = run(&["truncate", "mixed_tetrahedron.json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let file = tmp.path().join("t.json");
    std::fs::write(&file, r["payload"].to_string()).unwrap();
    let (code, stdout, _) = run(&["untruncate", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let back: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let original: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir().join("mixed_tetrahedron.json")).unwrap(),
    )
    .unwrap();
    let planes = |v: &serde_json::Value| -> Vec<f64> {
        v.as_array()
            .unwrap()
            .iter()
            .flat_map(|p| p.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
            .collect()
    };
    let a = planes(&back["payload"]["planes"]);
    let b = planes(&original["planes"]);
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
}
