//! End-to-end command tests: golden outputs, exit codes, dispatch
//! agreement, and generator reproducibility. Commands are driven in-process
//! through the library surface; one smoke test runs the actual binary.

use dynce_cli::commands::{
    cmd_distance, cmd_generate, cmd_kernelize, cmd_solve, cmd_verify, Algo, Family, EXIT_ERROR,
    EXIT_NO, EXIT_YES,
};
use dynce_cli::files::InstanceFile;
use dynce_core::generators::gen_random;
use dynce_core::instance::{Measure, Variant};
use std::path::{Path, PathBuf};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

/// Scratch file unique to this test process.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dynce-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Replaces the volatile runtime field textually, preserving field order.
fn zero_runtime(json: &str) -> String {
    let marker = "\"runtime_ms\": ";
    let Some(at) = json.find(marker) else {
        return json.to_string();
    };
    let digits_start = at + marker.len();
    let digits_end = digits_start
        + json[digits_start..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap();
    format!("{}0{}", &json[..digits_start], &json[digits_end..])
}

#[test]
fn solve_worked_example_matches_golden() {
    let out = cmd_solve(
        &fixture("fig1_instance.json"),
        Algo::Oracle,
        None,
        true,
        true,
    );
    assert_eq!(out.exit, EXIT_YES, "stderr: {}", out.stderr);
    assert_eq!(zero_runtime(&out.stdout), golden("fig1_result.json"));
}

#[test]
fn solve_exit_codes() {
    // Tightening the distance bound to 3 flips the worked example to no.
    let mut file: InstanceFile =
        serde_json::from_str(&std::fs::read_to_string(fixture("fig1_instance.json")).unwrap())
            .unwrap();
    file.d = 3;
    let no_path = scratch("fig1_no.json");
    std::fs::write(&no_path, serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(
        cmd_solve(&no_path, Algo::Oracle, None, false, false).exit,
        EXIT_NO
    );

    // Negative parameters are rejected at validation.
    file.d = -1;
    let bad_path = scratch("fig1_bad.json");
    std::fs::write(&bad_path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = cmd_solve(&bad_path, Algo::Oracle, None, false, false);
    assert_eq!(out.exit, EXIT_ERROR);
    assert!(out.stderr.contains("d:"), "stderr: {}", out.stderr);
    assert_eq!(cmd_kernelize(&bad_path, false).exit, EXIT_ERROR);

    // Unparsable JSON is a usage error with a location diagnostic.
    let garbled = scratch("garbled.json");
    std::fs::write(&garbled, "{\"version\": 1,").unwrap();
    let out = cmd_solve(&garbled, Algo::Oracle, None, false, false);
    assert_eq!(out.exit, EXIT_ERROR);
    assert!(out.stderr.contains("line"), "stderr: {}", out.stderr);
}

#[test]
fn empty_instance_is_yes() {
    let file = InstanceFile {
        version: 1,
        variant: "editing".into(),
        measure: "edge".into(),
        n: 0,
        g_edges: vec![],
        gc_clusters: vec![],
        k: 0,
        d: 0,
    };
    let path = scratch("empty.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    for algo in [Algo::Auto, Algo::Oracle, Algo::Combined] {
        assert_eq!(cmd_solve(&path, algo, None, false, false).exit, EXIT_YES);
    }
}

#[test]
fn distance_command() {
    let a = fixture("fig1_a.clusters.json");
    let b = fixture("fig1_b.clusters.json");
    let out = cmd_distance(&a, &b, "matching");
    assert_eq!((out.exit, out.stdout.as_str()), (EXIT_YES, "4\n"));
    let out = cmd_distance(&a, &b, "edge");
    assert_eq!((out.exit, out.stdout.as_str()), (EXIT_YES, "18\n"));
    let out = cmd_distance(&a, &a, "matching");
    assert_eq!((out.exit, out.stdout.as_str()), (EXIT_YES, "0\n"));
    assert_eq!(cmd_distance(&a, &b, "euclid").exit, EXIT_ERROR);
}

#[test]
fn verify_command() {
    // The zero-edit witness of the worked example is valid.
    let sol_path = scratch("fig1_sol.json");
    std::fs::write(
        &sol_path,
        r#"{"version":1,"clusters":[[0,1,2,3,4,5],[6,7],[8]]}"#,
    )
    .unwrap();
    let out = cmd_verify(&fixture("fig1_instance.json"), &sol_path);
    assert_eq!(out.exit, EXIT_YES, "stdout: {}", out.stdout);

    // A deletion instance whose proposed solution inserts an edge.
    let inst = InstanceFile {
        version: 1,
        variant: "deletion".into(),
        measure: "edge".into(),
        n: 3,
        g_edges: vec![[0, 1]],
        gc_clusters: vec![vec![0, 1, 2]],
        k: 3,
        d: 3,
    };
    let inst_path = scratch("del.json");
    std::fs::write(&inst_path, serde_json::to_string(&inst).unwrap()).unwrap();
    let bad_sol = scratch("del_sol.json");
    std::fs::write(&bad_sol, r#"{"version":1,"clusters":[[0,1,2]]}"#).unwrap();
    let out = cmd_verify(&inst_path, &bad_sol);
    assert_eq!(out.exit, EXIT_NO);
    assert!(
        out.stdout.contains("ForbiddenEdit"),
        "stdout: {}",
        out.stdout
    );
}

#[test]
fn generate_golden_and_reproducibility() {
    let out = cmd_generate(
        &Family::X3c {
            q: 1,
            sets: vec![[0, 1, 2], [0, 1, 2]],
        },
        None,
    );
    assert_eq!(out.exit, EXIT_YES);
    assert_eq!(out.stdout, golden("x3c_q1m2_instance.json"));
    let file: InstanceFile = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(file.n, 10);

    // Fixed seeds reproduce byte-identical files; the empty instance works.
    let random = |seed| {
        cmd_generate(
            &Family::Random {
                n: 8,
                p: 0.4,
                variant: "editing".into(),
                measure: "edge".into(),
                k: 2,
                d: 2,
                seed,
            },
            None,
        )
        .stdout
    };
    assert_eq!(random(5), random(5));
    assert_ne!(random(5), random(6));
    let empty = cmd_generate(
        &Family::Random {
            n: 0,
            p: 0.5,
            variant: "editing".into(),
            measure: "edge".into(),
            k: 0,
            d: 0,
            seed: 0,
        },
        None,
    );
    assert_eq!(empty.exit, EXIT_YES);
    let file: InstanceFile = serde_json::from_str(&empty.stdout).unwrap();
    assert_eq!(file.n, 0);

    // Malformed sources surface as usage errors.
    let bad = cmd_generate(
        &Family::X3c {
            q: 1,
            sets: vec![[0, 1, 5]],
        },
        None,
    );
    assert_eq!(bad.exit, EXIT_ERROR);
}

#[test]
fn auto_dispatch_agrees_with_oracle_on_micro_instances() {
    for trial in 0..60u64 {
        let inst = gen_random(
            (trial % 8) as usize,
            (trial % 10) as f64 / 10.0,
            Variant::ALL[trial as usize % 3],
            Measure::ALL[trial as usize % 2],
            (trial % 4) as i64,
            ((trial / 2) % 4) as i64,
            90_000 + trial,
        );
        let path = scratch(&format!("micro_{trial}.json"));
        std::fs::write(
            &path,
            serde_json::to_string(&InstanceFile::from_instance(&inst)).unwrap(),
        )
        .unwrap();
        let auto = cmd_solve(&path, Algo::Auto, None, false, false);
        let oracle = cmd_solve(&path, Algo::Oracle, None, false, false);
        assert!(auto.exit != EXIT_ERROR && oracle.exit != EXIT_ERROR);
        assert_eq!(auto.exit, oracle.exit, "auto/oracle disagree on {inst:?}");
    }
}

#[test]
fn kernelize_reports_bound_and_trace() {
    let out = cmd_kernelize(&fixture("fig1_instance.json"), true);
    assert_eq!(out.exit, EXIT_YES);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["outcome"], "reduced");
    assert_eq!(report["vertices_before"], 9);
    // Residual k = 0, d = 4 under the matching measure: bound 2*16 + 8 = 40.
    assert_eq!(report["bound"], 40);
}

#[test]
fn binary_smoke_test() {
    let bin = env!("CARGO_BIN_EXE_dynce");
    let out = std::process::Command::new(bin)
        .args([
            "solve",
            fixture("fig1_instance.json").to_str().unwrap(),
            "--algo",
            "oracle",
            "--emit-witness",
            "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_YES));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(zero_runtime(&stdout), golden("fig1_result.json"));

    // Environment variable mirrors --cap.
    let big = scratch("big.json");
    let inst = gen_random(12, 0.3, Variant::Editing, Measure::EdgeDist, 2, 2, 1);
    std::fs::write(
        &big,
        serde_json::to_string(&InstanceFile::from_instance(&inst)).unwrap(),
    )
    .unwrap();
    let refused = std::process::Command::new(bin)
        .args(["solve", big.to_str().unwrap(), "--algo", "oracle"])
        .output()
        .unwrap();
    assert_eq!(refused.status.code(), Some(EXIT_ERROR));
    let allowed = std::process::Command::new(bin)
        .args(["solve", big.to_str().unwrap(), "--algo", "oracle"])
        .env("DYNCE_ORACLE_CAP", "12")
        .output()
        .unwrap();
    assert_ne!(allowed.status.code(), Some(EXIT_ERROR));
}
