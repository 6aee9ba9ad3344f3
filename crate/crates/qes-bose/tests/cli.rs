//! End-to-end CLI coverage beyond the acceptance goldens: flag handling,
//! artifact layout, the dimension-cap override, and the exit-code
//! contract on each command.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qes-bose")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qes-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn spectrum_without_out_streams_csv() {
    let out = run(&[
        "spectrum",
        "--config",
        &data("harmonic.json"),
        "--sector",
        "even",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("index,eigenvalue,residual\n"));
    assert!(stdout.contains("\n0,0.0000000000000000e0,"));
    assert!(stdout.contains("\n1,2.0000000000000000e0,"));
}

#[test]
fn spectrum_writes_csv_and_json_siblings() {
    let dir = workdir("artifacts");
    let csv = dir.join("levels.csv");
    let out = run(&[
        "spectrum",
        "--config",
        &data("four_level.json"),
        "--sector",
        "both",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(csv.exists());
    let json = std::fs::read_to_string(dir.join("levels.json")).unwrap();
    assert!(json.contains("\"label\": \"even\""));
    assert!(json.contains("\"label\": \"odd\""));
    assert!(json.contains("vectors_fock"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn conditions_prints_the_four_level_ray() {
    let out = run(&[
        "conditions",
        "--config",
        &data("four_level.json"),
        "--sector",
        "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("nullspace vector: (6, -5, 1)"), "{stdout}");
    assert!(stdout.contains("feasible"));
}

#[test]
fn conditions_json_report_shape() {
    let dir = workdir("conditions");
    let path = dir.join("report.json");
    let out = run(&[
        "conditions",
        "--config",
        &data("four_level.json"),
        "--sector",
        "both",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["n1"], 1);
    assert_eq!(report["n2"], 3);
    assert_eq!(report["feasible"], true);
    assert_eq!(report["rank"], 2);
    assert_eq!(report["nullspace"][0][0], "6");
    assert_eq!(report["nullspace"][0][1], "-5");
    assert_eq!(report["nullspace"][0][2], "1");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn oracle_reports_and_exits_zero_on_certification() {
    let out = run(&[
        "oracle",
        "--config",
        &data("four_level.json"),
        "--sector",
        "both",
        "--n-max",
        "14",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("sector even"));
    assert!(stdout.contains("sector odd"));
    assert!(!stdout.contains("UNMATCHED"));
}

#[test]
fn scan_produces_csv_and_svg_polylines() {
    let dir = workdir("scan");
    let csv = dir.join("scan.csv");
    let svg = dir.join("scan.svg");
    let config = dir.join("scan.json");
    std::fs::write(
        &config,
        r#"{
            "spec": {
                "eps": ["1"],
                "A": [ {"s":0,"value":"-2"}, {"s":1,"value":"-1"}, {"s":2,"value":"1"} ],
                "q": 2
            },
            "even_top": 1,
            "scan": { "coefficient": "A[2,1]", "from": "0", "to": "1", "steps": 11 }
        }"#,
    )
    .unwrap();
    let out = run(&[
        "scan",
        "--config",
        config.to_str().unwrap(),
        "--sector",
        "even",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = csv_text.lines().collect();
    assert_eq!(lines.len(), 12); // header + 11 steps
    assert_eq!(lines[0], "value,E0,E1");
    // at A2 = 0 the couplings vanish: harmonic levels {0, 2}
    assert!(lines[1].starts_with("0,0.0000000000000000e0,2.0000000000000000e0"));
    // levels follow 1 ± √(1 + 8·A2²) along the ray
    let last: Vec<&str> = lines[11].split(',').collect();
    assert_eq!(last[0], "1");
    let e0: f64 = last[1].parse().unwrap();
    let e1: f64 = last[2].parse().unwrap();
    assert!((e0 - (1.0 - 3.0)).abs() < 1e-10);
    assert!((e1 - (1.0 + 3.0)).abs() < 1e-10);
    // one polyline per level
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<polyline").count(), 2);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn degenerate_scan_range_repeats_rows() {
    let dir = workdir("scan-flat");
    let config = dir.join("flat.json");
    std::fs::write(
        &config,
        r#"{
            "spec": {
                "eps": ["1"],
                "A": [ {"s":0,"value":"-2"}, {"s":1,"value":"-1"}, {"s":2,"value":"1"} ],
                "q": 2
            },
            "even_top": 1,
            "scan": { "coefficient": "A[2,1]", "from": "0", "to": "0", "steps": 2 }
        }"#,
    )
    .unwrap();
    let out = run(&[
        "scan",
        "--config",
        config.to_str().unwrap(),
        "--sector",
        "even",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], lines[2]);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn scan_rejects_infeasible_shape_with_exit_2() {
    let dir = workdir("scan-infeasible");
    let config = dir.join("flat.json");
    // s0 = 0, k0 = 1: n2 = n1 = 1, not quasi-exactly solvable
    std::fs::write(
        &config,
        r#"{
            "spec": { "eps": ["1"], "A": [ {"s":0,"value":"0"} ], "q": 2 },
            "even_top": 1,
            "scan": { "coefficient": "eps[1]", "from": "1", "to": "2", "steps": 3 }
        }"#,
    )
    .unwrap();
    let out = run(&[
        "scan",
        "--config",
        config.to_str().unwrap(),
        "--sector",
        "even",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("cannot be quasi-exactly solvable"),
        "{stderr}"
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn multimode_runs_from_config() {
    let dir = workdir("multimode");
    let config = dir.join("pair.json");
    std::fs::write(
        &config,
        r#"{
            "modes": [
                {"specs": [
                    {"eps":["1"],"A":[{"s":0,"value":"-2"},{"s":1,"value":"0"},{"s":2,"value":"1/2"}],"q":2},
                    "identity"
                ], "sector": {"r":0,"top":1}},
                {"specs": [ {"eps":["1"],"q":2}, "identity" ], "sector": {"r":0,"top":1}}
            ],
            "terms": [[0, 1, "1"], [1, 0, "1"]]
        }"#,
    )
    .unwrap();
    let out = run(&["multimode", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let levels: Vec<f64> = stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    for (got, want) in levels.iter().zip([-2.0, 0.0, 4.0, 6.0]) {
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn dimension_cap_env_override() {
    let dir = workdir("cap");
    let config = dir.join("wide.json");
    std::fs::write(
        &config,
        r#"{ "spec": { "eps": ["1"], "A": [], "q": 2 }, "even_top": 9 }"#,
    )
    .unwrap();
    let too_small = Command::new(bin())
        .args([
            "spectrum",
            "--config",
            config.to_str().unwrap(),
            "--sector",
            "even",
        ])
        .env("QES_BOSE_MAX_DIM", "5")
        .output()
        .unwrap();
    assert_eq!(too_small.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&too_small.stderr).contains("exceeds cap 5"));
    let raised = Command::new(bin())
        .args([
            "spectrum",
            "--config",
            config.to_str().unwrap(),
            "--sector",
            "even",
        ])
        .env("QES_BOSE_MAX_DIM", "32")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
    let junk = Command::new(bin())
        .args([
            "spectrum",
            "--config",
            config.to_str().unwrap(),
            "--sector",
            "even",
        ])
        .env("QES_BOSE_MAX_DIM", "zero")
        .output()
        .unwrap();
    assert_eq!(junk.status.code(), Some(1));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn coefficient_overflow_degrades_cleanly() {
    let dir = workdir("overflow");
    let config = dir.join("huge.json");
    std::fs::write(
        &config,
        r#"{ "spec": { "eps": ["1e308"], "A": [], "q": 2 }, "even_top": 1 }"#,
    )
    .unwrap();
    let out = run(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--sector",
        "even",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overflow the double range"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["spectrum"]);
    assert_eq!(out.status.code(), Some(1)); // missing --config
    let out = run(&["frobnicate", "--config", &data("harmonic.json")]);
    assert_eq!(out.status.code(), Some(1)); // unknown command
    let out = run(&[
        "spectrum",
        "--config",
        &data("harmonic.json"),
        "--sector",
        "sideways",
    ]);
    assert_eq!(out.status.code(), Some(1)); // bad flag value
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validate_exit_codes_by_status() {
    let dir = workdir("validate");
    let well = dir.join("well.json");
    std::fs::write(
        &well,
        r#"{
            "spec": {
                "eps": ["0","0","0","0","1"],
                "A": [ {"s":0,"value":"1"}, {"s":1,"value":"0"}, {"s":2,"value":"1"} ],
                "q": 2
            },
            "even_top": 1
        }"#,
    )
    .unwrap();
    let out = run(&["validate", "--config", well.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("WellDefined"));

    let ill = run(&["validate", "--config", &data("four_level.json")]);
    assert_eq!(ill.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ill.stdout).contains("ill-defined ground state"));
    std::fs::remove_dir_all(dir).ok();
}
