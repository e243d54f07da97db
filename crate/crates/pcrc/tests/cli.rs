use std::path::{Path, PathBuf};

use pcrc::cli::{OptimizeOutput, Remark1Output, SimulateOutput};
use pcrc_core::optimize::{Condition, Lemma5Report, OptimalityReport};
use pcrc_core::BoundKind;
use tempfile::TempDir;

const EXAMPLE: &str = r#"{"channel": {"a": 2, "b": 0.5, "p1": 6, "p2": 6, "mu": 0.5},
  "grid": {"alpha_steps": 21, "beta_steps": 21, "refine_iters": 60},
  "sim": {"samples": 50000, "seed": 7}}"#;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

struct Run {
    code: i32,
    out: String,
}

fn write_config(dir: &TempDir, text: &str) -> String {
    let path = dir.path().join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Runs the CLI with `--out` pointed into `dir`.
fn pcrc(dir: &TempDir, args: &[&str]) -> Run {
    let out = dir.path().join("out");
    let _ = std::fs::remove_file(&out);
    let mut argv = vec!["pcrc"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let code = pcrc::run(argv);
    Run {
        code,
        out: std::fs::read_to_string(&out).unwrap_or_default(),
    }
}

#[test]
fn region_matches_golden_files() {
    let dir = TempDir::new().unwrap();
    let config = golden("example_2x2.json");
    let config = config.to_str().unwrap();
    for (kind, file) in [
        ("outer", "region_outer_2x2.csv"),
        ("inner", "region_inner_2x2.csv"),
    ] {
        let run = pcrc(&dir, &["region", "--config", config, "--kind", kind]);
        assert_eq!(run.code, 0);
        assert_eq!(
            run.out,
            std::fs::read_to_string(golden(file)).unwrap(),
            "{kind}"
        );
    }
}

#[test]
fn region_json_rows_round_trip() {
    let dir = TempDir::new().unwrap();
    let config = golden("example_2x2.json");
    let run = pcrc(
        &dir,
        &[
            "region",
            "--config",
            config.to_str().unwrap(),
            "--format",
            "json",
        ],
    );
    assert_eq!(run.code, 0);
    let rows: Vec<pcrc::output::RegionRow> = serde_json::from_str(&run.out).unwrap();
    let csv_lines = std::fs::read_to_string(golden("region_outer_2x2.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows.len(), csv_lines - 1);
    assert!(rows.iter().all(|r| r.kind == BoundKind::Outer));
}

#[test]
fn optimize_reports_round_trip() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, EXAMPLE);
    let run = pcrc(&dir, &["optimize", "--config", &config]);
    assert_eq!(run.code, 0);
    let parsed: OptimizeOutput = serde_json::from_str(&run.out).unwrap();
    assert_eq!(parsed.kind, BoundKind::Outer);
    let report = parsed
        .report
        .as_ref()
        .expect("weak interference gives a report");
    assert_eq!(report.condition, Condition::Lemma6);
    assert!(report.gap >= -1e-9);
    // printed values carry 12 significant digits
    assert!((parsed.maximum.value - report.outer_value).abs() < 1e-11);
    let text = pcrc::output::to_json(&parsed).unwrap();
    assert_eq!(text, run.out);
}

#[test]
fn strong_interference_limits_outputs_to_inner() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, &EXAMPLE.replace(r#""b": 0.5"#, r#""b": 1.5"#));
    assert_eq!(pcrc(&dir, &["region", "--config", &config]).code, 2);
    assert_eq!(
        pcrc(&dir, &["optimize", "--config", &config, "--kind", "outer"]).code,
        2
    );
    assert_eq!(pcrc(&dir, &["plot", "--config", &config]).code, 2);
    assert_eq!(
        pcrc(&dir, &["region", "--config", &config, "--kind", "inner"]).code,
        0
    );
    let run = pcrc(&dir, &["optimize", "--config", &config]);
    assert_eq!(run.code, 0);
    let parsed: OptimizeOutput = serde_json::from_str(&run.out).unwrap();
    assert_eq!(parsed.kind, BoundKind::Inner);
    assert!(parsed.report.is_none());
}

#[test]
fn check_remark1_example() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, EXAMPLE);
    let run = pcrc(&dir, &["check", "--config", &config, "--remark1"]);
    assert_eq!(run.code, 0);
    let parsed: Remark1Output = serde_json::from_str(&run.out).unwrap();
    assert!((parsed.left - 4.0 / 31.0).abs() < 1e-12);
    assert!((parsed.right - 1.0 / 8.5).abs() < 1e-12);
    assert!(parsed.remark1_holds);

    let run = pcrc(
        &dir,
        &[
            "check",
            "--config",
            &config,
            "--remark1",
            "--alpha",
            "0.2",
            "--beta",
            "1",
        ],
    );
    let parsed: Remark1Output = serde_json::from_str(&run.out).unwrap();
    assert_eq!((parsed.split.alpha(), parsed.split.beta()), (0.2, 1.0));
}

#[test]
fn check_lemmas_and_preconditions() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, EXAMPLE);
    let run = pcrc(&dir, &["check", "--config", &config, "--lemma", "5"]);
    assert_eq!(run.code, 0);
    let report: Lemma5Report = serde_json::from_str(&run.out).unwrap();
    assert!(report.beta_opt_is_one && report.violation.is_none());

    let run = pcrc(&dir, &["check", "--config", &config, "--lemma", "6"]);
    assert_eq!(run.code, 0);
    let report: OptimalityReport = serde_json::from_str(&run.out).unwrap();
    assert_eq!(report.condition, Condition::Lemma6);

    // default weights (1, 1, 1) have mu0 >= mu1
    assert_eq!(
        pcrc(&dir, &["check", "--config", &config, "--lemma", "7"]).code,
        2
    );
    assert_eq!(pcrc(&dir, &["check", "--config", &config]).code, 1);
    assert_eq!(
        pcrc(&dir, &["check", "--config", &config, "--lemma", "4"]).code,
        1
    );
}

#[test]
fn simulate_writes_report() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, EXAMPLE);
    let run = pcrc(
        &dir,
        &[
            "simulate",
            "--config",
            &config,
            "--seed",
            "3",
            "--samples",
            "40000",
        ],
    );
    assert_eq!(run.code, 0, "{}", run.out);
    let parsed: SimulateOutput = serde_json::from_str(&run.out).unwrap();
    assert!(parsed.passed);
    assert_eq!((parsed.config.seed, parsed.config.samples), (3, 40000));
    assert_eq!(parsed.stats.samples, 40000);
    assert!(parsed.sinr.check("rx1_w1").is_some());
}

#[test]
fn plot_is_svg_only() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, EXAMPLE);
    let run = pcrc(&dir, &["plot", "--config", &config]);
    assert_eq!(run.code, 0);
    assert!(run.out.starts_with("<svg") && run.out.contains("outer") && run.out.contains("inner"));
    assert!(run.out.len() < 1 << 20);
    assert_eq!(
        pcrc(&dir, &["plot", "--config", &config, "--format", "csv"]).code,
        1
    );
}

#[test]
fn config_and_io_failures() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(
        pcrc(&dir, &["region", "--config", missing.to_str().unwrap()]).code,
        1
    );

    let config = write_config(
        &dir,
        &EXAMPLE.replace(r#""mu": 0.5"#, r#""mu": 0.5, "nu": 1"#),
    );
    assert_eq!(pcrc(&dir, &["region", "--config", &config]).code, 1);

    let config = write_config(&dir, EXAMPLE);
    assert_eq!(
        pcrc(&dir, &["region", "--config", &config, "--alpha", "1.5"]).code,
        1
    );
    assert_eq!(
        pcrc(&dir, &["simulate", "--config", &config, "--samples", "0"]).code,
        1
    );

    let unwritable = dir.path().join("missing-dir").join("out.csv");
    let code = pcrc::run([
        "pcrc",
        "region",
        "--config",
        &config,
        "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(pcrc::run(["pcrc", "--help"]), 0);
    assert_eq!(pcrc::run(["pcrc", "--version"]), 0);
    assert_eq!(pcrc::run(["pcrc"]), 1);
    assert_eq!(pcrc::run(["pcrc", "frobnicate"]), 1);
    assert_eq!(pcrc::run(["pcrc", "region"]), 1);
}
