use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bubblelab::cli::{EXIT_COMPUTATION, EXIT_CONFIG, EXIT_INGESTION};

fn bubblelab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bubblelab"))
        .current_dir(dir)
        .env_remove("BUBBLELAB_OUTDIR")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_series(path: &Path, values: &[f64]) {
    let mut s = String::from("t,price\n");
    for (t, v) in values.iter().enumerate() {
        s.push_str(&format!("{t},{v}\n"));
    }
    fs::write(path, s).unwrap();
}

fn feedback_prices() -> Vec<f64> {
    let mut v = vec![60.0];
    for _ in 0..23 {
        let p: f64 = *v.last().unwrap();
        v.push(p * (1.09f64.ln() + 1e-4 * p).exp());
    }
    v.into_iter().map(|e| e + 60.0).collect()
}

#[test]
fn table2_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = bubblelab(dir.path(), &["table2"]);
    assert!(out.status.success());
    let golden = include_str!("../fixtures/table2.csv");
    assert_eq!(stdout(&out), golden);

    let short = stdout(&bubblelab(dir.path(), &["table2", "--steps", "5"]));
    assert_eq!(short.lines().count(), 7);
    assert!(golden.starts_with(&short));

    let flat = stdout(&bubblelab(
        dir.path(),
        &["table2", "--b2", "0", "--a2", &1.1f64.ln().to_string()],
    ));
    for line in flat.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!((f[1], f[2]), (f[3], f[4]));
    }
}

#[test]
fn simulate_fundamentalists_and_presets() {
    let dir = tempfile::tempdir().unwrap();
    let out = bubblelab(
        dir.path(),
        &[
            "--outdir",
            "o",
            "simulate",
            "--preset",
            "fundamentalists",
            "--horizon",
            "50",
        ],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("o/simulated.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("60")));
    assert!(dir.path().join("o/simulated.json").is_file());

    let a = bubblelab(dir.path(), &["--outdir", "a", "--seed", "5", "simulate"]);
    let b = bubblelab(dir.path(), &["--outdir", "b", "--seed", "5", "simulate"]);
    assert!(a.status.success() && b.status.success());
    for f in ["simulated.csv", "simulated.json"] {
        assert_eq!(
            fs::read(dir.path().join("a").join(f)).unwrap(),
            fs::read(dir.path().join("b").join(f)).unwrap()
        );
    }

    let bad = bubblelab(dir.path(), &["simulate", "--horizon", "0"]);
    assert_eq!(bad.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn pipeline_is_closed_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run_all = |out: &str| {
        for sub in [
            vec![
                "--seed",
                "8",
                "--outdir",
                out,
                "simulate",
                "--horizon",
                "30",
            ],
            vec![
                "--input",
                &format!("{out}/simulated.csv"),
                "--outdir",
                out,
                "sweep",
            ],
            vec![
                "--input",
                &format!("{out}/simulated.csv"),
                "--outdir",
                out,
                "classify",
            ],
            vec![
                "--input",
                &format!("{out}/simulated.csv"),
                "--outdir",
                out,
                "plotdata",
            ],
        ] {
            let o = bubblelab(d, &sub);
            assert!(
                o.status.success(),
                "{sub:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
        }
    };
    run_all("x");
    run_all("y");
    for f in [
        "simulated.csv",
        "price_grid.csv",
        "return_grid.csv",
        "sweep_summary.json",
        "verdict.json",
        "prices_forecasts.csv",
        "return_scatter.csv",
    ] {
        assert_eq!(
            fs::read(d.join("x").join(f)).unwrap(),
            fs::read(d.join("y").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_series(&d.join("fb.csv"), &feedback_prices());
    let o = bubblelab(d, &["--input", "fb.csv", "sweep"]);
    assert!(o.status.success());
    let grid = fs::read_to_string(d.join("price_grid.csv")).unwrap();
    let mut valid = 0;
    for line in grid.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[11], "true");
        assert!(f[4].parse::<f64>().unwrap() > 0.0);
        valid += 1;
    }
    assert_eq!(valid, 210);

    write_series(&d.join("flat.csv"), &[60.0; 20]);
    assert!(
        bubblelab(d, &["--input", "flat.csv", "--outdir", "flat", "sweep"])
            .status
            .success()
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("flat/sweep_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["price"]["summary"]["valid"], 0);
    assert!(summary["price"]["significant_fraction"].is_null());
    assert_eq!(summary["price"]["invalid"]["NonPositiveExcess"], 136);

    let missing = bubblelab(d, &["--input", "missing.csv", "sweep"]);
    assert_eq!(missing.status.code(), Some(EXIT_INGESTION));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.csv"));
}

#[test]
fn classify_labels() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_series(&d.join("fb.csv"), &feedback_prices());
    let o = bubblelab(d, &["--input", "fb.csv", "classify"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("anchoring on price"));
    let verdict: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["label"], "anchoring_on_price");

    let exp: Vec<f64> = (0..20).map(|t| 60.0 + 5.0 * 1.05f64.powi(t)).collect();
    write_series(&d.join("exp.csv"), &exp);
    let o = bubblelab(d, &["--input", "exp.csv", "classify"]);
    assert!(stdout(&o).starts_with("rational"), "{}", stdout(&o));

    write_series(&d.join("flat.csv"), &[60.0; 20]);
    let o = bubblelab(d, &["--input", "flat.csv", "classify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("erratic"));

    let o = bubblelab(d, &["--input", "exp.csv", "classify", "--window", "2:15"]);
    assert!(stdout(&o).contains("window 2..15"));
}

#[test]
fn plotdata_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_series(&d.join("fb.csv"), &feedback_prices());
    let o = bubblelab(d, &["--input", "fb.csv", "plotdata", "--basis", "excess"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("notice"));
    assert!(!d.join("prices_forecasts.csv").exists());
    assert!(d.join("price_grid.csv").exists() && d.join("return_grid.csv").exists());
    let scatter = fs::read_to_string(d.join("return_scatter.csv")).unwrap();
    assert_eq!(
        scatter.lines().next(),
        Some("t,r_t,r_next,diagonal,above_diagonal")
    );
    for line in scatter.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(f[2] > f[3]);
        assert!(f[4] > 0.0);
    }
}

#[test]
fn config_file_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("run.conf"), "steps = 3\noutdir = cfgout\n").unwrap();
    let o = bubblelab(d, &["--config", "run.conf", "table2"]);
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = bubblelab(d, &["--config", "run.conf", "table2", "--steps", "4"]);
    assert_eq!(stdout(&o).lines().count(), 6);

    fs::write(d.join("bad.conf"), "theta=lots\n").unwrap();
    assert_eq!(
        bubblelab(d, &["--config", "bad.conf", "table2"])
            .status
            .code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(
        bubblelab(d, &["--params", "r=-1", "table2"]).status.code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(
        bubblelab(d, &["--confidence", "both", "table2"])
            .status
            .code(),
        Some(EXIT_CONFIG)
    );

    fs::write(d.join("gap.csv"), "t,price\n0,60\n1,61\n3,62\n").unwrap();
    let o = bubblelab(d, &["--input", "gap.csv", "classify"]);
    assert_eq!(o.status.code(), Some(EXIT_INGESTION));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let o = bubblelab(d, &["table2", "--a2", "5", "--b2", "1"]);
    assert_eq!(o.status.code(), Some(EXIT_COMPUTATION));

    let o = Command::new(env!("CARGO_BIN_EXE_bubblelab"))
        .current_dir(d)
        .env("BUBBLELAB_OUTDIR", "envout")
        .args(["simulate", "--horizon", "5"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(d.join("envout/simulated.csv").is_file());
}
