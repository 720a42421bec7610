use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qsl_core::models::{analytic_quantities, ModelParams};
use serde_json::Value;

const HALF_PI: &str = "1.5707963267948966";

fn qsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsl"))
        .args(args)
        .output()
        .expect("spawn qsl")
}

fn ok(args: &[&str]) -> String {
    let out = qsl(args);
    assert!(
        out.status.success(),
        "qsl {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn write_json(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn zero2() -> Value {
    serde_json::json!([[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]])
}

#[test]
fn simulate_dephasing_rows() {
    let text = ok(&[
        "simulate",
        "--model",
        "dephasing",
        "--gamma",
        "2",
        "--theta",
        HALF_PI,
        "--T",
        "1",
        "--steps",
        "512",
    ]);
    let (header, rows) = table(&text);
    assert_eq!(
        header,
        ["t", "S", "I", "C", "purity", "pop0", "coh_re", "coh_im"]
    );
    assert_eq!(rows.len(), 513);
    let c = column(&header, &rows, "C");
    assert!((c[0] - 2f64.ln()).abs() < 1e-12);
    assert!(c.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(!text.contains("-0.00000000000e0"));
}

#[test]
fn zero_generator_is_stationary() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_json(
        dir.path(),
        "zero.json",
        &serde_json::json!({
            "dim": 2,
            "hamiltonian": zero2(),
            "jumps": [],
            "rho0": [[[0.7, 0.0], [0.1, 0.2]], [[0.1, -0.2], [0.3, 0.0]]]
        }),
    );
    let text = ok(&[
        "simulate",
        "--lindbladian",
        &file,
        "--T",
        "2",
        "--steps",
        "64",
        "--format",
        "json",
    ]);
    let rows: Vec<Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 65);
    for key in ["S", "I", "C", "purity", "pop0", "coh_re", "coh_im"] {
        let first = rows[0][key].as_f64().unwrap();
        assert!(
            rows.iter()
                .all(|r| (r[key].as_f64().unwrap() - first).abs() < 1e-13),
            "{key}"
        );
    }
}

#[test]
fn thermalization_information_matches_closed_form() {
    let text = ok(&[
        "simulate",
        "--model",
        "thermalization",
        "--gamma0",
        "1",
        "--N",
        "0.5",
        "--theta",
        "1",
        "--T",
        "1",
    ]);
    let (header, rows) = table(&text);
    let p = ModelParams::thermalization(1.0, 0.5, 1.0).unwrap();
    let t = column(&header, &rows, "t");
    let info = column(&header, &rows, "I");
    for (k, (&t, &i)) in t.iter().zip(&info).enumerate().step_by(64) {
        let exact = analytic_quantities(&p, t)
            .unwrap()
            .get("information")
            .unwrap();
        assert!((i - exact).abs() < 1e-6, "row {k}: {i} vs {exact}");
    }
}

#[test]
fn bounds_json_lists_every_kind() {
    let text = ok(&[
        "bounds",
        "--model",
        "dissipative",
        "--gamma",
        "1",
        "--theta",
        "1",
        "--T",
        "0.8",
    ]);
    let reports: Vec<Value> = serde_json::from_str(&text).unwrap();
    let kinds: Vec<&str> = reports
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(
        kinds,
        [
            "esl",
            "isl",
            "csl",
            "erasure",
            "action_s",
            "action_i",
            "action_c",
            "info_rate"
        ]
    );
    for r in &reports {
        assert_eq!(r["horizon_T"].as_f64().unwrap(), 0.8);
        let slack = r["slack"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&slack), "{}: {slack}", r["kind"]);
    }
}

#[test]
fn unitary_generator_bounds_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_json(
        dir.path(),
        "unitary.json",
        &serde_json::json!({
            "dim": 2,
            "hamiltonian": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
            "jumps": [],
            "rho0": [[[0.8, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.2, 0.0]]]
        }),
    );
    let text = ok(&[
        "bounds",
        "--lindbladian",
        &file,
        "--T",
        "1",
        "--steps",
        "256",
    ]);
    let reports: Vec<Value> = serde_json::from_str(&text).unwrap();
    for kind in ["esl", "isl"] {
        let r = reports.iter().find(|r| r["kind"] == kind).unwrap();
        assert_eq!(r["bound_value"].as_f64().unwrap(), 0.0, "{kind}");
    }
}

#[test]
fn dephasing_coherence_bound_has_no_diagonal_speed() {
    let text = ok(&[
        "bounds",
        "--model",
        "dephasing",
        "--gamma",
        "2",
        "--theta",
        "1",
        "--T",
        "0.5",
        "--format",
        "csv",
    ]);
    let (header, rows) = table(&text);
    let csl = rows.iter().find(|r| r[0] == "csl").unwrap();
    let i = header.iter().position(|h| h == "lambda_rms_d").unwrap();
    assert!(csl[i].parse::<f64>().unwrap().abs() < 1e-12);
}

#[test]
fn thermalization_information_bound_holds() {
    let text = ok(&[
        "bounds",
        "--model",
        "thermalization",
        "--gamma0",
        "1",
        "--N",
        "0.5",
        "--theta",
        "1",
        "--T",
        "0.8",
    ]);
    let reports: Vec<Value> = serde_json::from_str(&text).unwrap();
    let isl = reports.iter().find(|r| r["kind"] == "isl").unwrap();
    let slack = isl["slack"].as_f64().unwrap();
    assert!(slack > 0.0 && slack < 1.0, "{slack}");
}

fn reproduce(fig: &str, extra: &[&str]) -> (tempfile::TempDir, Vec<String>, Vec<Vec<String>>) {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "reproduce",
        fig,
        "--steps",
        "1024",
        "--out",
        dir.path().to_str().unwrap(),
    ];
    args.extend(extra);
    ok(&args);
    assert!(dir.path().join(format!("{fig}.svg")).exists());
    let text = fs::read_to_string(dir.path().join(format!("{fig}.csv"))).unwrap();
    let (h, r) = table(&text);
    (dir, h, r)
}

#[test]
fn reproduce_figures() {
    let (_d, header, rows) = reproduce("fig1", &[]);
    assert_eq!(header, ["T", "bound"]);
    assert_eq!(rows.len(), 60);
    for (t, b) in column(&header, &rows, "T")
        .iter()
        .zip(column(&header, &rows, "bound"))
    {
        assert!(b > 0.0 && b < *t);
    }
    for fig in ["fig2", "fig3"] {
        let (_d, header, rows) = reproduce(fig, &[]);
        assert_eq!(header, ["T", "bound", "theta"]);
        assert_eq!(rows.len(), 180);
        for (t, b) in column(&header, &rows, "T")
            .iter()
            .zip(column(&header, &rows, "bound"))
        {
            assert!(b >= 0.0 && b < *t, "{fig} T={t} bound={b}");
        }
    }
    let (_d, header, _) = reproduce("fig1", &["--t-min", "0.1"]);
    assert_eq!(header, ["T", "bound", "regularized"]);
}

#[test]
fn single_point_sweep_matches_bounds() {
    let common = [
        "--model",
        "dissipative",
        "--gamma",
        "1.5",
        "--theta",
        "0.7",
        "--steps",
        "1024",
    ];
    let mut args = vec!["sweep"];
    args.extend(common);
    args.extend(["--grid", "T=0.6"]);
    let (header, rows) = table(&ok(&args));
    assert_eq!(rows.len(), 1);
    let mut args = vec!["bounds"];
    args.extend(common);
    args.extend(["--T", "0.6"]);
    let reports: Vec<Value> = serde_json::from_str(&ok(&args)).unwrap();
    for r in &reports {
        let kind = r["kind"].as_str().unwrap();
        let swept = column(&header, &rows, kind)[0];
        let direct = r["bound_value"].as_f64().unwrap();
        assert!(
            (swept - direct).abs() <= 1e-10 * direct.abs().max(1e-300),
            "{kind}"
        );
    }
}

#[test]
fn theta_sweep_matches_figure() {
    let (_d, fh, frows) = reproduce("fig2", &[]);
    let ft = column(&fh, &frows, "T");
    let fb = column(&fh, &frows, "bound");
    // first curve is theta = pi/2; pick a few horizons
    let picks = [5usize, 30, 59];
    let grid_t = format!("T={}", picks.map(|k| ft[k].to_string()).join(","));
    let text = ok(&[
        "sweep",
        "--model",
        "dephasing",
        "--gamma",
        "2",
        "--steps",
        "1024",
        "--grid",
        &format!("theta={HALF_PI}"),
        "--grid",
        &grid_t,
    ]);
    let (header, rows) = table(&text);
    let csl = column(&header, &rows, "csl");
    for (j, &k) in picks.iter().enumerate() {
        assert!((csl[j] - fb[k]).abs() < 1e-9 * fb[k], "T={}", ft[k]);
    }
}

#[test]
fn empty_grid_gives_header_only() {
    let text = ok(&[
        "sweep",
        "--model",
        "dephasing",
        "--gamma",
        "1",
        "--theta",
        "1",
        "--grid",
        "T=",
    ]);
    let (header, rows) = table(&text);
    assert_eq!(header.last().unwrap(), "regularized");
    assert!(rows.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 5] = [
        &[
            "sweep",
            "--model",
            "dephasing",
            "--gamma",
            "1",
            "--theta",
            "1",
            "--grid",
            "T=0:1",
        ],
        &[
            "sweep",
            "--model",
            "dephasing",
            "--gamma",
            "1",
            "--theta",
            "1",
            "--grid",
            "phi=1",
        ],
        &["bounds", "--model", "dephasing", "--gamma", "1", "--T", "1"],
        &[
            "bounds",
            "--model",
            "dephasing",
            "--gamma",
            "-1",
            "--theta",
            "1",
            "--T",
            "1",
        ],
        &[
            "simulate",
            "--model",
            "dephasing",
            "--gamma",
            "1",
            "--theta",
            "1",
            "--T",
            "1",
            "--steps",
            "15",
        ],
    ];
    for args in cases {
        assert_eq!(qsl(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numeric_failure_exits_3() {
    let out = qsl(&[
        "bounds",
        "--model",
        "dissipative",
        "--gamma",
        "400",
        "--theta",
        "1",
        "--T",
        "1",
        "--steps",
        "16",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..2)
        .map(|i| {
            dir.path()
                .join(format!("b{i}.csv"))
                .to_str()
                .unwrap()
                .to_string()
        })
        .collect();
    for p in &paths {
        ok(&[
            "sweep",
            "--model",
            "thermalization",
            "--gamma0",
            "1",
            "--N",
            "0.5",
            "--steps",
            "512",
            "--grid",
            "theta=0.5,1,2",
            "--grid",
            "T=0.3:0.9:3",
            "--out",
            p,
        ]);
    }
    let a = fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, fs::read(&paths[1]).unwrap());
}
