use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charmatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn column(out: &str, name: &str) -> Vec<String> {
    let mut lines = out.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(j).unwrap().to_string()).collect()
}

#[test]
fn taylor_coefficients_of_exp() {
    let o = run(&["coeffs", "--f", "exp(x)", "--kind", "taylor", "--order", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(column(&out, "power_coeff"), ["1", "1", "1/2", "1/6"]);
    assert_eq!(column(&out, "c_n"), ["1", "1", "1", "1"]);
    assert!(out.contains("exact"));
}

#[test]
fn nsbf_coefficients_of_sin() {
    let o = run(&["coeffs", "--f", "sin(x)", "--kind", "nsbf", "--order", "5"]);
    assert!(o.status.success());
    assert_eq!(column(&stdout(&o), "a_n"), ["0", "2", "0", "-2", "0", "2"]);
}

#[test]
fn unknown_kind_is_a_usage_error() {
    let o = run(&["coeffs", "--f", "exp(x)", "--kind", "fancy"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown expansion kind"));
    let o = run(&["coeffs", "--f", "exp(", "--kind", "taylor"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_and_exit_codes() {
    let o = run(&["verify", "--f", "exp(x)", "--kind", "taylor", "--order", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pass"], true);
    assert_eq!(r["max_residual"], 0.0);

    let o = run(&["verify", "--f", "exp(x)", "--kind", "newpade", "--order", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r["max_residual"].as_f64().unwrap() <= 1e-9);

    let o = run(&["verify", "--f", "exp(x)", "--kind", "newpade", "--order", "8", "--perturb", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pass"], false);

    let o = run(&["verify", "--f", "exp(x)", "--kind", "taylor", "--order", "4", "--family", "moment"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("family mismatch"));
}

#[test]
fn verify_covers_other_families() {
    for args in [
        vec!["--kind", "legendre_moment", "--f", "exp(x)", "--order", "6"],
        vec!["--kind", "legendre_fourier", "--f", "exp(x)", "--order", "6"],
        vec!["--kind", "fourier", "--f", "x^2", "--order", "6"],
        vec!["--kind", "higher_integral", "--f", "exp(x)", "--order", "6"],
        vec!["--kind", "bernoulli", "--f", "exp(x)", "--order", "6", "--anchor", "0"],
        vec!["--kind", "lagrange", "--f", "atan(x)", "--order", "6"],
        vec!["--kind", "newton", "--f", "atan(x)", "--order", "6"],
        vec!["--kind", "ws", "--preset", "ws-e", "--f", "sqrt(1 - x^2)", "--order", "20"],
        vec!["--kind", "ws_integral", "--preset", "ws-c", "--f", "cos(x)", "--order", "8", "--anchor", "0.5"],
        vec!["--kind", "exp_weighted", "--w", "-1/2", "--q", "2", "--f", "sin(x)", "--order", "11"],
        vec!["--kind", "nonlinear", "--lambda", "sqrt", "--f", "exp(x)", "--order", "8", "--x0", "0.5"],
        vec!["--kind", "rational_x_over_x1", "--alpha", "2", "--f", "exp(x)", "--order", "6"],
    ] {
        let mut full = vec!["verify"];
        full.extend(args.iter().copied());
        let o = run(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let json = dir.path().join("report.json");
    std::fs::write(
        &cfg,
        r#"{"function": "exp(x)", "kind": "taylor", "order": 3, "x0": 0, "output": {"json": "ignored.json"}}"#,
    )
    .unwrap();
    let o = run(&[
        "coeffs",
        "--config",
        cfg.to_str().unwrap(),
        "--order",
        "5",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(column(&stdout(&o), "a_n").len(), 6);
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(t["a"].as_array().unwrap().len(), 6);

    std::fs::write(&cfg, r#"{"function": "exp(x)", "colour": 3}"#).unwrap();
    let o = run(&["coeffs", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coeffs_grid_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let svg = dir.path().join("g.svg");
    let o = run(&[
        "coeffs", "--f", "exp(x)", "--kind", "pade", "--order", "4", "--grid", "-1,1,11",
        "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with("q_n"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,f,pade[2/2],err_pade[2/2]");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "-1.0000000000000000e0");
    // 17 significant digits
    assert_eq!(first[1].split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
    assert!(std::fs::read_to_string(&svg).unwrap().contains(r#"viewBox="0 0 800 600""#));
    let o = run(&["coeffs", "--f", "exp(x)", "--kind", "taylor", "--grid", "0,1,1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_nsbf_and_taylor() {
    let o = run(&["compare", "--f", "sin(x)", "--order", "10", "--grid", "0,3*pi,601", "--kinds", "nsbf,taylor"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let max: Vec<f64> = column(&out, "max_abs").iter().map(|v| v.parse().unwrap()).collect();
    assert!(max[0] < max[1], "{out}");

    let o = run(&["compare", "--f", "sin(x)", "--order", "10", "--grid", "0,3*pi,601", "--kinds", "taylor,taylor"]);
    let out = stdout(&o);
    let max = column(&out, "max_abs");
    let l2 = column(&out, "l2");
    assert_eq!(max[0], max[1]);
    assert_eq!(l2[0], l2[1]);

    let o = run(&["compare", "--f", "sin(x)", "--grid", "0,1,0", "--kinds", "nsbf,taylor"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["compare", "--f", "sin(x)", "--grid", "0,1,5", "--kinds", "nsbf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_rejects_mismatched_grids() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, r#"{"function": "sin(x)", "kind": "taylor", "grid": {"lo": 0, "hi": 1, "points": 5}}"#).unwrap();
    std::fs::write(&b, r#"{"function": "sin(x)", "kind": "nsbf", "grid": {"lo": 0, "hi": 2, "points": 5}}"#).unwrap();
    let o = run(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("different grids"));
}

fn figure_files(name: &str, dir: &Path, tag: &str) -> (Vec<u8>, Vec<u8>, Duration) {
    let csv = dir.join(format!("{name}-{tag}.csv"));
    let svg = dir.join(format!("{name}-{tag}.svg"));
    let start = Instant::now();
    let o = run(&["figure", name, "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    let took = start.elapsed();
    assert!(o.status.success(), "{name}: {}", stderr(&o));
    (std::fs::read(csv).unwrap(), std::fs::read(svg).unwrap(), took)
}

#[test]
fn figures_are_deterministic_and_fast() {
    let dir = tempfile::tempdir().unwrap();
    let list = stdout(&run(&["figure", "list"]));
    let names: Vec<&str> = list.lines().collect();
    assert!(names.len() >= 17);
    for name in names {
        let (csv1, svg1, t1) = figure_files(name, dir.path(), "1");
        let (csv2, svg2, t2) = figure_files(name, dir.path(), "2");
        assert_eq!(csv1, csv2, "{name}");
        assert_eq!(svg1, svg2, "{name}");
        assert!(t1.max(t2) < Duration::from_secs(10), "{name}");
        let text = String::from_utf8(csv1).unwrap();
        assert!(text.starts_with("x,"), "{name}");
    }
}

#[test]
fn figure_columns() {
    let o = run(&["figure", "besscos"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "x,sin,taylor10,nsbf10,err_taylor10,err_nsbf10");
    assert_eq!(out.lines().count(), 2002);
    let xs = column(&out, "x");
    let lo: f64 = xs[0].parse().unwrap();
    assert!((lo + 4.0 * std::f64::consts::PI).abs() < 1e-15);

    let out = stdout(&run(&["figure", "ws-e"]));
    let header = out.lines().next().unwrap();
    assert!(header.contains("ws20") && header.contains("ws100"));
    let out = stdout(&run(&["figure", "inargpow-b"]));
    assert!(out.lines().next().unwrap().contains("G_exp"));
    let o = run(&["figure", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
