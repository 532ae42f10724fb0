use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dipolekit"))
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn config(&self, json: &str) -> PathBuf {
        let p = self.dir.path().join(format!("cfg{}.json", json.len()));
        std::fs::write(&p, json).unwrap();
        p
    }

    fn out(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str], config: &Path, out: Option<&Path>) -> Output {
    let mut cmd = bin();
    cmd.args(args).arg("--config").arg(config);
    if let Some(o) = out {
        cmd.arg("--out").arg(o);
    }
    cmd.output().unwrap()
}

struct Csv {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn read(path: &Path) -> Csv {
        let text = std::fs::read_to_string(path).unwrap();
        assert!(!text.contains('\r'));
        let mut lines = text.lines();
        let headers = lines
            .next()
            .unwrap()
            .split(',')
            .map(str::to_string)
            .collect();
        let rows = lines
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect();
        Csv { headers, rows }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let k = self
            .headers
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].parse().unwrap()).collect()
    }

    /// Value of a quantity,value,unit table.
    fn quantity(&self, name: &str) -> f64 {
        self.rows
            .iter()
            .find(|r| r[0] == name)
            .unwrap_or_else(|| panic!("no row {name}"))[1]
            .parse()
            .unwrap()
    }
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn coeffs_at_ten_rydberg_radii() {
    let ws = Workspace::new();
    let cfg = ws.config(r#"{"rydberg_n": 50, "separation_ra": 10}"#);
    let path = ws.out("coeffs.csv");
    ok(&run(&["coeffs"], &cfg, Some(&path)));
    let t = Csv::read(&path);
    assert_eq!(t.headers, ["quantity", "value", "unit"]);
    let c = t.quantity("C");
    assert!((c / 3.72e10 - 1.0).abs() < 1e-2);
    assert!((t.quantity("gamma_s/gamma_s0") / 15.0 - 1.0).abs() < 0.1);
    // identical to display precision
    let row = |q: &str| t.rows.iter().find(|r| r[0] == q).unwrap()[1].clone();
    assert_eq!(row("delta12_minus_transverse"), row("C"));
    assert!(t.rows.iter().all(|r| r.len() == 3 && !r[2].is_empty()));
}

#[test]
fn coulomb_coupling_is_negative_along_the_axis() {
    let ws = Workspace::new();
    let cfg =
        ws.config(r#"{"rydberg_n": 50, "dipole_si": [0, 0, 3.17881e-26], "separation_ra": 10}"#);
    let path = ws.out("c.csv");
    ok(&run(&["coeffs"], &cfg, Some(&path)));
    assert!(Csv::read(&path).quantity("C") < 0.0);
}

#[test]
fn ground_state_is_stationary_under_standard_model() {
    let ws = Workspace::new();
    let cfg = ws.config(r#"{"rydberg_n": 50, "time": {"from": 0, "to": 5, "points": 11}}"#);
    let path = ws.out("p.csv");
    ok(&run(
        &["populations", "--model", "standard", "--initial", "gg"],
        &cfg,
        Some(&path),
    ));
    let t = Csv::read(&path);
    assert_eq!(t.headers[0], "t [s]");
    assert!(t.headers.iter().all(|h| h.ends_with(']')));
    assert_eq!(t.rows.len(), 11);
    assert!(t.column("p_gg [1]").iter().all(|&p| p == 1.0));
}

#[test]
fn antisymmetric_state_stays_dark() {
    let ws = Workspace::new();
    let cfg = ws.config(
        r#"{"rydberg_n": 50, "separation_ra": 10, "model": "partial", "initial": "antisymmetric"}"#,
    );
    let path = ws.out("p.csv");
    ok(&run(&["populations"], &cfg, Some(&path)));
    let drift = Csv::read(&path)
        .column("p_eps2 [1]")
        .iter()
        .map(|p| (p - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(drift <= 1e-6, "{drift:e}");
}

#[test]
fn models_agree_at_large_separation() {
    let ws = Workspace::new();
    let cfg = ws.config(
        r#"{"rydberg_n": 50, "separation_ra": 1e6, "time": {"from": 0, "to": 5, "points": 51}}"#,
    );
    let (a, b) = (ws.out("a.csv"), ws.out("b.csv"));
    ok(&run(
        &["populations", "--model", "standard"],
        &cfg,
        Some(&a),
    ));
    ok(&run(&["populations", "--model", "partial"], &cfg, Some(&b)));
    let (a, b) = (Csv::read(&a), Csv::read(&b));
    for col in ["p_s [1]", "p_stationary [1]"] {
        let diff = a
            .column(col)
            .iter()
            .zip(b.column(col))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-3, "{col}: {diff:e}");
    }
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let ws = Workspace::new();
    let cfg = ws.config(
        r#"{"rydberg_n": 50, "separation": {"from": 5, "to": 40, "points": 6, "scale": "log"}}"#,
    );
    let (a, b) = (ws.out("a.csv"), ws.out("b.csv"));
    ok(&run(&["sweep"], &cfg, Some(&a)));
    ok(&run(&["sweep"], &cfg, Some(&b)));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r = Csv::read(&a).column("R/r_a [1]");
    assert_eq!(r.len(), 6);
    assert!(r.windows(2).all(|w| w[0] < w[1]));
    assert!((r[0] - 5.0).abs() < 1e-9 && (r[5] - 40.0).abs() < 1e-9);
}

#[test]
fn peak_positions_approach_ratio_two_at_small_separation() {
    let ws = Workspace::new();
    let cfg = ws.config(r#"{"rydberg_n": 50, "separation": {"from": 5, "to": 20, "points": 4}}"#);
    let path = ws.out("peaks.csv");
    ok(&run(&["peaks"], &cfg, Some(&path)));
    let t = Csv::read(&path);
    let ratio = t.column("center_ratio [1]");
    assert!((ratio[0] / 2.0 - 1.0).abs() <= 0.15, "{}", ratio[0]);
    let diff = t.column("center_difference [rad/s]");
    assert!(diff[3] > 0.5e9 && diff[3] < 2e9, "{}", diff[3]);
    let h = t.column("height_ratio [1]");
    let (h0, h1) = (t.column("s0_height [arb]"), t.column("s_height [arb]"));
    for k in 0..4 {
        assert!((h[k] - h1[k] / h0[k]).abs() < 1e-10 * h[k]);
    }
}

#[test]
fn spectrum_columns_peak_at_zero_detuning() {
    let ws = Workspace::new();
    let cfg = ws.config(r#"{"rydberg_n": 50, "frequency": {"from": -1, "to": 1, "points": 21}}"#);
    let path = ws.out("s.csv");
    ok(&run(&["spectrum"], &cfg, Some(&path)));
    let t = Csv::read(&path);
    for col in ["s0 [arb]", "s [arb]"] {
        let v = t.column(col);
        let k = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(k, 10, "{col}");
    }
}

#[test]
fn gauge_check_is_reproducible() {
    let ws = Workspace::new();
    let cfg = ws.config(r#"{"rydberg_n": 50}"#);
    let (a, b, c) = (ws.out("a.csv"), ws.out("b.csv"), ws.out("c.csv"));
    ok(&run(&["gauge-check"], &cfg, Some(&a)));
    ok(&run(&["gauge-check"], &cfg, Some(&b)));
    ok(&run(&["gauge-check", "--seed", "9"], &cfg, Some(&c)));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let t = Csv::read(&a);
    assert_eq!(t.rows.len(), 13);
    assert!(t.column("max_rel_dev [1]").iter().all(|&d| d <= 1e-10));
    assert!(Csv::read(&c)
        .column("max_rel_dev [1]")
        .iter()
        .all(|&d| d <= 1e-10));
}

#[test]
fn writes_to_stdout_without_out() {
    let ws = Workspace::new();
    let cfg = ws.config(r#"{"rydberg_n": 50}"#);
    let out = run(&["coeffs"], &cfg, None);
    ok(&out);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("quantity,value,unit\n"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let ws = Workspace::new();
    for json in [
        r#"{"rydberg_n": 50, "omega_0": 1}"#,
        r#"{"rydberg_n": 50, "time": {"from": 3, "to": 1, "points": 5}}"#,
        r#"{"rydberg_n": 50, "time": {"from": 0, "to": 1, "points": 1}}"#,
        r#"{"omega0_si": 1e10}"#,
        r#"{"rydberg_n": 50, "separation_ra": -1}"#,
        r#"not json"#,
    ] {
        let out = run(&["coeffs"], &ws.config(json), None);
        assert_eq!(out.status.code(), Some(2), "{json}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["coeffs"], &ws.dir.path().join("missing.json"), None);
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["coeffs", "--config"])
        .arg(ws.config("{}"))
        .args(["--model", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analytic_spectra_reject_a_warm_field() {
    let ws = Workspace::new();
    let cfg = ws.config(r#"{"rydberg_n": 50, "temperature_k": 300}"#);
    let out = run(&["peaks"], &cfg, None);
    assert_eq!(out.status.code(), Some(2));
}
