use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nehari_cli::commands::{monotonicity, sweep_direction};
use nehari_cli::config::{LawSpec, MuSpec, RunConfig};
use nehari_cli::output::{fmt_f64, Table};
use nehari_core::solver::{SweepDirection, SweepRow};
use nehari_core::Classification;

const SMALL: &str = r#"
seed = 3

[law]
kind = "power"
p = 2.0

[domain]
s = 0.4
half_width = 3.0
n_per_axis = 33

[problem]
q = 3.0
p = 4.0
lambdas = [1.0]
mu = { auto = [1.25] }

[solver]
restarts = 3

[nonexist]
samples = 50
"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn nehari(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nehari")).args(args).current_dir(dir).output().unwrap()
}

fn run_cfg(dir: &Path, cmd: &str, text: &str, extra: &[&str]) -> (Output, PathBuf) {
    let cfg = write(dir, &format!("{cmd}.toml"), text);
    let out = dir.join(format!("out_{cmd}"));
    let mut args = vec![cmd, cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (nehari(dir, &args), out)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_passes_for_the_shipped_configs() {
    let dir = tempfile::tempdir().unwrap();
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for name in ["reference.toml", "lambda_sweep.toml", "mu_sweep.toml", "powerlog_check.toml"] {
        let out = dir.path().join(name);
        let o = nehari(dir.path(), &["check", configs.join(name).to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
        let csv = std::fs::read_to_string(out.join("check.csv")).unwrap();
        assert!(csv.starts_with("# "));
        assert!(out.join("manifest.json").exists());
    }
}

#[test]
fn ordering_violation_fails_check_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("q = 3.0\np = 4.0", "q = 4.0\np = 3.0");
    let (o, _) = run_cfg(dir.path(), "check", &text, &[]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("FAIL H1 order") && l.contains("m < q < p")), "{s}");
}

#[test]
fn malformed_config_exits_1_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = run_cfg(dir.path(), "check", "seed = 3\n[law]\nkind = \"power\"\np = = 2.0\n", &[]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.contains("check.toml:4:"), "{e}");

    let (o, _) = run_cfg(dir.path(), "check", &SMALL.replace("seed = 3", "seed = 3\nsede = 4"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("sede"));

    let (o, _) = run_cfg(dir.path(), "check", &SMALL.replace("s = 0.4", "s = 1.4"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("domain.s"));

    let o = nehari(dir.path(), &["solve"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(SMALL, false, "small").unwrap();
    let path = write(dir.path(), "c.json", &serde_json::to_string(&cfg).unwrap());
    assert_eq!(RunConfig::from_path(&path).unwrap(), cfg);
    let out = dir.path().join("o");
    let o = nehari(dir.path(), &["check", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = RunConfig::parse(SMALL, false, "small").unwrap();
    assert_eq!(RunConfig::parse(&cfg.to_toml(), false, "echo").unwrap(), cfg);
    assert_eq!(cfg.problem.mu, MuSpec::Auto(vec![1.25]));
    assert_eq!(cfg.solver.restarts, 3);
    assert_eq!(cfg.fibering.samples, 200);
}

#[test]
fn toy_fibering_header_carries_the_closed_form_values() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("mu = { auto = [1.25] }", "mu = { explicit = [2.5, 1.5] }");
    let (o, out) = run_cfg(dir.path(), "fibering", &text, &["--toy"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("fibering.csv")).unwrap();
    let header: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    let value = |key: &str| -> f64 {
        let line = header.iter().find(|l| l.contains(key)).unwrap();
        line.rsplit("= ").next().unwrap().parse().unwrap()
    };
    assert!((value("t_crit") - 2.0).abs() < 1e-8);
    assert!((value("s_crit") - 8f64.sqrt()).abs() < 1e-8);
    assert!((value("Lambda_n") - 2.0).abs() < 1e-8);
    assert!((value("Lambda_e") - 4.5f64.sqrt()).abs() < 1e-8);
    assert!(header.iter().any(|l| l.contains("mu[0]") && l.contains("t_minus = 1.0000000000") && l.contains("t_plus = 4.0000000000")));
    assert!(header.iter().any(|l| l.contains("mu[1]") && l.contains("no intersection")));
    let markers = std::fs::read_to_string(out.join("fibering_markers.csv")).unwrap();
    assert!(markers.contains("two_roots") && markers.contains("no_intersection"));
    let script = std::fs::read_to_string(out.join("fibering.gp")).unwrap();
    assert!(script.contains("set logscale x") && script.contains("'fibering.csv' using 1:2"));
    assert_eq!(script.matches("nohead dt 2").count(), 2);
}

#[test]
fn solve_routes_by_regime() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("[1.25]", "[0.9, 1.25]");
    let (o, out) = run_cfg(dir.path(), "solve", &text, &[]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let csv = std::fs::read_to_string(out.join("solve.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].contains(",empty,") && rows[1].contains(",two_solutions,"));
    assert!(rows[1].contains(",minus,plus,"));
    let fields = std::fs::read_to_string(out.join("solve_fields.csv")).unwrap();
    assert!(fields.lines().any(|l| l == "node,x,y,u_1,v_1"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("solve.json")).unwrap()).unwrap();
    assert_eq!(json[0]["outcome"]["regime"], "empty");
    assert_eq!(json[1]["outcome"]["regime"], "two_solutions");
}

#[test]
fn unmet_residual_tolerance_is_flagged_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("restarts = 3", "restarts = 3\nmax_iter = 40\nresid_rel = 1e-30");
    let (o, out) = run_cfg(dir.path(), "solve", &text, &[]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("FLAGGED"));
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "flagged");
}

#[test]
fn nonexist_above_mu_n_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = run_cfg(dir.path(), "nonexist", SMALL, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid regime"), "{}", stderr(&o));
    let (o, out) = run_cfg(dir.path(), "nonexist", &SMALL.replace("[1.25]", "[0.5, 0.95]"), &[]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("nonexist.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.ends_with(",true,true")).count(), 2, "{csv}");
}

#[test]
fn manifest_echoes_the_effective_config() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_cfg(dir.path(), "extremal", SMALL, &["--threads", "2", "--seed", "19"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let echoed: RunConfig = serde_json::from_value(manifest["config"].clone()).unwrap();
    let mut expected = RunConfig::parse(SMALL, false, "small").unwrap();
    expected.threads = 2;
    expected.seed = 19;
    expected.out_dir = out.clone();
    assert_eq!(echoed, expected);
    assert_eq!(manifest["seed"], 19);
    assert_eq!(manifest["core_version"], nehari_core::VERSION);
    assert!(manifest["wall_times_s"]["total"].as_f64().unwrap() > 0.0);
    let files: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert_eq!(files, ["extremal.csv", "extremal_fields.csv", "extremal.json", "extremal.gp"]);
}

#[test]
fn custom_law_and_file_potentials_load_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    // φ(t) = 1 + √t, the flux of t²/2 + t^2.5/2.5
    let mut table = String::from("t,phi,phi_prime\n");
    for k in 0..=120 {
        let t = 10f64.powf(-4.0 + 8.0 * k as f64 / 120.0);
        table.push_str(&format!("{t:e},{:e},{:e}\n", 1.0 + t.sqrt(), 0.5 / t.sqrt()));
    }
    write(dir.path(), "law.csv", &table);
    let grid: Vec<f64> = (0..33).map(|i| -3.0 + 6.0 * i as f64 / 32.0).collect();
    let v: String = grid.iter().map(|x| format!("{x},{}\n", 1.0 + x * x)).collect();
    write(dir.path(), "v.csv", &format!("# x, V\n{v}"));
    let text = SMALL
        .replace("kind = \"power\"\np = 2.0", "kind = \"custom\"\ncsv = \"law.csv\"")
        .replace("q = 3.0\np = 4.0", "q = 3.5\np = 4.0")
        .replace("[problem]", "[potential]\nkind = \"file\"\npath = \"v.csv\"\n\n[problem]");
    let (o, out) = run_cfg(dir.path(), "check", &text, &[]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let cfg = RunConfig::from_path(&dir.path().join("check.toml")).unwrap();
    assert!(matches!(&cfg.law, LawSpec::Custom { csv, .. } if csv.is_absolute()));
    let law = cfg.law().unwrap();
    assert!((law.ell() - 2.0).abs() < 1e-2 && (law.m_idx() - 2.5).abs() < 1e-2, "{} {}", law.ell(), law.m_idx());
    assert!(out.join("check.json").exists());

    write(dir.path(), "v.csv", "1\n2\n");
    let (o, _) = run_cfg(dir.path(), "check", &text, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("expected 33 node values"));
}

#[test]
fn sweep_reports_trends() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("[1.25]", "[2.0, 5.0]");
    let (o, out) = run_cfg(dir.path(), "sweep", &text, &[]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert!(csv.contains("# trends: norm_v_increasing n/a") && csv.contains("E_plus_strictly_decreasing true"));
    assert!(csv.contains("non-increasing in mu true"));
    let (o, _) = run_cfg(dir.path(), "sweep", &SMALL.replace("[1.25]", "[0.5]"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("below mu_n_hat"));
}

#[test]
fn sweep_direction_follows_the_parameter_lists() {
    let mut cfg = RunConfig::parse(SMALL, false, "small").unwrap();
    assert_eq!(sweep_direction(&cfg), None);
    cfg.problem.mu = MuSpec::Auto(vec![2.0, 5.0]);
    assert_eq!(sweep_direction(&cfg), Some(SweepDirection::MuToInfinity));
    cfg.problem.lambdas = vec![1.0, 0.1];
    cfg.problem.mu = MuSpec::Auto(vec![1.25]);
    assert_eq!(sweep_direction(&cfg), Some(SweepDirection::LambdaToZero { mu_factor: 1.25 }));
    cfg.problem.mu = MuSpec::Explicit(vec![3.0]);
    assert_eq!(sweep_direction(&cfg), None);
}

fn row(lambda: f64, mu: f64, e_minus: f64, e_plus: f64) -> SweepRow {
    SweepRow {
        lambda,
        mu,
        mu_n_hat: 1.0,
        mu_e_hat: 2.0,
        e_minus,
        e_plus,
        norm_u: 1.0,
        norm_v: 1.0,
        q_norm_u: 1.0,
        resid_minus: 0.0,
        resid_plus: 0.0,
        tol_minus: 1.0,
        tol_plus: 1.0,
        class_minus: Classification::Minus,
        class_plus: Classification::Plus,
        converged: true,
        plus_norm_floor: 0.0,
    }
}

#[test]
fn monotonicity_in_both_parameters() {
    let rows = [row(1.0, 3.0, 2.0, -1.0), row(1.0, 4.0, 1.5, -2.0), row(0.5, 3.0, 1.0, -3.0)];
    let m = monotonicity(&rows);
    assert_eq!((m.in_mu, m.in_lambda), (Some(true), Some(true)));
    let bad = [row(1.0, 3.0, 2.0, -1.0), row(1.0, 4.0, 2.5, -2.0)];
    assert_eq!(monotonicity(&bad).in_mu, Some(false));
    assert_eq!(monotonicity(&bad).in_lambda, None);
}

#[test]
fn tables_use_round_trip_floats_and_comment_headers() {
    for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 5.0] {
        let s = fmt_f64(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
        let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{s}");
    }
    let mut t = Table::new(&["a", "b"]);
    t.comment("a: first; b: second");
    t.annotate("scale", 2.0);
    t.push(vec![fmt_f64(1.0), "x,y".to_string()]);
    let text = String::from_utf8(t.to_bytes().unwrap()).unwrap();
    assert_eq!(text, "# a: first; b: second\n# scale = 2.0000000000000000e0\na,b\n1.0000000000000000e0,\"x,y\"\n");
}
