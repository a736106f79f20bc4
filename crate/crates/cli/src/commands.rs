//! Subcommand implementations. Independent parameter cells run on a rayon
//! pool; results are collected in input order and written by the calling
//! thread, so outputs do not depend on the thread count.

use anyhow::{bail, Context, Result};
use nehari_core::bounds::{self, EmbeddingConstants};
use nehari_core::calibration::toy_problem;
use nehari_core::extremal::extremal;
use nehari_core::fibering::Ray;
use nehari_core::math::log_space;
use nehari_core::nfunction::check_hypotheses;
use nehari_core::seeds;
use nehari_core::solver::{
    attach_bounds, minimize_branch, nonexistence_check, sign_diagnostics, sweep_cell, sweep_trends, NonexistenceCertificate,
    SolutionReport, SweepDirection, SweepRow, SweepTrends,
};
use nehari_core::{BoxGrid, Branch, Classification, ExtremalResult, ProblemData, RootStatus};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{MuSpec, RunConfig};
use crate::output::{fmt_f64, gnuplot, OutputBundle, Table};

/// Overall outcome of a command that did not error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Clean,
    /// Some certificate or asserted invariant failed.
    Flagged,
}

impl Status {
    fn from_flag(flagged: bool) -> Self {
        if flagged {
            Self::Flagged
        } else {
            Self::Clean
        }
    }

    fn label(self) -> &'static str {
        match self {
            Self::Clean => "clean",
            Self::Flagged => "flagged",
        }
    }
}

fn class_name(c: Classification) -> &'static str {
    match c {
        Classification::Minus => "minus",
        Classification::Plus => "plus",
        Classification::Zero => "zero",
    }
}

fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?)
}

/// Runs `f` over `items` on the pool, preserving order, failing on the
/// first error in input order.
fn par_map<T: Sync, R: Send>(pool: &rayon::ThreadPool, items: &[T], f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    pool.install(|| items.par_iter().map(&f).collect::<Vec<_>>()).into_iter().collect()
}

fn node_table(grid: &BoxGrid) -> Table {
    let mut t = Table::new(&["node", "x", "y"]);
    for (i, x) in grid.nodes().enumerate() {
        t.push(vec![i.to_string(), fmt_f64(x[0]), fmt_f64(x[1])]);
    }
    t
}

fn add_column(t: &mut Table, name: &str, values: &[f64]) {
    t.columns.push(name.to_string());
    for (row, v) in t.rows.iter_mut().zip(values) {
        row.push(fmt_f64(*v));
    }
}

/// Shared state for commands that need the checked problem and the
/// multistart set.
struct Setup {
    base: ProblemData,
    starts: Vec<Vec<f64>>,
    emb: EmbeddingConstants,
    pool: rayon::ThreadPool,
}

impl Setup {
    fn new(cfg: &RunConfig) -> Result<Self> {
        let base = cfg.problem()?;
        let starts = seeds::default_starts(base.grid(), cfg.solver.restarts, cfg.seed);
        let emb = bounds::embedding_constants(&base, &starts)?;
        Ok(Self { base, starts, emb, pool: pool(cfg)? })
    }

    fn extremals(&self, cfg: &RunConfig) -> Result<Vec<ExtremalResult>> {
        let settings = cfg.extremal_settings();
        par_map(&self.pool, &cfg.problem.lambdas, |&lam| {
            let pd = self.base.with_lambda(lam);
            let floor = bounds::lambda_n_floor(&pd, self.emb.s_p.value);
            extremal(&pd, &settings, &self.starts, floor).with_context(|| format!("extremal parameters at lambda = {lam}"))
        })
    }

    fn seeds(&self, ex: &ExtremalResult) -> Vec<Vec<f64>> {
        let mut s = vec![ex.minimizer_n.clone(), ex.minimizer_e.clone()];
        s.extend_from_slice(&self.starts);
        s
    }
}

fn embedding_comments(t: &mut Table, emb: &EmbeddingConstants) {
    t.annotate("S_p (discrete embedding constant, max ||u||_p/||u|| over starts)", emb.s_p.value);
    t.annotate("S_q (discrete embedding constant, max ||u||_q/||u|| over starts)", emb.s_q.value);
}

// ---------------------------------------------------------------- check

pub fn check(cfg: &RunConfig) -> Result<Status> {
    let pr = &cfg.problem;
    // Out-of-order exponents cannot form a problem, but the law-level
    // checks still say what is wrong.
    let rep = if pr.q > 1.0 && pr.p > pr.q {
        cfg.problem_unchecked()?.hypothesis_report()
    } else {
        cfg.validate()?;
        cfg.discretization()?;
        check_hypotheses(&cfg.law()?, cfg.domain.s, cfg.domain.dim, pr.q, pr.p)
    };
    let mut out = OutputBundle::create(&cfg.out_dir)?;
    let mut t = Table::new(&["hypothesis", "passed", "detail"]);
    t.comment("hypothesis: name of the checked condition; passed: true/false; detail: sampled range or failure witness");
    t.annotate("ell_hat (min of phi(t)t^2/Phi(t) over samples)", rep.ell_hat);
    t.annotate("m_hat (max of phi(t)t^2/Phi(t) over samples)", rep.m_hat);
    t.annotate("ell_star (N ell/(N - s ell))", rep.ell_star);
    for c in &rep.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        t.push(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
    }
    out.table("check.csv", &t)?;
    out.json("check.json", &rep)?;
    let status = Status::from_flag(!rep.all_passed());
    out.finish("check", cfg, status.label())?;
    Ok(status)
}

// ---------------------------------------------------------------- fibering

#[derive(Serialize)]
struct Marker {
    mu: f64,
    status: RootStatus,
    t_minus: Option<f64>,
    t_plus: Option<f64>,
}

#[derive(Serialize)]
struct FiberingReport {
    toy: bool,
    t_crit: f64,
    s_crit: f64,
    lambda_n: f64,
    lambda_e: f64,
    markers: Vec<Marker>,
}

/// Tabulates Q_n and Q_e along the ray through the configured seed field
/// (or the calibrated toy ray). Auto μ multipliers scale Λ_n of that ray.
pub fn fibering(cfg: &RunConfig, toy: bool) -> Result<Status> {
    let (pd, u) = if toy {
        let grid = BoxGrid::new(1, 8.0, 65)?;
        let t = toy_problem(grid, cfg.domain.s)?;
        (t.pd, t.u)
    } else {
        let pd = cfg.problem_unchecked()?;
        let u = seeds::seed_field(pd.grid(), cfg.fibering.seed_kind, cfg.seed).into_values();
        (pd.with_lambda(cfg.problem.lambdas[0]), u)
    };
    let mut out = OutputBundle::create(&cfg.out_dir)?;
    let ray = Ray::new(&u, &pd)?;
    let (t_crit, lambda_n) = ray.lambda_n()?;
    let (s_crit, lambda_e) = ray.lambda_e()?;
    let mus = match &cfg.problem.mu {
        MuSpec::Explicit(v) => v.clone(),
        MuSpec::Auto(f) => f.iter().map(|f| f * lambda_n).collect(),
    };
    let mut markers = Vec::new();
    for &mu in &mus {
        let r = Ray::new(&u, &pd.with_mu(mu))?.roots_from(t_crit, lambda_n)?;
        markers.push(Marker { mu, status: r.status, t_minus: r.t_minus, t_plus: r.t_plus });
    }

    let mut t = Table::new(&["t", "Q_n", "Q_e", "dQ_n_dt"]);
    t.comment("fibering profile along the ray t -> t u (u as given, not normalized)");
    t.comment("Q_n(t): Nehari quotient, Q_n(t) = mu exactly when t u lies on the Nehari set");
    t.comment("Q_e(t): energy quotient, Q_e(t) = mu exactly when the energy of t u vanishes");
    t.annotate("t_crit (minimizer of Q_n)", t_crit);
    t.annotate("s_crit (minimizer of Q_e)", s_crit);
    t.annotate("Lambda_n = Q_n(t_crit)", lambda_n);
    t.annotate("Lambda_e = Q_e(s_crit)", lambda_e);
    t.annotate("lambda", pd.lambda());
    for (k, m) in markers.iter().enumerate() {
        let line = match (m.t_minus, m.t_plus) {
            (Some(a), Some(b)) => format!("mu[{k}] = {}: t_minus = {}, t_plus = {}", fmt_f64(m.mu), fmt_f64(a), fmt_f64(b)),
            _ if m.status == RootStatus::Degenerate => format!("mu[{k}] = {}: degenerate, t = {}", fmt_f64(m.mu), fmt_f64(t_crit)),
            _ => format!("mu[{k}] = {}: no intersection (mu < Lambda_n)", fmt_f64(m.mu)),
        };
        t.comment(line);
    }
    for s in log_space(t_crit / 100.0, s_crit * 100.0, cfg.fibering.samples.max(2)) {
        t.push(vec![fmt_f64(s), fmt_f64(ray.q_n(s)), fmt_f64(ray.q_e(s)), fmt_f64(ray.q_n_prime(s))]);
    }
    out.table("fibering.csv", &t)?;

    let mut mt = Table::new(&["mu", "status", "t_minus", "t_plus"]);
    mt.comment("intersections of Q_n with the horizontal line mu; empty cells when there is none");
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for m in &markers {
        let status = match m.status {
            RootStatus::Empty => "no_intersection",
            RootStatus::Degenerate => "degenerate",
            RootStatus::TwoRoots => "two_roots",
        };
        mt.push(vec![fmt_f64(m.mu), status.to_string(), opt(m.t_minus), opt(m.t_plus)]);
    }
    out.table("fibering_markers.csv", &mt)?;

    let mut extra = vec!["set ylabel 'quotient'".to_string(), format!("set yrange [0:{}]", 4.0 * lambda_e.max(mus.iter().copied().fold(0.0, f64::max)))];
    for m in &markers {
        extra.push(format!("set arrow from graph 0, first {mu} to graph 1, first {mu} nohead dt 3", mu = m.mu));
        for t in [m.t_minus, m.t_plus].into_iter().flatten() {
            extra.push(format!("set arrow from {t}, graph 0 to {t}, graph 1 nohead dt 2"));
        }
    }
    out.script("fibering.gp", &gnuplot("fibering quotients", "fibering.csv", (1, "t"), &[(2, "Q_n"), (3, "Q_e")], true, &extra))?;
    out.json("fibering.json", &FiberingReport { toy, t_crit, s_crit, lambda_n, lambda_e, markers })?;

    println!("t_crit = {t_crit:.10}  s_crit = {s_crit:.10}  Lambda_n = {lambda_n:.10}  Lambda_e = {lambda_e:.10}");
    out.finish("fibering", cfg, Status::Clean.label())?;
    Ok(Status::Clean)
}

// ---------------------------------------------------------------- extremal

#[derive(Serialize)]
struct ExtremalReport<'a> {
    embedding: &'a EmbeddingConstants,
    results: &'a [ExtremalResult],
}

pub fn extremal_cmd(cfg: &RunConfig) -> Result<Status> {
    let mut out = OutputBundle::create(&cfg.out_dir)?;
    let setup = out.time("setup", || Setup::new(cfg))?;
    let results = out.time("extremal", || setup.extremals(cfg))?;
    let mut t = Table::new(&["lambda", "mu_n_hat", "mu_e_hat", "lower_floor", "spread_n", "spread_e", "ordering_holds"]);
    t.comment("mu_n_hat, mu_e_hat: multistart minima of the Nehari and energy Rayleigh quotients");
    t.comment("lower_floor: analytic positive lower bound for mu_n_hat; spread_*: max - min over starts");
    t.comment("ordering_holds: 0 < lower_floor <= mu_n_hat < mu_e_hat");
    embedding_comments(&mut t, &setup.emb);
    let mut flagged = false;
    let mut fields = node_table(setup.base.grid());
    for (k, r) in results.iter().enumerate() {
        flagged |= !r.ordering_holds();
        t.push(vec![
            fmt_f64(r.lambda),
            fmt_f64(r.mu_n),
            fmt_f64(r.mu_e),
            fmt_f64(r.lower_floor),
            fmt_f64(r.spread_n),
            fmt_f64(r.spread_e),
            r.ordering_holds().to_string(),
        ]);
        add_column(&mut fields, &format!("minimizer_n_{k}"), &r.minimizer_n);
        add_column(&mut fields, &format!("minimizer_e_{k}"), &r.minimizer_e);
        println!("lambda = {:.6e}: mu_n = {:.10}  mu_e = {:.10}  ordering {}", r.lambda, r.mu_n, r.mu_e, r.ordering_holds());
    }
    fields.comment("minimizer_n_k, minimizer_e_k: extremal minimizers for the k-th lambda, unit Luxemburg norm");
    out.table("extremal.csv", &t)?;
    out.table("extremal_fields.csv", &fields)?;
    out.json("extremal.json", &ExtremalReport { embedding: &setup.emb, results: &results })?;
    let logx = results.len() > 1;
    out.script("extremal.gp", &gnuplot("extremal parameters", "extremal.csv", (1, "lambda"), &[(2, "mu_n"), (3, "mu_e")], logx, &[]))?;
    let status = Status::from_flag(flagged);
    out.finish("extremal", cfg, status.label())?;
    Ok(status)
}

// ---------------------------------------------------------------- solve

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
enum Outcome {
    TwoSolutions { minus: Box<SolutionReport>, plus: Box<SolutionReport>, d_mu: f64, c_mu: f64 },
    Empty { certificate: NonexistenceCertificate },
}

#[derive(Clone, Debug, Serialize)]
struct CellReport {
    lambda: f64,
    mu: f64,
    mu_n_hat: f64,
    mu_e_hat: f64,
    flagged: bool,
    outcome: Outcome,
}

fn cells(cfg: &RunConfig, exs: &[ExtremalResult]) -> Vec<(usize, f64)> {
    exs.iter().enumerate().flat_map(|(i, ex)| cfg.problem.mu.resolve(ex.mu_n).into_iter().map(move |mu| (i, mu))).collect()
}

fn solve_cell(cfg: &RunConfig, setup: &Setup, ex: &ExtremalResult, mu: f64) -> Result<CellReport> {
    let pd = setup.base.with_lambda(ex.lambda).with_mu(mu);
    if mu < ex.mu_n {
        let certificate = nonexistence_check(&pd, ex.mu_n, cfg.nonexist.samples, cfg.seed, &[ex.minimizer_n.clone()])?;
        let flagged = !certificate.positive();
        return Ok(CellReport { lambda: ex.lambda, mu, mu_n_hat: ex.mu_n, mu_e_hat: ex.mu_e, flagged, outcome: Outcome::Empty { certificate } });
    }
    let settings = cfg.solver_settings();
    let seeds = setup.seeds(ex);
    let s_q = setup.emb.s_q.value;
    let mut u = minimize_branch(&pd, Branch::Minus, &seeds, Some(&ex.minimizer_n), &settings)?;
    let mut v = minimize_branch(&pd, Branch::Plus, &seeds, Some(&ex.minimizer_n), &settings)?;
    attach_bounds(&mut u, &pd, s_q);
    attach_bounds(&mut v, &pd, s_q);
    v.certificates.sign_vs_mu_e = Some(sign_diagnostics(&pd, &v, ex.mu_e, cfg.solver.sign_band_rel)?);
    let flagged = !u.residual_ok()
        || !v.residual_ok()
        || u.branch != Classification::Minus
        || v.branch != Classification::Plus
        || u.certificates.flagged()
        || v.certificates.flagged()
        || !(v.energy < u.energy);
    Ok(CellReport {
        lambda: ex.lambda,
        mu,
        mu_n_hat: ex.mu_n,
        mu_e_hat: ex.mu_e,
        flagged,
        outcome: Outcome::TwoSolutions {
            d_mu: bounds::d_mu(&pd, s_q),
            c_mu: bounds::c_mu(&pd, s_q),
            minus: Box::new(u),
            plus: Box::new(v),
        },
    })
}

/// Runs extremal → roots → minimization → diagnostics for every (λ, μ) cell.
/// Cells with μ below μ̂_n(λ) take the nonexistence path instead.
pub fn solve(cfg: &RunConfig) -> Result<Status> {
    let mut out = OutputBundle::create(&cfg.out_dir)?;
    let setup = out.time("setup", || Setup::new(cfg))?;
    let exs = out.time("extremal", || setup.extremals(cfg))?;
    let cells = cells(cfg, &exs);
    let reports = out.time("solve", || par_map(&setup.pool, &cells, |&(i, mu)| solve_cell(cfg, &setup, &exs[i], mu)))?;

    let mut t = Table::new(&[
        "lambda", "mu", "regime", "mu_n_hat", "mu_e_hat", "E_minus", "E_plus", "norm_u", "norm_v", "resid_minus", "tol_minus",
        "resid_plus", "tol_plus", "class_minus", "class_plus", "D_mu", "c_mu", "sign_plus_expected", "sign_plus_observed",
        "nonexistence_margin", "flagged",
    ]);
    t.comment("regime: two_solutions (mu >= mu_n_hat) or empty (mu < mu_n_hat, nonexistence certificate)");
    t.comment("E_minus, E_plus: energy levels of the minimizers u on N^- and v on N^+; norm_*: Luxemburg norms");
    t.comment("resid_*: max over coordinate directions of |I'(w) e_i| / ||e_i||; tol_* = resid_rel (1 + |E|)");
    t.comment("class_*: Nehari classification of the minimizer; D_mu: lower bound for E_minus; c_mu: lower bound for the norms");
    t.comment("sign_plus_*: sign of E_plus expected from mu versus mu_e_hat, and observed within the degeneracy band");
    t.comment("nonexistence_margin: mu_n_hat - mu when every sampled ray has Lambda_n > mu");
    embedding_comments(&mut t, &setup.emb);
    let mut fields = node_table(setup.base.grid());
    let mut flagged = false;
    for (k, r) in reports.iter().enumerate() {
        flagged |= r.flagged;
        let mut row = vec![fmt_f64(r.lambda), fmt_f64(r.mu)];
        match &r.outcome {
            Outcome::TwoSolutions { minus, plus, d_mu, c_mu } => {
                let sign = plus.certificates.sign_vs_mu_e.expect("attached above");
                row.extend([
                    "two_solutions".to_string(),
                    fmt_f64(r.mu_n_hat),
                    fmt_f64(r.mu_e_hat),
                    fmt_f64(minus.energy),
                    fmt_f64(plus.energy),
                    fmt_f64(minus.norm),
                    fmt_f64(plus.norm),
                    fmt_f64(minus.residual),
                    fmt_f64(minus.resid_tol),
                    fmt_f64(plus.residual),
                    fmt_f64(plus.resid_tol),
                    class_name(minus.branch).to_string(),
                    class_name(plus.branch).to_string(),
                    fmt_f64(*d_mu),
                    fmt_f64(*c_mu),
                    format!("{:?}", sign.expected).to_lowercase(),
                    format!("{:?}", sign.observed).to_lowercase(),
                    String::new(),
                ]);
                add_column(&mut fields, &format!("u_{k}"), &minus.field);
                add_column(&mut fields, &format!("v_{k}"), &plus.field);
                println!(
                    "lambda = {:.6e} mu = {:.6e}: E- = {:.10e} E+ = {:.10e} resid {:.2e}/{:.2e}{}",
                    r.lambda,
                    r.mu,
                    minus.energy,
                    plus.energy,
                    minus.residual,
                    plus.residual,
                    if r.flagged { "  FLAGGED" } else { "" }
                );
            }
            Outcome::Empty { certificate } => {
                let mut rest = vec![String::new(); 18];
                rest[0] = "empty".to_string();
                rest[1] = fmt_f64(r.mu_n_hat);
                rest[2] = fmt_f64(r.mu_e_hat);
                rest[17] = fmt_f64(certificate.margin);
                row.extend(rest);
                println!(
                    "lambda = {:.6e} mu = {:.6e}: below mu_n_hat, nonexistence margin {:.6e} over {} rays{}",
                    r.lambda,
                    r.mu,
                    certificate.margin,
                    certificate.samples,
                    if r.flagged { "  FLAGGED" } else { "" }
                );
            }
        }
        row.push(r.flagged.to_string());
        t.push(row);
    }
    fields.comment("u_k, v_k: minimizers on N^- and N^+ for the k-th solved cell (solve.csv row order)");
    out.table("solve.csv", &t)?;
    out.table("solve_fields.csv", &fields)?;
    out.json("solve.json", &reports)?;
    let status = Status::from_flag(flagged);
    out.finish("solve", cfg, status.label())?;
    Ok(status)
}

// ---------------------------------------------------------------- sweep

/// Monotonicity of ℰ^± with shared seeds: non-increasing in μ at fixed λ,
/// non-decreasing in λ at fixed μ.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Monotonicity {
    pub in_mu: Option<bool>,
    pub in_lambda: Option<bool>,
}

fn energy_slack(a: &SweepRow, b: &SweepRow) -> f64 {
    1e-9 * (1.0 + a.e_minus.abs().max(b.e_minus.abs()).max(a.e_plus.abs()).max(b.e_plus.abs()))
}

pub fn monotonicity(rows: &[SweepRow]) -> Monotonicity {
    let mut m = Monotonicity::default();
    let ordered_pairs = |key: &dyn Fn(&SweepRow) -> f64, group: &dyn Fn(&SweepRow) -> f64| {
        let mut pairs = Vec::new();
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[i + 1..] {
                if group(a) == group(b) && key(a) != key(b) {
                    pairs.push(if key(a) < key(b) { (a, b) } else { (b, a) });
                }
            }
        }
        pairs
    };
    let mu_pairs = ordered_pairs(&|r| r.mu, &|r| r.lambda);
    if !mu_pairs.is_empty() {
        m.in_mu = Some(mu_pairs.iter().all(|(a, b)| {
            let s = energy_slack(a, b);
            b.e_minus <= a.e_minus + s && b.e_plus <= a.e_plus + s
        }));
    }
    let lam_pairs = ordered_pairs(&|r| r.lambda, &|r| r.mu);
    if !lam_pairs.is_empty() {
        m.in_lambda = Some(lam_pairs.iter().all(|(a, b)| {
            let s = energy_slack(a, b);
            a.e_minus <= b.e_minus + s && a.e_plus <= b.e_plus + s
        }));
    }
    m
}

/// The asymptotic direction a sweep follows, if any: several decreasing λ
/// with one auto multiplier, or one λ with increasing auto multipliers.
pub fn sweep_direction(cfg: &RunConfig) -> Option<SweepDirection> {
    let lams = &cfg.problem.lambdas;
    match &cfg.problem.mu {
        MuSpec::Auto(f) if lams.len() > 1 && f.len() == 1 && lams.windows(2).all(|w| w[1] < w[0]) => {
            Some(SweepDirection::LambdaToZero { mu_factor: f[0] })
        }
        MuSpec::Auto(f) if lams.len() == 1 && f.len() > 1 && f.windows(2).all(|w| w[1] > w[0]) => Some(SweepDirection::MuToInfinity),
        _ => None,
    }
}

#[derive(Serialize)]
struct SweepReport<'a> {
    direction: Option<SweepDirection>,
    rows: &'a [SweepRow],
    trends: Option<SweepTrends>,
    monotonicity: &'a Monotonicity,
}

pub fn sweep(cfg: &RunConfig) -> Result<Status> {
    let mut out = OutputBundle::create(&cfg.out_dir)?;
    let setup = out.time("setup", || Setup::new(cfg))?;
    let exs = out.time("extremal", || setup.extremals(cfg))?;
    let cells = cells(cfg, &exs);
    for &(i, mu) in &cells {
        if mu < exs[i].mu_n {
            bail!("sweep cell (lambda = {}, mu = {mu}) lies below mu_n_hat = {}; use `solve` or `nonexist` there", exs[i].lambda, exs[i].mu_n);
        }
    }
    let settings = cfg.solver_settings();
    let s_p = setup.emb.s_p.value;
    let rows = out.time("sweep", || {
        par_map(&setup.pool, &cells, |&(i, mu)| Ok(sweep_cell(&setup.base, mu, &exs[i], &setup.starts, &settings, s_p)?))
    })?;
    let direction = sweep_direction(cfg);
    let trends = direction.as_ref().map(|d| sweep_trends(d, &rows));
    let mono = monotonicity(&rows);

    let mut t = Table::new(&[
        "lambda", "mu", "mu_n_hat", "mu_e_hat", "E_minus", "E_plus", "norm_u", "norm_v", "resid_minus", "resid_plus", "tol_minus",
        "tol_plus", "class_minus", "class_plus", "converged", "plus_norm_floor",
    ]);
    t.comment("E_minus, E_plus: minimal energies on N^- and N^+; norm_u, norm_v: Luxemburg norms of the minimizers");
    t.comment("resid_*: max over coordinate directions of |I'(w) e_i| / ||e_i||; tol_* = resid_rel (1 + |E|)");
    t.comment("plus_norm_floor: explicit lower bound for norm_v evaluated with S_p");
    embedding_comments(&mut t, &setup.emb);
    let flag = |x: Option<bool>| x.map_or("n/a".to_string(), |b| b.to_string());
    if let Some(tr) = &trends {
        t.comment(format!(
            "trends: norm_v_increasing {}, norm_v_above_floor {}, E_minus_decreasing {}, E_minus_positive {}, norm_u_decreasing {}, E_plus_strictly_decreasing {}, all_converged {}",
            flag(tr.norm_v_increasing),
            flag(tr.norm_v_above_floor),
            flag(tr.e_minus_decreasing),
            flag(tr.e_minus_positive),
            flag(tr.norm_u_decreasing),
            flag(tr.e_plus_strictly_decreasing),
            tr.all_converged
        ));
    }
    t.comment(format!("monotonicity: non-increasing in mu {}, non-decreasing in lambda {}", flag(mono.in_mu), flag(mono.in_lambda)));
    let mut flagged = trends.as_ref().is_some_and(|t| !t.all_hold()) || mono.in_mu == Some(false) || mono.in_lambda == Some(false);
    for r in &rows {
        flagged |= !r.converged
            || r.resid_minus > r.tol_minus
            || r.resid_plus > r.tol_plus
            || r.class_minus != Classification::Minus
            || r.class_plus != Classification::Plus;
        t.push(vec![
            fmt_f64(r.lambda),
            fmt_f64(r.mu),
            fmt_f64(r.mu_n_hat),
            fmt_f64(r.mu_e_hat),
            fmt_f64(r.e_minus),
            fmt_f64(r.e_plus),
            fmt_f64(r.norm_u),
            fmt_f64(r.norm_v),
            fmt_f64(r.resid_minus),
            fmt_f64(r.resid_plus),
            fmt_f64(r.tol_minus),
            fmt_f64(r.tol_plus),
            class_name(r.class_minus).to_string(),
            class_name(r.class_plus).to_string(),
            r.converged.to_string(),
            fmt_f64(r.plus_norm_floor),
        ]);
        println!(
            "lambda = {:.6e} mu = {:.6e}: E- = {:.10e} E+ = {:.10e} |u| = {:.6e} |v| = {:.6e}",
            r.lambda, r.mu, r.e_minus, r.e_plus, r.norm_u, r.norm_v
        );
    }
    out.table("sweep.csv", &t)?;
    out.json("sweep.json", &SweepReport { direction, rows: &rows, trends: trends.clone(), monotonicity: &mono })?;
    let (x, logx) = match direction {
        Some(SweepDirection::MuToInfinity) => ((2, "mu"), true),
        _ => ((1, "lambda"), true),
    };
    out.script("sweep.gp", &gnuplot("energy levels", "sweep.csv", x, &[(5, "E_minus"), (6, "E_plus")], logx, &[]))?;
    let status = Status::from_flag(flagged);
    if flagged {
        println!("sweep: some trend or residual check failed, see sweep.csv header");
    }
    out.finish("sweep", cfg, status.label())?;
    Ok(status)
}

// ---------------------------------------------------------------- nonexist

pub fn nonexist(cfg: &RunConfig) -> Result<Status> {
    let mut out = OutputBundle::create(&cfg.out_dir)?;
    let setup = out.time("setup", || Setup::new(cfg))?;
    let exs = out.time("extremal", || setup.extremals(cfg))?;
    let cells = cells(cfg, &exs);
    let certs = out.time("nonexist", || {
        par_map(&setup.pool, &cells, |&(i, mu)| {
            let ex = &exs[i];
            let pd = setup.base.with_lambda(ex.lambda).with_mu(mu);
            Ok(nonexistence_check(&pd, ex.mu_n, cfg.nonexist.samples, cfg.seed, &[ex.minimizer_n.clone()])?)
        })
    })?;
    let mut t = Table::new(&["lambda", "mu", "mu_n_hat", "samples", "min_lambda_n", "margin", "worst_sample", "all_empty", "grid_consistent"]);
    t.comment("min_lambda_n: smallest Lambda_n over the sampled rays (extremal minimizer first); margin = min_lambda_n - mu");
    t.comment("all_empty: no sampled ray meets the Nehari set; grid_consistent: a direct scan of Q_n - mu agrees");
    let mut flagged = false;
    for ((i, _), c) in cells.iter().zip(&certs) {
        flagged |= !c.positive();
        t.push(vec![
            fmt_f64(exs[*i].lambda),
            fmt_f64(c.mu),
            fmt_f64(c.mu_n_hat),
            c.samples.to_string(),
            fmt_f64(c.min_lambda_n),
            fmt_f64(c.margin),
            c.worst_sample.to_string(),
            c.all_empty.to_string(),
            c.grid_consistent.to_string(),
        ]);
        println!("mu = {:.6e}: margin {:.6e} over {} rays, positive {}", c.mu, c.margin, c.samples, c.positive());
    }
    out.table("nonexist.csv", &t)?;
    out.json("nonexist.json", &certs)?;
    let status = Status::from_flag(flagged);
    out.finish("nonexist", cfg, status.label())?;
    Ok(status)
}
