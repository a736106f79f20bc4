//! Constrained minimization of ℐ_{λ,μ} over 𝒩⁻ and 𝒩⁺.
//!
//! A direction `u` is projected onto the Nehari set through its fibering
//! roots, `u ↦ t_μ^±(u)u`, and the reduced functionals
//! `J^±(u) = ℐ(t_μ^±(u)u)` are minimized over directions. Both are
//! 0-homogeneous and, because `ℐ′(t^±u)u = 0`, their gradients are
//! `t^±·∇ℐ(t^±u)`. Directions with `Λ_n(u) ≥ μ` have no roots and are
//! treated as infeasible by the line search.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::extremal::lambda_n;
use crate::fibering::{Classification, Ray, RootStatus};
use crate::functionals::{energy_breakdown, energy_gradient, luxemburg_from_atoms, luxemburg_norm, ProblemData};
use crate::math::{self, abs, powf};
use crate::optim::{self, LbfgsSettings};
use crate::seeds;

pub type Branch = Classification;

/// Default width of the μ-band around μ̂_e inside which ℰ⁺ is expected to
/// vanish, relative to μ̂_e.
pub const DEFAULT_SIGN_BAND_REL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    pub lbfgs: LbfgsSettings,
    /// resid_tol = resid_rel · (1 + |ℰ|).
    pub resid_rel: f64,
    /// Abort when the Luxemburg norm of an iterate exceeds this.
    pub norm_guard: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            lbfgs: LbfgsSettings { max_iter: 2000, rel_decrease: 1e-11, ..LbfgsSettings::default() },
            resid_rel: 1e-6,
            norm_guard: 1e6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    pub d_mu_bound: Option<f64>,
    pub d_mu_holds: Option<bool>,
    pub c_mu_bound: Option<f64>,
    pub c_mu_holds: Option<bool>,
    pub sign_vs_mu_e: Option<SignDiagnostic>,
}

impl Certificates {
    /// True when some evaluated certificate failed.
    pub fn flagged(&self) -> bool {
        self.d_mu_holds == Some(false)
            || self.c_mu_holds == Some(false)
            || self.sign_vs_mu_e.as_ref().is_some_and(|s| !s.agrees)
    }
}

/// Outcome of a branch minimization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    /// The Nehari point `t_μ^±(u)u`.
    pub field: Vec<f64>,
    /// Branch that was minimized over.
    pub target: Branch,
    /// Classification of the final point.
    pub branch: Branch,
    pub energy: f64,
    pub residual: f64,
    pub resid_tol: f64,
    pub t_projection: f64,
    /// ℐ″(u)(u,u) divided by the scale that defines ε_cls.
    pub classification_margin: f64,
    pub second_diag: f64,
    pub eps_cls: f64,
    /// 𝒥(u) + (μ/q)‖u‖_{q,a}^q + (λ/p)‖u‖_p^p.
    pub energy_scale: f64,
    pub norm: f64,
    pub q_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed_index: usize,
    pub certificates: Certificates,
}

impl SolutionReport {
    pub fn residual_ok(&self) -> bool {
        self.residual <= self.resid_tol
    }
}

/// Luxemburg norms of the unit coordinate fields.
pub fn unit_norms(pd: &ProblemData) -> Vec<f64> {
    pd.disc()
        .all_unit_atoms()
        .into_iter()
        .map(|atoms| {
            let (w, z): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
            luxemburg_from_atoms(&w, &z, pd.law())
        })
        .collect()
}

/// `max_i |ℐ′(u)e_i| / ‖e_i‖` over the coordinate basis.
pub fn residual(u: &[f64], pd: &ProblemData) -> f64 {
    residual_with(u, pd, &unit_norms(pd))
}

pub fn residual_with(u: &[f64], pd: &ProblemData, norms: &[f64]) -> f64 {
    if u.iter().all(|x| *x == 0.0) {
        return 0.0;
    }
    let g = energy_gradient(u, pd);
    g.iter().zip(norms).fold(0.0, |m, (gi, ni)| m.max(abs(*gi) / ni))
}

struct BranchPoint {
    t: f64,
    energy: f64,
    grad: Vec<f64>,
}

fn branch_point(x: &[f64], pd: &ProblemData, target: Branch) -> Option<BranchPoint> {
    let ray = Ray::new(x, pd).ok()?;
    let roots = ray.roots().ok()?;
    if roots.status != RootStatus::TwoRoots {
        return None;
    }
    let t = match target {
        Branch::Minus => roots.t_minus?,
        Branch::Plus => roots.t_plus?,
        Branch::Zero => return None,
    };
    let w: Vec<f64> = x.iter().map(|v| t * v).collect();
    let grad = energy_gradient(&w, pd).into_iter().map(|g| t * g).collect();
    Some(BranchPoint { t, energy: ray.energy(t), grad })
}

/// Returns `seed` when `Λ_n(seed) < μ`, otherwise the first admissible
/// blend `(1 − θ)seed/‖seed‖ + θ·rescue` for θ = 1/4, 1/2, 3/4, 1.
pub fn admissible_seed(pd: &ProblemData, seed: &[f64], rescue: Option<&[f64]>) -> Option<Vec<f64>> {
    let band = crate::fibering::degeneracy_band(pd.mu());
    let ok = |u: &[f64]| lambda_n(u, pd).is_ok_and(|l| l < pd.mu() - band);
    if ok(seed) {
        return Some(seed.to_vec());
    }
    let rescue = rescue?;
    let ns = luxemburg_norm(seed, pd);
    let nr = luxemburg_norm(rescue, pd);
    if !(ns > 0.0 && nr > 0.0) {
        return None;
    }
    for theta in [0.25, 0.5, 0.75, 1.0] {
        let blend: Vec<f64> = seed.iter().zip(rescue).map(|(a, b)| (1.0 - theta) * a / ns + theta * b / nr).collect();
        if ok(&blend) {
            return Some(blend);
        }
    }
    None
}

/// Minimizes `J^target` from one seed.
pub fn solve_from_seed(
    pd: &ProblemData,
    target: Branch,
    seed_index: usize,
    seed: &[f64],
    rescue: Option<&[f64]>,
    settings: &SolverSettings,
    norms: &[f64],
) -> Result<SolutionReport> {
    if target == Branch::Zero {
        return Err(Error::InvalidInput(String::from("branch minimization targets Minus or Plus")));
    }
    let start = admissible_seed(pd, seed, rescue).ok_or(Error::NoAdmissibleSeed)?;
    let objective = |x: &[f64]| branch_point(x, pd, target).map(|b| (b.energy, b.grad));
    let accept = |x: &[f64], f: f64, _: &[f64]| match branch_point(x, pd, target) {
        Some(b) => {
            let w: Vec<f64> = x.iter().map(|v| b.t * v).collect();
            residual_with(&w, pd, norms) <= settings.resid_rel * (1.0 + abs(f))
        }
        None => false,
    };
    let out = optim::minimize(objective, &start, &settings.lbfgs, accept);
    let b = branch_point(&out.x, pd, target).ok_or(Error::NoAdmissibleSeed)?;
    let field: Vec<f64> = out.x.iter().map(|v| b.t * v).collect();
    let norm = luxemburg_norm(&field, pd);
    if !(norm <= settings.norm_guard) {
        return Err(Error::ContinuationStall(format!("iterate norm {norm:e} exceeds guard")));
    }
    let mut report = report_at(pd, &out.x, b.t, target, norms, settings.resid_rel)?;
    report.iterations = out.iterations;
    report.converged = out.converged && report.residual_ok();
    report.seed_index = seed_index;
    report.field = field;
    Ok(report)
}

/// Builds a report for the Nehari point `t·u`.
pub fn report_at(pd: &ProblemData, u: &[f64], t: f64, target: Branch, norms: &[f64], resid_rel: f64) -> Result<SolutionReport> {
    let ray = Ray::new(u, pd)?;
    let detail = ray.classify(t)?;
    let field: Vec<f64> = u.iter().map(|v| t * v).collect();
    let br = energy_breakdown(&field, pd);
    let energy = br.energy(pd);
    let residual = residual_with(&field, pd, norms);
    let scale = detail.eps / 1e-8;
    Ok(SolutionReport {
        target,
        branch: detail.class,
        energy,
        residual,
        resid_tol: resid_rel * (1.0 + abs(energy)),
        t_projection: t,
        classification_margin: if scale > 0.0 { detail.second / scale } else { 0.0 },
        second_diag: detail.second,
        eps_cls: detail.eps,
        energy_scale: br.modular + pd.mu() / pd.q() * br.q_term + pd.lambda() / pd.p() * br.p_term,
        norm: luxemburg_norm(&field, pd),
        q_norm: powf(br.q_term, 1.0 / pd.q()),
        iterations: 0,
        converged: residual <= resid_rel * (1.0 + abs(energy)),
        seed_index: 0,
        certificates: Certificates::default(),
        field,
    })
}

/// Lowest energy among the successful reports; earlier seeds win ties.
pub fn merge_reports(reports: Vec<Result<SolutionReport>>) -> Result<SolutionReport> {
    let mut best: Option<SolutionReport> = None;
    let mut last_err = None;
    for r in reports {
        match r {
            Ok(rep) if rep.energy.is_finite() => {
                if best.as_ref().map_or(true, |b| rep.energy < b.energy) {
                    best = Some(rep);
                }
            }
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(Error::NoAdmissibleSeed))
}

/// Minimizes over the requested branch from every seed, sequentially.
pub fn minimize_branch(
    pd: &ProblemData,
    target: Branch,
    seeds: &[Vec<f64>],
    rescue: Option<&[f64]>,
    settings: &SolverSettings,
) -> Result<SolutionReport> {
    if pd.mu() <= 0.0 {
        return Err(Error::InvalidRegime(format!("mu = {} admits no Nehari points", pd.mu())));
    }
    let norms = unit_norms(pd);
    let reports =
        seeds.iter().enumerate().map(|(i, s)| solve_from_seed(pd, target, i, s, rescue, settings, &norms)).collect();
    merge_reports(reports)
}

/// Fills the D_μ and c_μ certificates of a report.
pub fn attach_bounds(report: &mut SolutionReport, pd: &ProblemData, s_q: f64) {
    let c = bounds::c_mu(pd, s_q);
    let tol = 1e-9;
    report.certificates.c_mu_bound = Some(c);
    report.certificates.c_mu_holds = Some(report.norm >= c * (1.0 - tol));
    if report.target == Branch::Minus {
        let d = bounds::d_mu(pd, s_q);
        report.certificates.d_mu_bound = Some(d);
        report.certificates.d_mu_holds = Some(report.energy >= d - tol * (1.0 + abs(d)));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergySign {
    Positive,
    Zero,
    Negative,
}

/// Expected versus observed sign of ℰ⁺ relative to μ̂_e.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignDiagnostic {
    pub mu_e_hat: f64,
    pub expected: EnergySign,
    pub observed: EnergySign,
    pub agrees: bool,
    /// Half-width of the μ-band around μ̂_e treated as μ = μ̂_e.
    pub mu_band: f64,
    /// |ℰ⁺| below this counts as zero.
    pub energy_band: f64,
}

/// Compares the sign of ℰ⁺ with the positive/zero/negative trichotomy
/// around μ̂_e. A disagreement is reported, not raised.
pub fn sign_diagnostics(pd: &ProblemData, report: &SolutionReport, mu_e_hat: f64, band_rel: f64) -> Result<SignDiagnostic> {
    if report.target != Branch::Plus {
        return Err(Error::InvalidInput(String::from("sign diagnostics apply to the Plus branch")));
    }
    let mu = pd.mu();
    let mu_band = band_rel * mu_e_hat;
    let expected = if abs(mu - mu_e_hat) <= mu_band {
        EnergySign::Zero
    } else if mu < mu_e_hat {
        EnergySign::Positive
    } else {
        EnergySign::Negative
    };
    // Energy changes at rate ‖u‖_{q,a}^q/q per unit μ, so the μ-band maps to
    // an energy band; 1e-8 of the term scale absorbs rounding.
    let energy_band = mu_band * powf(report.q_norm, pd.q()) / pd.q() + 1e-8 * report.energy_scale;
    let observed = if abs(report.energy) <= energy_band {
        EnergySign::Zero
    } else if report.energy > 0.0 {
        EnergySign::Positive
    } else {
        EnergySign::Negative
    };
    Ok(SignDiagnostic { mu_e_hat, expected, observed, agrees: expected == observed, mu_band, energy_band })
}

/// Sampled evidence that `𝒩_{λ,μ}` is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonexistenceCertificate {
    pub mu: f64,
    pub mu_n_hat: f64,
    pub samples: usize,
    pub min_lambda_n: f64,
    /// min over samples of Λ_n(u) − μ.
    pub margin: f64,
    pub worst_sample: usize,
    /// Every sampled ray reported no Nehari root.
    pub all_empty: bool,
    /// The sampled minimum of Q_n on a log grid never undercut Λ_n.
    pub grid_consistent: bool,
    pub note: String,
}

impl NonexistenceCertificate {
    pub fn positive(&self) -> bool {
        self.margin > 0.0 && self.all_empty && self.grid_consistent
    }
}

/// Samples `samples` random rays (after the given `extra` rays) and records
/// the smallest Λ_n(u) − μ.
pub fn nonexistence_check(
    pd: &ProblemData,
    mu_n_hat: f64,
    samples: usize,
    seed: u64,
    extra: &[Vec<f64>],
) -> Result<NonexistenceCertificate> {
    let mu = pd.mu();
    if mu >= mu_n_hat {
        return Err(Error::InvalidRegime(format!("mu = {mu} is not below mu_n = {mu_n_hat}")));
    }
    let grid = *pd.grid();
    let mut rng = seeds::rng(seed);
    let mut rays: Vec<Vec<f64>> = extra.to_vec();
    for k in 0..samples {
        let f = if k % 2 == 0 {
            seeds::random_bumps(&grid, &mut rng, 1 + k % 4, 0.0)
        } else {
            seeds::random_nodal(&grid, &mut rng)
        };
        rays.push(f.into_values());
    }
    let (mut min_l, mut worst) = (f64::INFINITY, 0);
    let (mut all_empty, mut grid_ok) = (true, true);
    for (k, u) in rays.iter().enumerate() {
        let ray = Ray::new(u, pd)?;
        let (t, l) = ray.lambda_n()?;
        let roots = ray.roots_from(t, l)?;
        all_empty &= roots.status == RootStatus::Empty;
        let grid_min = math::log_space(t * 1e-3, t * 1e3, 61).map(|s| ray.q_n(s)).fold(f64::INFINITY, f64::min);
        grid_ok &= grid_min >= l * (1.0 - 1e-12);
        if l < min_l {
            min_l = l;
            worst = k;
        }
    }
    Ok(NonexistenceCertificate {
        mu,
        mu_n_hat,
        samples: rays.len(),
        min_lambda_n: min_l,
        margin: min_l - mu,
        worst_sample: worst,
        all_empty,
        grid_consistent: grid_ok,
        note: String::from("sampled certificate over finitely many rays, not a proof"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum ContinuationTarget {
    /// μ_k = μ̂_n(1 + 2^{−k}) at fixed λ.
    MuToMuN { mu_n_hat: f64 },
    /// λ_k = λ_*(1 − 2^{−k}) at fixed μ.
    LambdaToLambdaStar { lambda_star: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationStep {
    pub k: usize,
    pub lambda: f64,
    pub mu: f64,
    pub energy: f64,
    pub residual: f64,
    pub resid_tol: f64,
    pub branch: Branch,
    pub norm: f64,
    /// Nehari roots on the ray of the step's minimizer.
    pub t_minus: f64,
    pub t_plus: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationReport {
    pub steps: Vec<ContinuationStep>,
    pub final_report: SolutionReport,
    pub gaps_decreasing: bool,
}

/// Follows the 𝒩⁻ minimizer along a parameter sequence approaching the
/// degenerate regime, warm-starting each solve from the previous one.
///
/// For [`ContinuationTarget::MuToMuN`] the final report sits at μ = μ̂_n on
/// the ray through `anchor` (the Λ_n minimizer), where the two roots merge.
pub fn degenerate_continuation(
    pd: &ProblemData,
    target: ContinuationTarget,
    steps: usize,
    anchor: &[f64],
    settings: &SolverSettings,
) -> Result<ContinuationReport> {
    if steps < 3 {
        return Err(Error::InvalidInput(format!("continuation needs at least 3 steps, got {steps}")));
    }
    let norms = unit_norms(pd);
    let mut out: Vec<ContinuationStep> = Vec::with_capacity(steps);
    let mut prev: Option<Vec<f64>> = None;
    let mut last_report = None;
    for k in 1..=steps {
        let frac = powf(2.0, -(k as f64));
        let pk = match target {
            ContinuationTarget::MuToMuN { mu_n_hat } => pd.with_mu(mu_n_hat * (1.0 + frac)),
            ContinuationTarget::LambdaToLambdaStar { lambda_star } => pd.with_lambda(lambda_star * (1.0 - frac)),
        };
        let mut seeds = Vec::new();
        if let Some(p) = &prev {
            seeds.push(p.clone());
        }
        seeds.push(anchor.to_vec());
        let reports =
            seeds.iter().enumerate().map(|(i, s)| solve_from_seed(&pk, Branch::Minus, i, s, Some(anchor), settings, &norms)).collect();
        let rep = merge_reports(reports)?;
        if let Some(last) = out.last() {
            if rep.norm > 10.0 * last.norm || rep.norm < last.norm / 10.0 {
                return Err(Error::ContinuationStall(format!(
                    "norm jumped from {:e} to {:e} at step {k}",
                    last.norm, rep.norm
                )));
            }
        }
        let roots = Ray::new(&rep.field, &pk)?.roots()?;
        let (tm, tp) = (roots.t_minus.unwrap_or(f64::NAN), roots.t_plus.unwrap_or(f64::NAN));
        out.push(ContinuationStep {
            k,
            lambda: pk.lambda(),
            mu: pk.mu(),
            energy: rep.energy,
            residual: rep.residual,
            resid_tol: rep.resid_tol,
            branch: rep.branch,
            norm: rep.norm,
            t_minus: tm,
            t_plus: tp,
            gap: abs(tp - tm),
        });
        prev = Some(rep.field.clone());
        last_report = Some(rep);
    }
    let gaps_decreasing = out.windows(2).all(|w| w[1].gap < w[0].gap);
    let final_report = match target {
        ContinuationTarget::MuToMuN { mu_n_hat } => {
            let pn = pd.with_mu(mu_n_hat);
            let ray = Ray::new(anchor, &pn)?;
            let roots = ray.roots()?;
            let t = match roots.status {
                RootStatus::Degenerate => roots.t_crit,
                _ => {
                    return Err(Error::InvalidRegime(format!(
                        "anchor ray is not degenerate at mu_n: Lambda_n = {}",
                        roots.lambda_n
                    )))
                }
            };
            report_at(&pn, anchor, t, Branch::Zero, &norms, settings.resid_rel)?
        }
        ContinuationTarget::LambdaToLambdaStar { .. } => last_report.ok_or(Error::NoAdmissibleSeed)?,
    };
    Ok(ContinuationReport { steps: out, final_report, gaps_decreasing })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "direction", rename_all = "snake_case")]
pub enum SweepDirection {
    /// λ decreases through the given values with μ = mu_factor · μ̂_n(λ).
    LambdaToZero { mu_factor: f64 },
    /// μ = value · μ̂_n(λ) at the base λ for increasing values.
    MuToInfinity,
}

/// Both branch solutions at one (λ, μ) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub mu: f64,
    pub mu_n_hat: f64,
    pub mu_e_hat: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub norm_u: f64,
    pub norm_v: f64,
    pub q_norm_u: f64,
    pub resid_minus: f64,
    pub resid_plus: f64,
    pub tol_minus: f64,
    pub tol_plus: f64,
    pub class_minus: Branch,
    pub class_plus: Branch,
    pub converged: bool,
    /// Lower bound on ‖v‖ that grows like λ^{−1/(p−m)}.
    pub plus_norm_floor: f64,
}

/// Solves both branches at `(λ, μ)` seeding from the extremal minimizers
/// followed by `starts`.
pub fn sweep_cell(
    base: &ProblemData,
    mu: f64,
    ex: &crate::extremal::ExtremalResult,
    starts: &[Vec<f64>],
    settings: &SolverSettings,
    s_p: f64,
) -> Result<SweepRow> {
    let pd = base.with_lambda(ex.lambda).with_mu(mu);
    let mut seeds = Vec::with_capacity(starts.len() + 2);
    seeds.push(ex.minimizer_n.clone());
    seeds.push(ex.minimizer_e.clone());
    seeds.extend_from_slice(starts);
    let u = minimize_branch(&pd, Branch::Minus, &seeds, Some(&ex.minimizer_n), settings)?;
    let v = minimize_branch(&pd, Branch::Plus, &seeds, Some(&ex.minimizer_n), settings)?;
    Ok(SweepRow {
        lambda: ex.lambda,
        mu,
        mu_n_hat: ex.mu_n,
        mu_e_hat: ex.mu_e,
        e_minus: u.energy,
        e_plus: v.energy,
        norm_u: u.norm,
        norm_v: v.norm,
        q_norm_u: u.q_norm,
        resid_minus: u.residual,
        resid_plus: v.residual,
        tol_minus: u.resid_tol,
        tol_plus: v.resid_tol,
        class_minus: u.branch,
        class_plus: v.branch,
        converged: u.converged && v.converged,
        plus_norm_floor: bounds::plus_norm_floor(&pd, s_p),
    })
}

/// Trend checks over a sweep; `None` where a check does not apply to the
/// direction.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepTrends {
    pub norm_v_increasing: Option<bool>,
    pub norm_v_above_floor: Option<bool>,
    pub e_minus_decreasing: Option<bool>,
    pub e_minus_positive: Option<bool>,
    pub norm_u_decreasing: Option<bool>,
    pub e_plus_strictly_decreasing: Option<bool>,
    pub all_converged: bool,
}

impl SweepTrends {
    pub fn all_hold(&self) -> bool {
        self.all_converged
            && [
                self.norm_v_increasing,
                self.norm_v_above_floor,
                self.e_minus_decreasing,
                self.e_minus_positive,
                self.norm_u_decreasing,
                self.e_plus_strictly_decreasing,
            ]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

pub fn sweep_trends(direction: &SweepDirection, rows: &[SweepRow]) -> SweepTrends {
    let pairs = || rows.windows(2).map(|w| (&w[0], &w[1]));
    let mut t = SweepTrends { all_converged: rows.iter().all(|r| r.converged), ..SweepTrends::default() };
    match direction {
        SweepDirection::LambdaToZero { .. } => {
            t.norm_v_increasing = Some(pairs().all(|(a, b)| b.norm_v > a.norm_v));
            t.norm_v_above_floor = Some(rows.iter().all(|r| r.norm_v >= r.plus_norm_floor));
        }
        SweepDirection::MuToInfinity => {
            t.e_minus_decreasing = Some(pairs().all(|(a, b)| b.e_minus <= a.e_minus));
            t.e_minus_positive = Some(rows.iter().all(|r| r.e_minus > 0.0));
            t.norm_u_decreasing = Some(pairs().all(|(a, b)| b.norm_u < a.norm_u));
            t.e_plus_strictly_decreasing = Some(pairs().all(|(a, b)| b.e_plus < a.e_plus));
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub direction: SweepDirection,
    pub rows: Vec<SweepRow>,
    pub trends: SweepTrends,
}

/// Runs a sweep sequentially. For λ → 0 every cell first estimates μ̂_n(λ);
/// for μ → ∞ the values are multipliers of μ̂_n at the base λ.
pub fn asymptotic_sweep(
    base: &ProblemData,
    direction: SweepDirection,
    values: &[f64],
    ext_settings: &crate::extremal::ExtremalSettings,
    settings: &SolverSettings,
    starts: &[Vec<f64>],
    s_p: f64,
) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(values.len());
    match direction {
        SweepDirection::LambdaToZero { mu_factor } => {
            if values.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidInput(String::from("lambda values must decrease toward 0")));
            }
            for &lam in values {
                let pd = base.with_lambda(lam);
                let ex = crate::extremal::extremal(&pd, ext_settings, starts, 0.0)?;
                rows.push(sweep_cell(base, mu_factor * ex.mu_n, &ex, starts, settings, s_p)?);
            }
        }
        SweepDirection::MuToInfinity => {
            if values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidInput(String::from("mu multipliers must increase")));
            }
            let ex = crate::extremal::extremal(base, ext_settings, starts, 0.0)?;
            for &f in values {
                rows.push(sweep_cell(base, f * ex.mu_n, &ex, starts, settings, s_p)?);
            }
        }
    }
    let trends = sweep_trends(&direction, &rows);
    Ok(SweepTable { direction, rows, trends })
}
