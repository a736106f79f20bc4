//! Minimal Rayleigh values Λ_n(u) = min_t Q_n(t), Λ_e(u) = min_t Q_e(t) and
//! the extremal parameters μ_n(λ) = inf Λ_n, μ_e(λ) = inf Λ_e.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibering::Ray;
use crate::functionals::{
    luxemburg_norm, modular_diag_gradient, modular_gradient, p_term_gradient, q_term, q_term_gradient,
    ProblemData,
};
use crate::optim::{self, LbfgsSettings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    /// Λ_n, the Nehari quotient.
    N,
    /// Λ_e, the zero-energy quotient.
    E,
}

pub fn lambda_n(u: &[f64], pd: &ProblemData) -> Result<f64> {
    Ok(Ray::new(u, pd)?.lambda_n()?.1)
}

pub fn lambda_e(u: &[f64], pd: &ProblemData) -> Result<f64> {
    Ok(Ray::new(u, pd)?.lambda_e()?.1)
}

/// Λ and its gradient. With `t` the ray minimizer and `w = tu`, the envelope
/// theorem gives `∇Λ(u) = t·∇R(w)`.
pub fn lambda_with_gradient(u: &[f64], pd: &ProblemData, which: Which) -> Result<(f64, Vec<f64>)> {
    let ray = Ray::new(u, pd)?;
    let (t, value) = match which {
        Which::N => ray.lambda_n()?,
        Which::E => ray.lambda_e()?,
    };
    let w: Vec<f64> = u.iter().map(|x| t * x).collect();
    let c = q_term(&w, pd);
    let gc = q_term_gradient(&w, pd);
    let gp = p_term_gradient(&w, pd);
    let lam = pd.lambda();
    let top: Vec<f64> = match which {
        Which::N => modular_diag_gradient(&w, pd).iter().zip(&gp).map(|(a, b)| a + lam * b).collect(),
        Which::E => {
            let (q, p) = (pd.q(), pd.p());
            modular_gradient(&w, pd).iter().zip(&gp).map(|(a, b)| q * (a + lam / p * b)).collect()
        }
    };
    let grad = top.iter().zip(&gc).map(|(a, b)| t * (a - value * b) / c).collect();
    Ok((value, grad))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSettings {
    pub restarts: usize,
    pub lbfgs: LbfgsSettings,
    pub seed: u64,
}

impl Default for ExtremalSettings {
    fn default() -> Self {
        Self { restarts: 4, lbfgs: LbfgsSettings::default(), seed: 7 }
    }
}

/// One descent from one start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentRun {
    pub start: usize,
    pub value: f64,
    /// Minimizer rescaled to unit Luxemburg norm.
    pub minimizer: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Descends Λ_which from `start`. Starts without a ray report `+∞`.
pub fn descend(pd: &ProblemData, which: Which, start_index: usize, start: &[f64], settings: &LbfgsSettings) -> DescentRun {
    let objective = |x: &[f64]| lambda_with_gradient(x, pd, which).ok();
    let out = optim::minimize(objective, start, settings, |_, _, _| true);
    let norm = luxemburg_norm(&out.x, pd);
    let minimizer = if norm > 0.0 { out.x.iter().map(|v| v / norm).collect() } else { out.x };
    DescentRun { start: start_index, value: out.value, minimizer, iterations: out.iterations, converged: out.converged }
}

/// Best of several descents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRun {
    pub which: Which,
    pub value: f64,
    pub minimizer: Vec<f64>,
    /// Max − min of the finite per-start values.
    pub spread: f64,
    pub per_start: Vec<f64>,
}

/// Reduces descents by minimum value, first index winning ties.
pub fn merge_runs(which: Which, runs: &[DescentRun]) -> Result<ExtremalRun> {
    let mut best: Option<&DescentRun> = None;
    for r in runs.iter().filter(|r| r.value.is_finite()) {
        if best.map_or(true, |b| r.value < b.value || (r.value == b.value && r.start < b.start)) {
            best = Some(r);
        }
    }
    let best = best.ok_or(Error::NoAdmissibleSeed)?;
    let finite: Vec<f64> = runs.iter().map(|r| r.value).filter(|v| v.is_finite()).collect();
    let hi = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ExtremalRun {
        which,
        value: best.value,
        minimizer: best.minimizer.clone(),
        spread: hi - best.value,
        per_start: runs.iter().map(|r| r.value).collect(),
    })
}

/// Multistart minimization of Λ_which, run sequentially.
pub fn minimize_extremal(pd: &ProblemData, which: Which, settings: &ExtremalSettings, starts: &[Vec<f64>]) -> Result<ExtremalRun> {
    if starts.len() < 3 {
        return Err(Error::InvalidInput(alloc::format!("need at least 3 starts, got {}", starts.len())));
    }
    let runs: Vec<DescentRun> =
        starts.iter().enumerate().map(|(i, s)| descend(pd, which, i, s, &settings.lbfgs)).collect();
    merge_runs(which, &runs)
}

/// Estimates of μ_n(λ) and μ_e(λ) with their minimizers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub lambda: f64,
    pub mu_n: f64,
    pub mu_e: f64,
    pub minimizer_n: Vec<f64>,
    pub minimizer_e: Vec<f64>,
    pub spread_n: f64,
    pub spread_e: f64,
    pub multistart_spread: f64,
    /// Analytic positive floor for Λ_n.
    pub lower_floor: f64,
}

impl ExtremalResult {
    pub fn from_runs(lambda: f64, n: ExtremalRun, e: ExtremalRun, lower_floor: f64) -> Self {
        Self {
            lambda,
            mu_n: n.value,
            mu_e: e.value,
            spread_n: n.spread,
            spread_e: e.spread,
            multistart_spread: n.spread.max(e.spread),
            minimizer_n: n.minimizer,
            minimizer_e: e.minimizer,
            lower_floor,
        }
    }

    /// `0 < lower_floor ≤ μ̂_n < μ̂_e`.
    pub fn ordering_holds(&self) -> bool {
        self.lower_floor > 0.0 && self.lower_floor <= self.mu_n && self.mu_n < self.mu_e
    }
}

pub fn extremal(pd: &ProblemData, settings: &ExtremalSettings, starts: &[Vec<f64>], lower_floor: f64) -> Result<ExtremalResult> {
    let n = minimize_extremal(pd, Which::N, settings, starts)?;
    let e = minimize_extremal(pd, Which::E, settings, starts)?;
    Ok(ExtremalResult::from_runs(pd.lambda(), n, e, lower_floor))
}

/// One [`ExtremalResult`] per λ, each warm-started with the previous
/// minimizers appended to the start set.
pub fn extremal_curve<F: Fn(&ProblemData) -> f64>(
    base: &ProblemData,
    lambdas: &[f64],
    settings: &ExtremalSettings,
    starts: &[Vec<f64>],
    floor: F,
) -> Result<Vec<ExtremalResult>> {
    let mut out: Vec<ExtremalResult> = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        if !(lam > 0.0) {
            return Err(Error::InvalidInput(alloc::format!("lambda must be positive, got {lam}")));
        }
        let pd = base.with_lambda(lam);
        let mut s = starts.to_vec();
        if let Some(prev) = out.last() {
            s.push(prev.minimizer_n.clone());
            s.push(prev.minimizer_e.clone());
        }
        let res = extremal(&pd, settings, &s, floor(&pd))?;
        out.push(res);
    }
    Ok(out)
}
