//! N-functions Φ(t) = ∫₀ᵗ φ(τ)τ dτ, their Legendre conjugates, Sobolev
//! conjugates and the structural hypotheses the rest of the crate relies on.
//!
//! Internally a law is described through its flux `F(t) = φ(t)t`, which is
//! what the operator actually applies to Hölder quotients. `flux_slope` is
//! `F′ = (φ(t)t)′` and `flux_curv` is `F″`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{self, abs, exp, ln, ln1p, powf};

/// Tag identifying the family of a [`GrowthLaw`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawKind {
    /// Φ(t) = |t|^p / p
    Power { p: f64 },
    /// Φ(t) = |t|^p / p + |t|^q / q
    PowerSum { p: f64, q: f64 },
    /// Φ(t) = |t|^p ln(1 + |t|)
    PowerLog { p: f64 },
    /// Tabulated φ with monotone cubic interpolation of φ(t)t.
    Custom,
}

/// Tabulated `(t, φ(t), φ′(t))` rows describing a custom law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawTable {
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_prime: Vec<f64>,
}

#[derive(Debug)]
struct Tabulated {
    t: Vec<f64>,
    flux: Vec<f64>,
    slope: Vec<f64>,
    cumulative: Vec<f64>,
    left_exp: f64,
    right_exp: f64,
}

#[derive(Clone, Debug)]
enum Shape {
    Power(f64),
    PowerSum(f64, f64),
    PowerLog(f64),
    Custom(Arc<Tabulated>),
}

/// An N-function with declared growth indices `ℓ ≤ m`.
#[derive(Clone, Debug)]
pub struct GrowthLaw {
    shape: Shape,
    ell: f64,
    m: f64,
}

/// `(Φ(t), φ(t), φ′(t))` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawValues {
    #[serde(rename = "Phi")]
    pub big_phi: f64,
    pub phi: f64,
    pub phi_prime: f64,
}

impl GrowthLaw {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidInput(format!("power exponent must exceed 1, got {p}")));
        }
        Ok(Self { shape: Shape::Power(p), ell: p, m: p })
    }

    pub fn power_sum(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && q >= p && q.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "power-sum exponents need 1 < p <= q, got ({p}, {q})"
            )));
        }
        Ok(Self { shape: Shape::PowerSum(p, q), ell: p, m: q })
    }

    pub fn power_log(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidInput(format!("power-log exponent must exceed 1, got {p}")));
        }
        Ok(Self { shape: Shape::PowerLog(p), ell: p, m: p + 1.0 })
    }

    /// Builds a tabulated law. Missing growth indices are estimated from the
    /// ratio `tφ(t)t/Φ(t)` over the table range widened by three decades and
    /// from the flux curvature ratio.
    pub fn custom(table: &LawTable, ell: Option<f64>, m: Option<f64>) -> Result<Self> {
        let tab = Tabulated::new(table)?;
        let mut law = Self { shape: Shape::Custom(Arc::new(tab)), ell: 0.0, m: 0.0 };
        let (lo, hi) = match &law.shape {
            Shape::Custom(t) => (t.t[0] * 1e-3, t.t[t.t.len() - 1] * 1e3),
            _ => unreachable!(),
        };
        let samples: Vec<f64> = math::log_space(lo, hi, 241).collect();
        let (mut el, mut em) = law.ratio_range(&samples);
        // (φ3) bounds the flux curvature by the same indices, and it can
        // approach its limits faster than the Δ₂ ratio does.
        for t in default_samples() {
            let c = law.curvature_ratio(t) + 2.0;
            if c.is_finite() {
                el = el.min(c);
                em = em.max(c);
            }
        }
        law.ell = ell.unwrap_or(el);
        law.m = m.unwrap_or(em);
        if !(law.ell > 1.0 && law.m >= law.ell) {
            return Err(Error::IndexViolation(format!(
                "custom law indices ({}, {}) must satisfy 1 < ell <= m",
                law.ell, law.m
            )));
        }
        Ok(law)
    }

    pub fn kind(&self) -> LawKind {
        match self.shape {
            Shape::Power(p) => LawKind::Power { p },
            Shape::PowerSum(p, q) => LawKind::PowerSum { p, q },
            Shape::PowerLog(p) => LawKind::PowerLog { p },
            Shape::Custom(_) => LawKind::Custom,
        }
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn m_idx(&self) -> f64 {
        self.m
    }

    /// True when the law is a pure power, so Φ(ct) = c^ℓ Φ(t).
    pub fn is_homogeneous(&self) -> bool {
        matches!(self.shape, Shape::Power(_))
    }

    /// Φ(|t|).
    pub fn big_phi(&self, t: f64) -> f64 {
        let t = abs(t);
        if t == 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Power(p) => powf(t, *p) / p,
            Shape::PowerSum(p, q) => powf(t, *p) / p + powf(t, *q) / q,
            Shape::PowerLog(p) => powf(t, *p) * ln1p(t),
            Shape::Custom(tab) => tab.big_phi(t),
        }
    }

    /// F(t) = φ(t)t for t ≥ 0.
    pub fn flux(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Power(p) => powf(t, p - 1.0),
            Shape::PowerSum(p, q) => powf(t, p - 1.0) + powf(t, q - 1.0),
            Shape::PowerLog(p) => {
                let tp = powf(t, *p);
                p * tp / t * ln1p(t) + tp / (1.0 + t)
            }
            Shape::Custom(tab) => tab.flux(t),
        }
    }

    /// F′(t) = (φ(t)t)′ for t > 0.
    pub fn flux_slope(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Power(p) => (p - 1.0) * powf(t, p - 2.0),
            Shape::PowerSum(p, q) => (p - 1.0) * powf(t, p - 2.0) + (q - 1.0) * powf(t, q - 2.0),
            Shape::PowerLog(p) => {
                let tp = powf(t, *p);
                let op = 1.0 + t;
                p * (p - 1.0) * tp / (t * t) * ln1p(t) + 2.0 * p * tp / t / op
                    - tp / (op * op)
            }
            Shape::Custom(tab) => tab.slope_at(t),
        }
    }

    /// F″(t) when available in closed form.
    pub fn flux_curv(&self, t: f64) -> Option<f64> {
        match &self.shape {
            Shape::Power(p) => Some((p - 1.0) * (p - 2.0) * powf(t, p - 3.0)),
            Shape::PowerSum(p, q) => Some(
                (p - 1.0) * (p - 2.0) * powf(t, p - 3.0) + (q - 1.0) * (q - 2.0) * powf(t, q - 3.0),
            ),
            Shape::PowerLog(p) => {
                let tp = powf(t, *p);
                let op = 1.0 + t;
                Some(
                    p * (p - 1.0) * (p - 2.0) * tp / (t * t * t) * ln1p(t)
                        + 3.0 * p * (p - 1.0) * tp / (t * t) / op
                        - 3.0 * p * tp / t / (op * op)
                        + 2.0 * tp / (op * op * op),
                )
            }
            Shape::Custom(_) => None,
        }
    }

    /// F″(t), falling back to a central difference of F′ with step
    /// `1e-5·max(1, t)` (capped at t/2) when no closed form exists.
    pub fn flux_curv_or_fd(&self, t: f64) -> f64 {
        self.flux_curv(t).unwrap_or_else(|| {
            let h = (1e-5 * t.max(1.0)).min(0.5 * t);
            (self.flux_slope(t + h) - self.flux_slope(t - h)) / (2.0 * h)
        })
    }

    /// φ(t) for t > 0.
    pub fn phi(&self, t: f64) -> f64 {
        self.flux(t) / t
    }

    /// φ′(t) = (F′(t) − φ(t))/t.
    pub fn phi_prime(&self, t: f64) -> f64 {
        (self.flux_slope(t) - self.phi(t)) / t
    }

    /// φ″(t) = (F″(t) − 2φ′(t))/t when F″ is known in closed form.
    pub fn phi_second(&self, t: f64) -> Option<f64> {
        self.flux_curv(t).map(|c| (c - 2.0 * self.phi_prime(t)) / t)
    }

    /// The triple `(Φ(t), φ(t), φ′(t))`.
    pub fn eval(&self, t: f64) -> Result<LawValues> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveInput(t));
        }
        Ok(LawValues { big_phi: self.big_phi(t), phi: self.phi(t), phi_prime: self.phi_prime(t) })
    }

    /// Ratio `φ(t)t²/Φ(t)`.
    pub fn delta2_ratio(&self, t: f64) -> f64 {
        t * self.flux(t) / self.big_phi(t)
    }

    /// Ratio `(φ(t)t)″t/(φ(t)t)′`.
    pub fn curvature_ratio(&self, t: f64) -> f64 {
        t * self.flux_curv_or_fd(t) / self.flux_slope(t)
    }

    fn ratio_range(&self, samples: &[f64]) -> (f64, f64) {
        samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            let r = self.delta2_ratio(t);
            (lo.min(r), hi.max(r))
        })
    }
}

impl Tabulated {
    fn new(table: &LawTable) -> Result<Self> {
        let n = table.t.len();
        if n < 3 || table.phi.len() != n || table.phi_prime.len() != n {
            return Err(Error::InvalidInput(String::from(
                "custom law table needs at least 3 rows of (t, phi, phi_prime)",
            )));
        }
        for k in 0..n {
            let (t, p, dp) = (table.t[k], table.phi[k], table.phi_prime[k]);
            if !(t > 0.0 && p > 0.0 && t.is_finite() && p.is_finite() && dp.is_finite()) {
                return Err(Error::InvalidInput(format!("custom law row {k} is not admissible")));
            }
            if k > 0 && t <= table.t[k - 1] {
                return Err(Error::InvalidInput(String::from("custom law t column must increase")));
            }
        }
        let t = table.t.clone();
        let flux: Vec<f64> = (0..n).map(|k| table.phi[k] * t[k]).collect();
        let mut slope: Vec<f64> =
            (0..n).map(|k| (table.phi[k] + t[k] * table.phi_prime[k]).max(0.0)).collect();
        let secants: Vec<f64> = (0..n - 1).map(|k| (flux[k + 1] - flux[k]) / (t[k + 1] - t[k])).collect();
        if secants.iter().any(|d| *d <= 0.0) {
            return Err(Error::InvalidInput(String::from(
                "custom law: phi(t)t must be strictly increasing",
            )));
        }
        // Fritsch–Carlson limiter keeps the interpolant of F monotone.
        for k in 0..n - 1 {
            let a = slope[k] / secants[k];
            let b = slope[k + 1] / secants[k];
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / math::sqrt(r);
                slope[k] = tau * a * secants[k];
                slope[k + 1] = tau * b * secants[k];
            }
        }
        let log_exponent = |i: usize, j: usize| ln(flux[j] / flux[i]) / ln(t[j] / t[i]);
        let left_exp = {
            let e = t[0] * slope[0] / flux[0];
            if e > 0.0 { e } else { log_exponent(0, 1) }
        };
        let right_exp = {
            let e = t[n - 1] * slope[n - 1] / flux[n - 1];
            if e > 0.0 { e } else { log_exponent(n - 2, n - 1) }
        };
        let mut cumulative = Vec::with_capacity(n);
        cumulative.push(flux[0] * t[0] / (left_exp + 1.0));
        for k in 0..n - 1 {
            let h = t[k + 1] - t[k];
            let piece = h * (flux[k] + flux[k + 1]) / 2.0 + h * h * (slope[k] - slope[k + 1]) / 12.0;
            cumulative.push(cumulative[k] + piece);
        }
        Ok(Self { t, flux, slope, cumulative, left_exp, right_exp })
    }

    fn locate(&self, t: f64) -> usize {
        match self.t.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(k) => k.min(self.t.len() - 2),
            Err(k) => k - 1,
        }
    }

    fn flux(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.flux[0] * powf(t / self.t[0], self.left_exp);
        }
        if t >= self.t[n - 1] {
            return self.flux[n - 1] * powf(t / self.t[n - 1], self.right_exp);
        }
        let k = self.locate(t);
        let h = self.t[k + 1] - self.t[k];
        let s = (t - self.t[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.flux[k]
            + (s3 - 2.0 * s2 + s) * h * self.slope[k]
            + (-2.0 * s3 + 3.0 * s2) * self.flux[k + 1]
            + (s3 - s2) * h * self.slope[k + 1]
    }

    fn slope_at(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.left_exp * self.flux(t) / t;
        }
        if t >= self.t[n - 1] {
            return self.right_exp * self.flux(t) / t;
        }
        let k = self.locate(t);
        let h = self.t[k + 1] - self.t[k];
        let s = (t - self.t[k]) / h;
        let s2 = s * s;
        (6.0 * s2 - 6.0 * s) / h * self.flux[k]
            + (3.0 * s2 - 4.0 * s + 1.0) * self.slope[k]
            + (-6.0 * s2 + 6.0 * s) / h * self.flux[k + 1]
            + (3.0 * s2 - 2.0 * s) * self.slope[k + 1]
    }

    fn big_phi(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.cumulative[0] * powf(t / self.t[0], self.left_exp + 1.0);
        }
        if t >= self.t[n - 1] {
            let tn = self.t[n - 1];
            let e = self.right_exp + 1.0;
            return self.cumulative[n - 1] + self.flux[n - 1] * tn / e * (powf(t / tn, e) - 1.0);
        }
        let k = self.locate(t);
        let h = self.t[k + 1] - self.t[k];
        let s = (t - self.t[k]) / h;
        let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
        self.cumulative[k]
            + h * ((s4 / 2.0 - s3 + s) * self.flux[k]
                + (s4 / 4.0 - 2.0 * s3 / 3.0 + s2 / 2.0) * h * self.slope[k]
                + (-s4 / 2.0 + s3) * self.flux[k + 1]
                + (s4 / 4.0 - s3 / 3.0) * h * self.slope[k + 1])
    }
}

/// `(ξ⁻(t), ξ⁺(t)) = (min(t^ℓ, t^m), max(t^ℓ, t^m))`.
pub fn xi_bounds(t: f64, ell: f64, m: f64) -> (f64, f64) {
    let (a, b) = (powf(t, ell), powf(t, m));
    (a.min(b), a.max(b))
}

/// Default sample grid used by the hypothesis checks: 241 points on [1e-6, 1e6].
pub fn default_samples() -> Vec<f64> {
    math::log_space(1e-6, 1e6, 241).collect()
}

/// Sampled infimum and supremum of `φ(t)t²/Φ(t)`, checked against the
/// declared indices.
pub fn growth_indices(law: &GrowthLaw, samples: &[f64]) -> Result<(f64, f64)> {
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(0.0, f64::max);
    if !(lo > 0.0 && lo <= 1.0 && hi >= 1.0 && hi / lo >= 1e6) {
        return Err(Error::InvalidInput(String::from(
            "sample grid must be positive and span at least six decades around 1",
        )));
    }
    let (l, m) = law.ratio_range(samples);
    let tol = 1e-9 * law.m;
    if l < law.ell - tol || m > law.m + tol {
        return Err(Error::IndexViolation(format!(
            "sampled ratio range [{l}, {m}] leaves declared [{}, {}]",
            law.ell, law.m
        )));
    }
    Ok((l, m))
}

/// Legendre conjugate Φ̃(t) = sup_σ {tσ − Φ(σ)}, attained where φ(σ)σ = t.
pub fn conjugate(law: &GrowthLaw, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NonPositiveInput(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut f = |s: f64| law.flux(s) - t;
    let (lo, hi) = math::bracket_increasing(&mut f, 1.0, 4.0, 400)?;
    let sigma = math::bisect_increasing(&mut f, lo, hi, 1e-15, 400);
    Ok((t * sigma - law.big_phi(sigma)).max(0.0))
}

/// Sobolev conjugate Φ_* = Φ ∘ H⁻¹ with
/// `H(t) = (∫₀ᵗ (τ/Φ(τ))^{s/(N−s)} dτ)^{(N−s)/N}`.
#[derive(Clone, Debug)]
pub struct SobolevConjugate {
    law: GrowthLaw,
    s: f64,
    dim: f64,
    pub ell_star: f64,
    pub m_star: f64,
}

pub fn sobolev_conjugate(law: &GrowthLaw, s: f64, dim: usize) -> Result<SobolevConjugate> {
    let n = dim as f64;
    let gap = n - s * law.m;
    if gap <= 0.0 {
        return Err(Error::CriticalExponentUndefined(gap));
    }
    let sc = SobolevConjugate {
        law: law.clone(),
        s,
        dim: n,
        ell_star: n * law.ell / (n - s * law.ell),
        m_star: n * law.m / gap,
    };
    let samples: Vec<f64> = math::log_space(1e-3, 1e3, 25).collect();
    sc.verify_index_bounds(&samples)?;
    Ok(sc)
}

impl SobolevConjugate {
    fn exponent(&self) -> f64 {
        self.s / (self.dim - self.s)
    }

    fn integrand(&self, tau: f64) -> f64 {
        powf(tau / self.law.big_phi(tau), self.exponent())
    }

    /// ∫₀^τ (σ/Φ(σ))^{s/(N−s)} dσ, via σ = e^{−y} with a power-law tail.
    pub fn base_integral(&self, tau: f64) -> f64 {
        let y0 = -ln(tau);
        let span = 60.0;
        let mut g = |y: f64| {
            let sigma = exp(-y);
            self.integrand(sigma) * sigma
        };
        let body = math::integrate(&mut g, y0, y0 + span, 1e-11);
        let (ga, gb) = (g(y0 + span - 1.0), g(y0 + span));
        let rate = ln(ga / gb);
        let tail = if rate > 0.0 { gb / rate } else { f64::INFINITY };
        body + tail
    }

    pub fn h(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        powf(self.base_integral(tau), (self.dim - self.s) / self.dim)
    }

    pub fn h_inv(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let mut f = |t: f64| self.h(t) - x;
        let (lo, hi) = math::bracket_increasing(&mut f, 1.0, 4.0, 200)?;
        Ok(math::bisect_increasing(&mut f, lo, hi, 1e-13, 300))
    }

    pub fn phi_star(&self, x: f64) -> Result<f64> {
        Ok(self.law.big_phi(self.h_inv(x)?))
    }

    /// `tΦ_*′(t)/Φ_*(t)` at `t = H(τ)`, written in the variable τ.
    pub fn index_ratio_at(&self, tau: f64) -> f64 {
        let i = self.base_integral(tau);
        self.dim * i * self.law.flux(tau)
            / ((self.dim - self.s) * self.integrand(tau) * self.law.big_phi(tau))
    }

    /// Checks `ℓ_s^* ≤ tΦ_*′/Φ_* ≤ m_s^*` on the given τ samples.
    pub fn verify_index_bounds(&self, samples: &[f64]) -> Result<(f64, f64)> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &tau in samples {
            let r = self.index_ratio_at(tau);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let tol = 1e-6 * self.m_star;
        if lo < self.ell_star - tol || hi > self.m_star + tol {
            return Err(Error::IndexViolation(format!(
                "Sobolev conjugate index range [{lo}, {hi}] leaves [{}, {}]",
                self.ell_star, self.m_star
            )));
        }
        Ok((lo, hi))
    }
}

/// One entry of a [`HypothesisReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Pass/fail per structural hypothesis, with sampled witnesses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
    pub ell_hat: f64,
    pub m_hat: f64,
    /// Nℓ/(N − sℓ), or infinity when sℓ ≥ N.
    pub ell_star: f64,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub(crate) fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(HypothesisCheck { name: String::from(name), passed, detail });
    }
}

const SLACK: f64 = 1e-12;

/// Evaluates (φ1)–(φ4), the Δ₂ bounds and (H1) for the given exponents.
/// Failures are reported, never raised.
pub fn check_hypotheses(law: &GrowthLaw, s: f64, dim: usize, q: f64, p: f64) -> HypothesisReport {
    let samples = default_samples();
    let (ell, m) = (law.ell, law.m);
    let n = dim as f64;
    let ell_star = if n > s * ell { n * ell / (n - s * ell) } else { f64::INFINITY };
    let (ell_hat, m_hat) = law.ratio_range(&samples);
    let mut rep = HypothesisReport { checks: Vec::new(), ell_hat, m_hat, ell_star };

    if !(s > 0.0 && s <= 1.0 && (dim == 1 || dim == 2)) {
        rep.push("domain", false, format!("need s in (0, 1] and N in {{1, 2}}, got s = {s}, N = {dim}"));
    }

    // (φ1): φ > 0, finite φ′, F(0+) = 0 and F(∞) = ∞.
    let bad = samples.iter().find(|&&t| {
        let (ph, dph) = (law.phi(t), law.phi_prime(t));
        !(ph > 0.0 && ph.is_finite() && dph.is_finite())
    });
    let small = law.flux(1e-12);
    let large = law.flux(1e12);
    let phi1 = bad.is_none() && small < 1e-6 && large > 1e6;
    rep.push(
        "phi1",
        phi1,
        match bad {
            Some(t) => format!("phi not positive/finite at t = {t:e}"),
            None => format!("phi(t)t = {small:e} at 1e-12, {large:e} at 1e12"),
        },
    );

    // (φ2): F strictly increasing.
    let mut witness = None;
    for w in samples.windows(2) {
        if law.flux(w[1]) <= law.flux(w[0]) * (1.0 - SLACK) {
            witness = Some(w[1]);
            break;
        }
    }
    rep.push(
        "phi2",
        witness.is_none(),
        match witness {
            Some(t) => format!("phi(t)t fails to increase at t = {t:e}"),
            None => String::from("phi(t)t strictly increasing on samples"),
        },
    );

    // (φ3): ℓ − 2 ≤ F″t/F′ ≤ m − 2, with ℓ − 2 > −1.
    let (mut lo, mut hi, mut arg) = (f64::INFINITY, f64::NEG_INFINITY, 1.0);
    for &t in &samples {
        let r = law.curvature_ratio(t);
        if r < lo {
            lo = r;
        }
        if r > hi {
            hi = r;
        }
        if !(r >= ell - 2.0 - 1e-9 && r <= m - 2.0 + 1e-9) {
            arg = t;
        }
    }
    let phi3 = ell > 1.0 && lo >= ell - 2.0 - 1e-9 && hi <= m - 2.0 + 1e-9;
    rep.push(
        "phi3",
        phi3,
        if phi3 {
            format!("(phi(t)t)''t/(phi(t)t)' in [{lo:.6}, {hi:.6}]")
        } else {
            format!("ratio range [{lo:.6}, {hi:.6}] leaves [{}, {}] (witness t = {arg:e})", ell - 2.0, m - 2.0)
        },
    );

    // Δ₂ via ℓ ≤ φ(t)t²/Φ(t) ≤ m.
    let delta2 = ell_hat >= ell - 1e-9 * m && m_hat <= m + 1e-9 * m;
    rep.push("delta2", delta2, format!("phi(t)t^2/Phi(t) in [{ell_hat:.6}, {m_hat:.6}], declared [{ell}, {m}]"));

    rep.checks.push(check_phi4(law, s, n));

    let order = ell <= m && m < q && q < p && p < ell_star;
    rep.push(
        "H1 order",
        order,
        format!("need l <= m < q < p < l*_s: {ell} <= {m} < {q} < {p} < {ell_star}"),
    );
    let lhs = m * (q - ell);
    let rhs = p * (q - m);
    rep.push("H1 balance", lhs < rhs, format!("need m(q - l) < p(q - m): {lhs} < {rhs}"));
    rep
}

fn check_phi4(law: &GrowthLaw, s: f64, n: f64) -> HypothesisCheck {
    if n - s <= 0.0 {
        return HypothesisCheck {
            name: String::from("phi4"),
            passed: false,
            detail: String::from("exponent s/(N - s) undefined"),
        };
    }
    let e = s / (n - s);
    let f = |tau: f64| powf(tau / law.big_phi(tau), e);
    // Near zero: integrand in y = −ln τ decays exponentially iff integrable.
    let g0 = |y: f64| f(exp(-y)) * exp(-y);
    let decay = (ln(g0(100.0)) - ln(g0(150.0))) / 50.0;
    let near = math::integrate(&mut |y| g0(y), 0.0, 150.0, 1e-10);
    let finite = decay > 1e-6 && near.is_finite();
    // At infinity: ∫₁^T with T = 1e8 must exceed 1e3, or the integrand must
    // decay no faster than 1/τ.
    let top = ln(1e8);
    let g1 = |y: f64| f(exp(y)) * exp(y);
    let far = math::integrate(&mut |y| g1(y), 0.0, top, 1e-10);
    let growth = (ln(g1(top)) - ln(g1(top - 5.0))) / 5.0;
    let divergent = far > 1e3 || growth >= -1e-9;
    HypothesisCheck {
        name: String::from("phi4"),
        passed: finite && divergent,
        detail: format!(
            "int_0^1 = {near:.6e} (decay rate {decay:.3e}); int_1^1e8 = {far:.6e} (log-slope {growth:.3e})"
        ),
    }
}
