//! Rayleigh quotients along rays `t ↦ tu`.
//!
//! With `N(t) = 𝒥′(tu)tu + λ‖tu‖_p^p`, `B = ‖u‖_p^p` and `C = ‖u‖_{q,a}^q`:
//!
//! ```text
//! Q_n(t) = N(t) / (t^q C)
//! Q_e(t) = q (𝒥(tu) + (λ/p) t^p B) / (t^q C)
//! Q_n′(t) = t^{p−q−1} (𝒦_u(t) + λ(p−q)B) / C
//! ```
//!
//! where `𝒦_u(t) = t^{−p} Σ ω[(1−q) r F(r) + r² F′(r)]`, `r = tz`, is strictly
//! increasing. Likewise `Q_e′` has the sign of `ℒ_u(t) + λ((p−q)/p)B` with
//! `ℒ_u(t) = t^{−p} Σ ω[r F(r) − qΦ(r)]` increasing. Both critical points are
//! found by bracketing and bisecting these monotone functions.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{luxemburg_norm, ProblemData, RayAtoms};
use crate::math::{self, powf};

pub const BISECTION_REL_TOL: f64 = 1e-11;
pub const BISECTION_MAX_ITER: usize = 300;
pub const BRACKET_FACTOR: f64 = 4.0;
const BRACKET_STEPS: usize = 250;

/// A field together with the data needed to evaluate everything on its ray.
#[derive(Clone, Debug)]
pub struct Ray<'a> {
    pd: &'a ProblemData,
    atoms: RayAtoms,
}

impl<'a> Ray<'a> {
    pub fn new(u: &[f64], pd: &'a ProblemData) -> Result<Self> {
        let atoms = pd.ray_atoms(u);
        if atoms.w.is_empty() {
            return Err(Error::InvalidInput(String::from("the zero field has no ray")));
        }
        if !(atoms.c > 0.0) {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self { pd, atoms })
    }

    pub fn atoms(&self) -> &RayAtoms {
        &self.atoms
    }

    pub fn pd(&self) -> &ProblemData {
        self.pd
    }

    /// N(t) = 𝒥′(tu)tu + λ t^p B.
    fn numerator(&self, t: f64) -> f64 {
        let law = self.pd.law();
        self.atoms.sum_at(t, |r| r * law.flux(r)) + self.pd.lambda() * powf(t, self.pd.p()) * self.atoms.b
    }

    pub fn q_n(&self, t: f64) -> f64 {
        self.numerator(t) / (powf(t, self.pd.q()) * self.atoms.c)
    }

    pub fn q_e(&self, t: f64) -> f64 {
        let law = self.pd.law();
        let (q, p) = (self.pd.q(), self.pd.p());
        let top = self.atoms.sum_at(t, |r| law.big_phi(r)) + self.pd.lambda() / p * powf(t, p) * self.atoms.b;
        q * top / (powf(t, q) * self.atoms.c)
    }

    /// 𝒦_u(t).
    pub fn k_fn(&self, t: f64) -> f64 {
        let law = self.pd.law();
        let q = self.pd.q();
        self.atoms.sum_at(t, |r| (1.0 - q) * r * law.flux(r) + r * r * law.flux_slope(r)) / powf(t, self.pd.p())
    }

    /// ℒ_u(t).
    pub fn l_fn(&self, t: f64) -> f64 {
        let law = self.pd.law();
        let q = self.pd.q();
        self.atoms.sum_at(t, |r| r * law.flux(r) - q * law.big_phi(r)) / powf(t, self.pd.p())
    }

    fn k_target(&self) -> f64 {
        self.pd.lambda() * (self.pd.p() - self.pd.q()) * self.atoms.b
    }

    fn l_target(&self) -> f64 {
        self.pd.lambda() * (self.pd.p() - self.pd.q()) / self.pd.p() * self.atoms.b
    }

    /// dQ_n/dt.
    pub fn q_n_prime(&self, t: f64) -> f64 {
        let (q, p) = (self.pd.q(), self.pd.p());
        powf(t, p - q - 1.0) * (self.k_fn(t) + self.k_target()) / self.atoms.c
    }

    /// dQ_e/dt.
    pub fn q_e_prime(&self, t: f64) -> f64 {
        let (q, p) = (self.pd.q(), self.pd.p());
        q * powf(t, p - q - 1.0) * (self.l_fn(t) + self.l_target()) / self.atoms.c
    }

    /// d²Q_n/dt², analytic when F″ is available in closed form and a
    /// Richardson-extrapolated difference of Q_n′ otherwise.
    pub fn q_n_second(&self, t: f64) -> f64 {
        let law = self.pd.law();
        if law.flux_curv(1.0).is_none() {
            let h = 1e-3 * t;
            let d = |h: f64| (self.q_n_prime(t + h) - self.q_n_prime(t - h)) / (2.0 * h);
            return (4.0 * d(0.5 * h) - d(h)) / 3.0;
        }
        let (q, p, lam, b) = (self.pd.q(), self.pd.p(), self.pd.lambda(), self.atoms.b);
        let n0 = self.numerator(t);
        // t·N′ and t²·N″ expressed in r = tz.
        let n1 = self.atoms.sum_at(t, |r| r * (law.flux(r) + r * law.flux_slope(r))) / t
            + lam * p * powf(t, p - 1.0) * b;
        let n2 = self
            .atoms
            .sum_at(t, |r| r * r * (2.0 * law.flux_slope(r) + r * law.flux_curv(r).unwrap_or(0.0)))
            / (t * t)
            + lam * p * (p - 1.0) * powf(t, p - 2.0) * b;
        (n2 - 2.0 * q * n1 / t + q * (q + 1.0) * n0 / (t * t)) / (powf(t, q) * self.atoms.c)
    }

    /// ℐ(tu).
    pub fn energy(&self, t: f64) -> f64 {
        let law = self.pd.law();
        let (q, p) = (self.pd.q(), self.pd.p());
        self.atoms.sum_at(t, |r| law.big_phi(r)) - self.pd.mu() / q * powf(t, q) * self.atoms.c
            + self.pd.lambda() / p * powf(t, p) * self.atoms.b
    }

    /// ℐ″(tu)(tu, tu) and the classification dead-band ε_cls at that point.
    pub fn energy_second(&self, t: f64) -> (f64, f64) {
        let law = self.pd.law();
        let (q, p, mu, lam) = (self.pd.q(), self.pd.p(), self.pd.mu(), self.pd.lambda());
        let j2 = self.atoms.sum_at(t, |r| r * r * law.flux_slope(r));
        let cq = mu * (q - 1.0) * powf(t, q) * self.atoms.c;
        let bp = lam * (p - 1.0) * powf(t, p) * self.atoms.b;
        (j2 - cq + bp, 1e-8 * (math::abs(j2) + math::abs(cq) + bp))
    }

    /// 𝗍(u): the unique minimizer of Q_n.
    pub fn t_crit(&self) -> Result<f64> {
        let target = self.k_target();
        let mut f = |t: f64| self.k_fn(t) + target;
        let (lo, hi) = math::bracket_increasing(&mut f, 1.0, BRACKET_FACTOR, BRACKET_STEPS)?;
        Ok(math::bisect_increasing(&mut f, lo, hi, BISECTION_REL_TOL, BISECTION_MAX_ITER))
    }

    /// 𝗌(u): the unique minimizer of Q_e.
    pub fn s_crit(&self) -> Result<f64> {
        let target = self.l_target();
        let mut f = |t: f64| self.l_fn(t) + target;
        let (lo, hi) = math::bracket_increasing(&mut f, 1.0, BRACKET_FACTOR, BRACKET_STEPS)?;
        Ok(math::bisect_increasing(&mut f, lo, hi, BISECTION_REL_TOL, BISECTION_MAX_ITER))
    }

    /// `(𝗍(u), Λ_n(u))`.
    pub fn lambda_n(&self) -> Result<(f64, f64)> {
        let t = self.t_crit()?;
        Ok((t, self.q_n(t)))
    }

    /// `(𝗌(u), Λ_e(u))`.
    pub fn lambda_e(&self) -> Result<(f64, f64)> {
        let s = self.s_crit()?;
        Ok((s, self.q_e(s)))
    }

    /// Solutions of Q_n(t) = μ given `(𝗍(u), Λ_n(u))`.
    pub fn roots_from(&self, t_crit: f64, lambda_n: f64) -> Result<NehariRoots> {
        let mu = self.pd.mu();
        let base = NehariRoots { status: RootStatus::Empty, t_minus: None, t_plus: None, t_crit, lambda_n };
        if (mu - lambda_n).abs() <= degeneracy_band(mu) {
            return Ok(NehariRoots { status: RootStatus::Degenerate, t_minus: Some(t_crit), t_plus: Some(t_crit), ..base });
        }
        if mu < lambda_n {
            return Ok(base);
        }
        // On (0, 𝗍] Q_n decreases from +∞, on [𝗍, ∞) it increases to +∞.
        let mut left = |t: f64| mu - self.q_n(t);
        let mut lo = t_crit;
        let mut found = false;
        for _ in 0..BRACKET_STEPS {
            lo /= BRACKET_FACTOR;
            if left(lo) < 0.0 {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::BracketFailure(String::from("no lower Nehari root bracket")));
        }
        let t_minus = math::bisect_increasing(&mut left, lo, t_crit, BISECTION_REL_TOL, BISECTION_MAX_ITER);
        let mut right = |t: f64| self.q_n(t) - mu;
        let mut hi = t_crit;
        found = false;
        for _ in 0..BRACKET_STEPS {
            hi *= BRACKET_FACTOR;
            if right(hi) >= 0.0 {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::BracketFailure(String::from("no upper Nehari root bracket")));
        }
        let t_plus = math::bisect_increasing(&mut right, t_crit, hi, BISECTION_REL_TOL, BISECTION_MAX_ITER);
        Ok(NehariRoots { status: RootStatus::TwoRoots, t_minus: Some(t_minus), t_plus: Some(t_plus), ..base })
    }

    pub fn roots(&self) -> Result<NehariRoots> {
        let (t, l) = self.lambda_n()?;
        self.roots_from(t, l)
    }

    /// Classifies `tu`, which must lie on the Nehari set.
    pub fn classify(&self, t: f64) -> Result<ClassifyDetail> {
        let mu = self.pd.mu();
        let qn = self.q_n(t);
        let gap = (qn - mu).abs();
        if gap > NEHARI_TOL * mu.abs().max(1.0) {
            return Err(Error::NotOnNehari(gap));
        }
        let (second, eps) = self.energy_second(t);
        let class = if second.abs() <= eps {
            Classification::Zero
        } else if second < 0.0 {
            Classification::Minus
        } else {
            Classification::Plus
        };
        let slope = self.q_n_prime(t);
        let consistent = match class {
            Classification::Zero => true,
            Classification::Minus => slope < 0.0,
            Classification::Plus => slope > 0.0,
        };
        Ok(ClassifyDetail { class, second, eps, q_n_prime: slope, consistent })
    }
}

/// Relative tolerance for accepting `tu` as a Nehari point.
pub const NEHARI_TOL: f64 = 1e-7;

/// `|μ − Λ_n(u)| ≤ 1e-9·max(1, μ)` counts as a double root.
pub fn degeneracy_band(mu: f64) -> f64 {
    1e-9 * mu.abs().max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootStatus {
    Empty,
    Degenerate,
    TwoRoots,
}

/// Solutions of `Q_n(t) = μ` on one ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NehariRoots {
    pub status: RootStatus,
    pub t_minus: Option<f64>,
    pub t_plus: Option<f64>,
    pub t_crit: f64,
    pub lambda_n: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Minus,
    Plus,
    Zero,
}

/// Classification with the evidence it was based on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyDetail {
    pub class: Classification,
    /// ℐ″(tu)(tu, tu)
    pub second: f64,
    /// Dead-band ε_cls.
    pub eps: f64,
    pub q_n_prime: f64,
    /// Sign of Q_n′ agrees with the classification.
    pub consistent: bool,
}

/// One row of a sampled fibering profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub t: f64,
    pub q_n: f64,
    pub q_e: f64,
    pub q_n_prime: f64,
}

/// Critical points and optional samples of the two quotients along a ray.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberingProfile {
    /// Ray direction, rescaled to unit Luxemburg norm.
    pub u: Vec<f64>,
    pub t_crit: f64,
    pub s_crit: f64,
    pub lambda_n: f64,
    pub lambda_e: f64,
    pub samples: Vec<ProfileSample>,
}

pub fn rayleigh_n(u: &[f64], pd: &ProblemData) -> Result<f64> {
    Ok(Ray::new(u, pd)?.q_n(1.0))
}

pub fn rayleigh_e(u: &[f64], pd: &ProblemData) -> Result<f64> {
    Ok(Ray::new(u, pd)?.q_e(1.0))
}

pub fn fibering_t(u: &[f64], pd: &ProblemData) -> Result<f64> {
    Ray::new(u, pd)?.t_crit()
}

pub fn fibering_s(u: &[f64], pd: &ProblemData) -> Result<f64> {
    Ray::new(u, pd)?.s_crit()
}

pub fn nehari_roots(u: &[f64], pd: &ProblemData) -> Result<NehariRoots> {
    Ray::new(u, pd)?.roots()
}

pub fn classify(u: &[f64], t: f64, pd: &ProblemData) -> Result<Classification> {
    Ok(Ray::new(u, pd)?.classify(t)?.class)
}

pub fn fibering_second(u: &[f64], t: f64, pd: &ProblemData) -> Result<f64> {
    Ok(Ray::new(u, pd)?.q_n_second(t))
}

/// Profile of the ray through `u` (normalized to ‖u‖ = 1), sampled at
/// `n_samples` log-spaced points spanning two decades on both sides of the
/// critical points.
pub fn profile(u: &[f64], pd: &ProblemData, n_samples: usize) -> Result<FiberingProfile> {
    let norm = luxemburg_norm(u, pd);
    if !(norm > 0.0) {
        return Err(Error::InvalidInput(String::from("the zero field has no ray")));
    }
    let v: Vec<f64> = u.iter().map(|x| x / norm).collect();
    let ray = Ray::new(&v, pd)?;
    let (t_crit, lambda_n) = ray.lambda_n()?;
    let (s_crit, lambda_e) = ray.lambda_e()?;
    let samples = math::log_space(t_crit / 100.0, s_crit * 100.0, n_samples)
        .map(|t| ProfileSample { t, q_n: ray.q_n(t), q_e: ray.q_e(t), q_n_prime: ray.q_n_prime(t) })
        .collect();
    Ok(FiberingProfile { u: v, t_crit, s_crit, lambda_n, lambda_e, samples })
}
