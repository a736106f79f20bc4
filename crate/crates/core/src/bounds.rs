//! Explicit analytic floors and thresholds evaluated with discrete embedding
//! constants `Ŝ_r`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functionals::{embedding_constant, EmbeddingEstimate, ProblemData};
use crate::math::powf;

/// Discrete embedding constants for the exponents p and q.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConstants {
    pub s_p: EmbeddingEstimate,
    pub s_q: EmbeddingEstimate,
}

pub fn embedding_constants(pd: &ProblemData, starts: &[Vec<f64>]) -> Result<EmbeddingConstants> {
    let disc = pd.disc();
    Ok(EmbeddingConstants {
        s_p: embedding_constant(disc, pd.law(), pd.p(), starts)?,
        s_q: embedding_constant(disc, pd.law(), pd.q(), starts)?,
    })
}

/// Positive lower bound on Λ_n(u) valid for every u:
/// `min{ℓ/(Ŝ_p^q‖a‖_r), C₂}` where C₂ covers rays with ‖𝗍(u)u‖ > 1.
pub fn lambda_n_floor(pd: &ProblemData, s_p: f64) -> f64 {
    let (l, m, q, p, lam) = (pd.law().ell(), pd.law().m_idx(), pd.q(), pd.p(), pd.lambda());
    let ar = pd.a_r_norm();
    let small = l / (powf(s_p, q) * ar);
    let large = (p - l) / (q - l) * powf((q - m) / (p - q), (p - q) / (p - l)) * powf(lam, (q - l) / (p - l))
        / (ar * powf(s_p, l * (p - q) / (p - l)));
    small.min(large)
}

/// `c_μ`: every Nehari point has ‖u‖ ≥ c_μ.
pub fn c_mu(pd: &ProblemData, s_q: f64) -> f64 {
    let (l, m, q) = (pd.law().ell(), pd.law().m_idx(), pd.q());
    let base = l / (pd.mu() * powf(s_q, q) * pd.disc().potentials().a_inf());
    powf(base, 1.0 / (q - l)).min(powf(base, 1.0 / (q - m)))
}

/// Coefficient `(p(q−m) − m(q−ℓ))/(pq)` of the coercivity estimate.
pub fn coercivity_coefficient(pd: &ProblemData) -> f64 {
    let (l, m, q, p) = (pd.law().ell(), pd.law().m_idx(), pd.q(), pd.p());
    (p * (q - m) - m * (q - l)) / (p * q)
}

/// `D_μ`: the energy on 𝒩⁻ ∪ 𝒩⁰ is at least this value.
pub fn d_mu(pd: &ProblemData, s_q: f64) -> f64 {
    let (l, m) = (pd.law().ell(), pd.law().m_idx());
    let c = c_mu(pd, s_q);
    coercivity_coefficient(pd) * powf(c, l).min(powf(c, m))
}

fn plus_base(pd: &ProblemData, s_p: f64) -> f64 {
    (pd.q() - pd.law().m_idx()) / (pd.lambda() * (pd.p() - pd.q()) * powf(s_p, pd.p()))
}

/// Lower bound on ‖v‖ for points of 𝒩⁺ and 𝒩⁰, growing like λ^{−1/(p−m)}.
pub fn plus_norm_floor(pd: &ProblemData, s_p: f64) -> f64 {
    let (l, m, p) = (pd.law().ell(), pd.law().m_idx(), pd.p());
    let b = plus_base(pd, s_p);
    powf(b, 1.0 / (p - l)).min(powf(b, 1.0 / (p - m)))
}

/// Checks `‖w‖^p ≥ (ℓ(q−m)/(λ(p−q)Ŝ_p^p))·min(‖w‖^ℓ, ‖w‖^m)` for `w = 𝗍(u)u`.
pub fn critical_point_norm_bound_holds(pd: &ProblemData, s_p: f64, norm: f64) -> bool {
    let (l, m, p) = (pd.law().ell(), pd.law().m_idx(), pd.p());
    let rhs = l * plus_base(pd, s_p) * powf(norm, l).min(powf(norm, m));
    powf(norm, p) >= rhs * (1.0 - 1e-12)
}

/// Threshold λ_* below which 𝒩⁻ minimizers avoid 𝒩⁰, from a reference
/// level `ℰ⁻_{λ₀,μ₀}`.
pub fn lambda_star(pd: &ProblemData, s_p: f64, e_minus_ref: f64, lambda0: f64) -> f64 {
    let (l, m, q, p) = (pd.law().ell(), pd.law().m_idx(), pd.q(), pd.p());
    let base = coercivity_coefficient(pd) / e_minus_ref;
    let tail = (q - m) / ((p - q) * powf(s_p, p));
    let a = powf(base, (p - l) / l) * tail;
    let b = powf(base, (p - m) / m) * tail;
    a.min(b).min(lambda0)
}
