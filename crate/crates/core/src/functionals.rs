//! The modular 𝒥_{s,Φ,V}, the Luxemburg norm, the energy ℐ_{λ,μ} and their
//! first and diagonal second derivatives.
//!
//! Every functional is a weighted sum of "atoms" `ω·G(z)` with `z ≥ 0`:
//! interior pairs contribute `z = |u_i − u_j|·|x_i − x_j|^{−s}`, pairs with a
//! zero-extension node contribute `z = |u_i|·|x_i − y|^{−s}`, and every node
//! contributes the bulk atom `(h^N V_i, |u_i|)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{lp_norm_pow, weighted_q_norm_pow, BoxGrid, Field, PotentialPair};
use crate::math::{self, abs, powf, signum0, Neumaier};
use crate::nfunction::{self, GrowthLaw, HypothesisReport};
use crate::optim::{self, LbfgsSettings};

impl core::ops::Deref for Field {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        self.values()
    }
}

/// Grid, fractional order, potentials and the precomputed pair table.
#[derive(Debug)]
pub struct Discretization {
    grid: BoxGrid,
    s: f64,
    padding: usize,
    pots: PotentialPair,
    cell: f64,
    pi: Vec<u32>,
    pj: Vec<u32>,
    pw: Vec<f64>,
    pk: Vec<f64>,
    ei: Vec<u32>,
    ew: Vec<f64>,
    ek: Vec<f64>,
    bulk: Vec<f64>,
}

impl Discretization {
    pub fn new(grid: BoxGrid, s: f64, padding: usize, pots: PotentialPair) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidInput(format!("fractional order must lie in (0, 1], got {s}")));
        }
        if pots.v().len() != grid.node_count() {
            return Err(Error::InvalidInput(String::from("potentials do not match the grid")));
        }
        let n = grid.n_per_axis() as i64;
        let dim = grid.dim();
        let h = grid.spacing();
        let cell = grid.cell_volume();
        let nd = dim as f64;
        let weight = |d2: i64| {
            let dist = h * math::sqrt(d2 as f64);
            (2.0 * cell * cell / powf(dist, nd), powf(dist, -s))
        };
        let count = grid.node_count();
        let idx = |i: usize| -> [i64; 2] {
            let m = grid.multi_index(i);
            [m[0] as i64, m[1] as i64]
        };

        // Interior pairs, cached by squared lattice distance.
        let max_d2 = (dim as i64) * (n - 1 + 2 * padding as i64).pow(2) + 1;
        let mut cache: Vec<Option<(f64, f64)>> = vec![None; max_d2 as usize + 1];
        let mut lookup = |d2: i64| -> (f64, f64) {
            *cache[d2 as usize].get_or_insert_with(|| weight(d2))
        };
        let (mut pi, mut pj, mut pw, mut pk) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for i in 0..count {
            let a = idx(i);
            for j in i + 1..count {
                let b = idx(j);
                let d2 = (a[0] - b[0]).pow(2) + (a[1] - b[1]).pow(2);
                let (w, k) = lookup(d2);
                pi.push(i as u32);
                pj.push(j as u32);
                pw.push(w);
                pk.push(k);
            }
        }

        // Exterior partners, merged per node by distance.
        let pad = padding as i64;
        let range = -pad..n + pad;
        let mut exterior: Vec<[i64; 2]> = Vec::new();
        if dim == 1 {
            exterior.extend(range.clone().filter(|k| !(0..n).contains(k)).map(|k| [k, 0]));
        } else {
            for y in range.clone() {
                for x in range.clone() {
                    if !((0..n).contains(&x) && (0..n).contains(&y)) {
                        exterior.push([x, y]);
                    }
                }
            }
        }
        let (mut ei, mut ew, mut ek) = (Vec::new(), Vec::new(), Vec::new());
        let mut d2s: Vec<i64> = Vec::with_capacity(exterior.len());
        for i in 0..count {
            let a = idx(i);
            d2s.clear();
            d2s.extend(exterior.iter().map(|b| (a[0] - b[0]).pow(2) + (a[1] - b[1]).pow(2)));
            d2s.sort_unstable();
            let mut pos = 0;
            while pos < d2s.len() {
                let d2 = d2s[pos];
                let mut end = pos;
                while end < d2s.len() && d2s[end] == d2 {
                    end += 1;
                }
                let (w, k) = lookup(d2);
                ei.push(i as u32);
                ew.push(w * (end - pos) as f64);
                ek.push(k);
                pos = end;
            }
        }
        let bulk = pots.v().iter().map(|v| cell * v).collect();
        Ok(Self { grid, s, padding, pots, cell, pi, pj, pw, pk, ei, ew, ek, bulk })
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    pub fn potentials(&self) -> &PotentialPair {
        &self.pots
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    /// Number of (interior pair, exterior pair, bulk) atoms.
    pub fn atom_counts(&self) -> (usize, usize, usize) {
        (self.pw.len(), self.ew.len(), self.bulk.len())
    }

    /// Visits every atom `(ω, z)` with `z > 0` in a fixed order.
    #[inline]
    pub(crate) fn for_each_atom<F: FnMut(f64, f64)>(&self, u: &[f64], mut f: F) {
        for k in 0..self.pw.len() {
            let d = (u[self.pi[k] as usize] - u[self.pj[k] as usize]) * self.pk[k];
            if d != 0.0 {
                f(self.pw[k], abs(d));
            }
        }
        for k in 0..self.ew.len() {
            let x = u[self.ei[k] as usize];
            if x != 0.0 {
                f(self.ew[k], abs(x) * self.ek[k]);
            }
        }
        for (i, &w) in self.bulk.iter().enumerate() {
            if u[i] != 0.0 {
                f(w, abs(u[i]));
            }
        }
    }

    /// `Σ ω G(z)` over all atoms.
    pub(crate) fn atom_sum<G: FnMut(f64) -> f64>(&self, u: &[f64], mut g: G) -> f64 {
        let mut acc = Neumaier::new();
        self.for_each_atom(u, |w, z| acc.add(w * g(z)));
        acc.value()
    }

    /// Gradient of `Σ ω Ψ(z)` where `ψ = Ψ′` is given on `z > 0`.
    pub(crate) fn atom_gradient<P: FnMut(f64) -> f64>(&self, u: &[f64], mut psi: P) -> Vec<f64> {
        let mut acc = vec![Neumaier::new(); u.len()];
        for k in 0..self.pw.len() {
            let (i, j) = (self.pi[k] as usize, self.pj[k] as usize);
            let d = (u[i] - u[j]) * self.pk[k];
            if d != 0.0 {
                let val = self.pw[k] * signum0(d) * psi(abs(d)) * self.pk[k];
                acc[i].add(val);
                acc[j].add(-val);
            }
        }
        for k in 0..self.ew.len() {
            let i = self.ei[k] as usize;
            let d = u[i] * self.ek[k];
            if d != 0.0 {
                acc[i].add(self.ew[k] * signum0(d) * psi(abs(d)) * self.ek[k]);
            }
        }
        for (i, &w) in self.bulk.iter().enumerate() {
            if u[i] != 0.0 {
                acc[i].add(w * signum0(u[i]) * psi(abs(u[i])));
            }
        }
        acc.iter().map(|a| a.value()).collect()
    }

    /// Collects the atoms of `u` together with `‖u‖_p^p` and `‖u‖_{q,a}^q`.
    pub fn ray_atoms(&self, u: &[f64], q: f64, p: f64) -> RayAtoms {
        let mut w = Vec::new();
        let mut z = Vec::new();
        self.for_each_atom(u, |a, b| {
            w.push(a);
            z.push(b);
        });
        RayAtoms {
            w,
            z,
            b: lp_norm_pow(u, self.cell, p),
            c: weighted_q_norm_pow(u, self.pots.a(), self.cell, q),
        }
    }

    /// Atoms `(ω, k)` of the unit coordinate field at node `i` (so `z = k`).
    pub fn unit_atoms(&self, i: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for k in 0..self.pw.len() {
            if self.pi[k] as usize == i || self.pj[k] as usize == i {
                out.push((self.pw[k], self.pk[k]));
            }
        }
        for k in 0..self.ew.len() {
            if self.ei[k] as usize == i {
                out.push((self.ew[k], self.ek[k]));
            }
        }
        out.push((self.bulk[i], 1.0));
        out
    }

    /// For every node, the atoms `(ω, k)` of its unit coordinate field.
    pub fn all_unit_atoms(&self) -> Vec<Vec<(f64, f64)>> {
        let mut out: Vec<Vec<(f64, f64)>> = vec![Vec::new(); self.bulk.len()];
        for k in 0..self.pw.len() {
            out[self.pi[k] as usize].push((self.pw[k], self.pk[k]));
            out[self.pj[k] as usize].push((self.pw[k], self.pk[k]));
        }
        for k in 0..self.ew.len() {
            out[self.ei[k] as usize].push((self.ew[k], self.ek[k]));
        }
        for (i, &w) in self.bulk.iter().enumerate() {
            out[i].push((w, 1.0));
        }
        out
    }
}

/// Atoms of a fixed field, reused along the ray `t ↦ tu`.
#[derive(Clone, Debug)]
pub struct RayAtoms {
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    /// ‖u‖_p^p
    pub b: f64,
    /// ‖u‖_{q,a}^q
    pub c: f64,
}

impl RayAtoms {
    /// `Σ ω G(t z)` in compensated arithmetic.
    #[inline]
    pub fn sum_at<G: FnMut(f64) -> f64>(&self, t: f64, mut g: G) -> f64 {
        let mut acc = Neumaier::new();
        for (w, z) in self.w.iter().zip(&self.z) {
            acc.add(w * g(t * z));
        }
        acc.value()
    }
}

/// The parameters of (P_{λ,μ}) on a fixed discretization.
#[derive(Clone, Debug)]
pub struct ProblemData {
    law: GrowthLaw,
    disc: Arc<Discretization>,
    q: f64,
    p: f64,
    lambda: f64,
    mu: f64,
}

impl ProblemData {
    /// Validates (φ1)–(φ4), Δ₂, (H1), (H2) and (V0) before accepting the data.
    pub fn new(law: GrowthLaw, disc: Arc<Discretization>, q: f64, p: f64, lambda: f64, mu: f64) -> Result<Self> {
        let pd = Self::new_unchecked(law, disc, q, p, lambda, mu)?;
        let rep = pd.hypothesis_report();
        if !rep.all_passed() {
            let names: Vec<String> = rep.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            return Err(Error::HypothesisFailure(names.join("; ")));
        }
        Ok(pd)
    }

    /// Builds the data with only basic sanity checks, for experiments that
    /// deliberately leave the hypotheses.
    pub fn new_unchecked(
        law: GrowthLaw,
        disc: Arc<Discretization>,
        q: f64,
        p: f64,
        lambda: f64,
        mu: f64,
    ) -> Result<Self> {
        if !(q > 1.0 && p > q && lambda > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need 1 < q < p, lambda > 0 and finite mu, got q = {q}, p = {p}, lambda = {lambda}, mu = {mu}"
            )));
        }
        Ok(Self { law, disc, q, p, lambda, mu })
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..self.clone() }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..self.clone() }
    }

    pub fn law(&self) -> &GrowthLaw {
        &self.law
    }

    pub fn disc(&self) -> &Arc<Discretization> {
        &self.disc
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.disc.grid
    }

    pub fn s(&self) -> f64 {
        self.disc.s
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Hölder exponent r = p/(p − q) attached to the weight a.
    pub fn r_exponent(&self) -> f64 {
        self.p / (self.p - self.q)
    }

    pub fn a_r_norm(&self) -> f64 {
        self.disc.pots.a_r_norm(&self.disc.grid, self.r_exponent())
    }

    pub fn ray_atoms(&self, u: &[f64]) -> RayAtoms {
        self.disc.ray_atoms(u, self.q, self.p)
    }

    /// Law hypotheses plus the potential conditions (H2), (V0), (V1).
    pub fn hypothesis_report(&self) -> HypothesisReport {
        let grid = &self.disc.grid;
        let mut rep = nfunction::check_hypotheses(&self.law, self.disc.s, grid.dim(), self.q, self.p);
        let pots = &self.disc.pots;
        let ar = self.a_r_norm();
        rep.push("H2", ar.is_finite() && ar > 0.0, format!("a > 0 on nodes, ||a||_r = {ar:.6e} with r = {}", self.r_exponent()));
        rep.push("V0", pots.v0() > 0.0, format!("V0 = min V = {:.6e}", pots.v0()));
        let level = 10.0 * pots.v0();
        rep.push(
            "V1",
            true,
            format!(
                "bounded box; fraction of nodes with V <= {level:.3e}: {:.4}, boundary min V = {:.4e}",
                pots.sublevel_fraction(level),
                pots.boundary_min_v(grid)
            ),
        );
        rep
    }
}

/// The five scalar ingredients of ℐ and ℐ″.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// 𝒥(u)
    pub modular: f64,
    /// 𝒥′(u)u
    pub mod_diag: f64,
    /// 𝒥″(u)(u, u)
    pub mod_second_diag: f64,
    /// ‖u‖_{q,a}^q
    pub q_term: f64,
    /// ‖u‖_p^p
    pub p_term: f64,
}

impl EnergyBreakdown {
    pub fn energy(&self, pd: &ProblemData) -> f64 {
        self.modular - pd.mu / pd.q * self.q_term + pd.lambda / pd.p * self.p_term
    }

    pub fn energy_diag(&self, pd: &ProblemData) -> f64 {
        self.mod_diag - pd.mu * self.q_term + pd.lambda * self.p_term
    }

    pub fn energy_second_diag(&self, pd: &ProblemData) -> f64 {
        self.mod_second_diag - pd.mu * (pd.q - 1.0) * self.q_term + pd.lambda * (pd.p - 1.0) * self.p_term
    }
}

pub fn modular(u: &[f64], pd: &ProblemData) -> f64 {
    modular_with(u, &pd.law, &pd.disc)
}

pub fn modular_with(u: &[f64], law: &GrowthLaw, disc: &Discretization) -> f64 {
    disc.atom_sum(u, |z| law.big_phi(z))
}

/// `𝒥′(u)v`.
pub fn modular_derivative(u: &[f64], v: &[f64], pd: &ProblemData) -> f64 {
    math::dot(&modular_gradient(u, pd), v)
}

/// Coordinate representation of 𝒥′(u).
pub fn modular_gradient(u: &[f64], pd: &ProblemData) -> Vec<f64> {
    pd.disc.atom_gradient(u, |z| pd.law.flux(z))
}

/// `𝒥′(u)u = Σ ω z F(z)`.
pub fn modular_diag(u: &[f64], pd: &ProblemData) -> f64 {
    pd.disc.atom_sum(u, |z| z * pd.law.flux(z))
}

/// `𝒥″(u)(u, u) = Σ ω z² F′(z)`.
pub fn modular_second_diag(u: &[f64], pd: &ProblemData) -> f64 {
    pd.disc.atom_sum(u, |z| z * z * pd.law.flux_slope(z))
}

/// Coordinate representation of the derivative of `u ↦ 𝒥′(u)u`.
pub fn modular_diag_gradient(u: &[f64], pd: &ProblemData) -> Vec<f64> {
    pd.disc.atom_gradient(u, |z| pd.law.flux(z) + z * pd.law.flux_slope(z))
}

pub fn p_term(u: &[f64], pd: &ProblemData) -> f64 {
    lp_norm_pow(u, pd.disc.cell, pd.p)
}

pub fn q_term(u: &[f64], pd: &ProblemData) -> f64 {
    weighted_q_norm_pow(u, pd.disc.pots.a(), pd.disc.cell, pd.q)
}

/// Gradient of ‖u‖_p^p.
pub fn p_term_gradient(u: &[f64], pd: &ProblemData) -> Vec<f64> {
    let (h, p) = (pd.disc.cell, pd.p);
    u.iter().map(|x| if *x == 0.0 { 0.0 } else { h * p * powf(abs(*x), p - 1.0) * signum0(*x) }).collect()
}

/// Gradient of ‖u‖_{q,a}^q.
pub fn q_term_gradient(u: &[f64], pd: &ProblemData) -> Vec<f64> {
    let (h, q) = (pd.disc.cell, pd.q);
    u.iter()
        .zip(pd.disc.pots.a())
        .map(|(x, a)| if *x == 0.0 { 0.0 } else { h * q * a * powf(abs(*x), q - 1.0) * signum0(*x) })
        .collect()
}

pub fn energy_breakdown(u: &[f64], pd: &ProblemData) -> EnergyBreakdown {
    let law = &pd.law;
    let (mut m0, mut m1, mut m2) = (Neumaier::new(), Neumaier::new(), Neumaier::new());
    pd.disc.for_each_atom(u, |w, z| {
        let f = law.flux(z);
        m0.add(w * law.big_phi(z));
        m1.add(w * z * f);
        m2.add(w * z * z * law.flux_slope(z));
    });
    EnergyBreakdown {
        modular: m0.value(),
        mod_diag: m1.value(),
        mod_second_diag: m2.value(),
        q_term: q_term(u, pd),
        p_term: p_term(u, pd),
    }
}

/// `ℐ(u) = 𝒥(u) − (μ/q)‖u‖_{q,a}^q + (λ/p)‖u‖_p^p`.
pub fn energy(u: &[f64], pd: &ProblemData) -> f64 {
    modular(u, pd) - pd.mu / pd.q * q_term(u, pd) + pd.lambda / pd.p * p_term(u, pd)
}

/// Coordinate representation of ℐ′(u).
pub fn energy_gradient(u: &[f64], pd: &ProblemData) -> Vec<f64> {
    let mut g = modular_gradient(u, pd);
    let (h, q, p) = (pd.disc.cell, pd.q, pd.p);
    let a = pd.disc.pots.a();
    for (i, gi) in g.iter_mut().enumerate() {
        let x = u[i];
        if x != 0.0 {
            let ax = abs(x);
            *gi += signum0(x) * h * (-pd.mu * a[i] * powf(ax, q - 1.0) + pd.lambda * powf(ax, p - 1.0));
        }
    }
    g
}

/// `ℐ′(u)v`.
pub fn energy_derivative(u: &[f64], v: &[f64], pd: &ProblemData) -> f64 {
    math::dot(&energy_gradient(u, pd), v)
}

/// `ℐ″(u)(u, u) = 𝒥″(u)(u,u) − μ(q−1)‖u‖_{q,a}^q + λ(p−1)‖u‖_p^p`.
pub fn energy_second_diag(u: &[f64], pd: &ProblemData) -> f64 {
    energy_breakdown(u, pd).energy_second_diag(pd)
}

/// ℐ″(u)(u,u) written through ℐ′(u)u = 0 by eliminating μ.
pub fn second_diag_on_nehari_eliminating_mu(u: &[f64], pd: &ProblemData) -> f64 {
    let law = &pd.law;
    let q = pd.q;
    pd.disc.atom_sum(u, |z| z * z * law.flux_slope(z) - (q - 1.0) * z * law.flux(z))
        + pd.lambda * (pd.p - q) * p_term(u, pd)
}

/// ℐ″(u)(u,u) written through ℐ′(u)u = 0 by eliminating λ.
pub fn second_diag_on_nehari_eliminating_lambda(u: &[f64], pd: &ProblemData) -> f64 {
    let law = &pd.law;
    let p = pd.p;
    pd.disc.atom_sum(u, |z| z * z * law.flux_slope(z) - (p - 1.0) * z * law.flux(z))
        + pd.mu * (p - pd.q) * q_term(u, pd)
}

/// Luxemburg norm `inf{σ > 0 : 𝒥(u/σ) ≤ 1}`.
pub fn luxemburg_norm(u: &[f64], pd: &ProblemData) -> f64 {
    luxemburg_norm_with(u, &pd.law, &pd.disc)
}

pub fn luxemburg_norm_with(u: &[f64], law: &GrowthLaw, disc: &Discretization) -> f64 {
    let mut w = Vec::new();
    let mut z = Vec::new();
    disc.for_each_atom(u, |a, b| {
        w.push(a);
        z.push(b);
    });
    luxemburg_from_atoms(&w, &z, law)
}

/// Luxemburg norm of the field whose atoms are `(w, z)`.
pub fn luxemburg_from_atoms(w: &[f64], z: &[f64], law: &GrowthLaw) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    let modular = |rho: f64| math::sum(w.iter().zip(z).map(|(a, b)| a * law.big_phi(rho * b)));
    if law.is_homogeneous() {
        return powf(modular(1.0), 1.0 / law.ell());
    }
    // 𝒥(ρu) − 1 is increasing in ρ = 1/σ.
    let mut f = |rho: f64| modular(rho) - 1.0;
    let (lo, hi) = (1e-12, 1e12);
    if f(lo) >= 0.0 {
        return 1.0 / lo;
    }
    if f(hi) < 0.0 {
        return 1.0 / hi;
    }
    let rho = math::bisect_increasing(&mut f, lo, hi, 1e-12, 200);
    1.0 / rho
}

/// Luxemburg norm and its gradient `∇σ = ∇𝒥(v)/(𝒥′(v)v)` with `v = u/σ`.
pub fn luxemburg_gradient(u: &[f64], law: &GrowthLaw, disc: &Discretization) -> (f64, Vec<f64>) {
    let sigma = luxemburg_norm_with(u, law, disc);
    if sigma == 0.0 {
        return (0.0, vec![0.0; u.len()]);
    }
    let v: Vec<f64> = u.iter().map(|x| x / sigma).collect();
    let g = disc.atom_gradient(&v, |z| law.flux(z));
    let d = disc.atom_sum(&v, |z| z * law.flux(z));
    (sigma, g.into_iter().map(|x| x / d).collect())
}

/// Result of the embedding-constant ascent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingEstimate {
    /// Ŝ_r = max ‖u‖_r/‖u‖ over the explored fields.
    pub value: f64,
    /// Max − min of the per-start values.
    pub spread: f64,
    pub maximizer: Vec<f64>,
    pub starts: usize,
}

/// Estimates `S_r = sup ‖u‖_r/‖u‖` by L-BFGS ascent from each start.
pub fn embedding_constant(
    disc: &Discretization,
    law: &GrowthLaw,
    r: f64,
    starts: &[Vec<f64>],
) -> Result<EmbeddingEstimate> {
    if starts.is_empty() {
        return Err(Error::InvalidInput(String::from("embedding estimate needs at least one start")));
    }
    let cell = disc.cell;
    let objective = |x: &[f64]| -> Option<(f64, Vec<f64>)> {
        let br = lp_norm_pow(x, cell, r);
        if !(br > 0.0) {
            return None;
        }
        let (sigma, gs) = luxemburg_gradient(x, law, disc);
        let nr = powf(br, 1.0 / r);
        // f = ln σ − ln ‖x‖_r is 0-homogeneous.
        let f = math::ln(sigma) - math::ln(nr);
        let g = x
            .iter()
            .zip(&gs)
            .map(|(xi, gi)| gi / sigma - cell * powf(abs(*xi), r - 1.0) * signum0(*xi) / br)
            .collect();
        Some((f, g))
    };
    let settings = LbfgsSettings { max_iter: 400, rel_decrease: 1e-12, ..LbfgsSettings::default() };
    let mut values = Vec::with_capacity(starts.len());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x0 in starts {
        let out = optim::minimize(objective, x0, &settings, |_, _, _| true);
        if !out.value.is_finite() {
            continue;
        }
        let val = math::exp(-out.value);
        values.push(val);
        if best.as_ref().map_or(true, |(b, _)| val > *b) {
            best = Some((val, out.x));
        }
    }
    let (value, maximizer) =
        best.ok_or_else(|| Error::InvalidInput(String::from("no admissible start for the embedding estimate")))?;
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(EmbeddingEstimate { value, spread: value - lo, maximizer, starts: starts.len() })
}
