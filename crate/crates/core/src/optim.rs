//! Limited-memory BFGS with Armijo backtracking for the 0-homogeneous
//! objectives of this crate.
//!
//! Every objective here is invariant under `u ↦ cu`, so after each accepted
//! step the iterate is rescaled to unit Euclidean length. Points where the
//! objective is undefined (for instance rays without Nehari roots) report
//! `None` and are treated as +∞ by the line search.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::math::{self, abs, dot, norm2};

#[derive(Clone, Debug, PartialEq)]
pub struct LbfgsSettings {
    pub max_iter: usize,
    pub memory: usize,
    /// Stop once the relative decrease stays below this for three steps.
    pub rel_decrease: f64,
    pub armijo_c: f64,
    pub max_backtracks: usize,
    /// Rescale iterates to unit Euclidean norm.
    pub normalize: bool,
}

impl Default for LbfgsSettings {
    fn default() -> Self {
        Self {
            max_iter: 500,
            memory: 8,
            rel_decrease: 1e-10,
            armijo_c: 1e-4,
            max_backtracks: 60,
            normalize: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad: Vec<f64>,
    pub iterations: usize,
    /// Stopping test satisfied (as opposed to iteration cap or stalled search).
    pub converged: bool,
}

fn normalized(x: &mut [f64]) -> f64 {
    let n = norm2(x);
    if n > 0.0 {
        for v in x.iter_mut() {
            *v /= n;
        }
    }
    n
}

/// Minimizes `f` from `x0`. `accept(x, f, g)` is an extra stopping test that
/// must hold together with the relative-decrease test.
pub fn minimize<F, A>(mut f: F, x0: &[f64], settings: &LbfgsSettings, mut accept: A) -> OptimOutcome
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
    A: FnMut(&[f64], f64, &[f64]) -> bool,
{
    let mut x = x0.to_vec();
    if settings.normalize {
        normalized(&mut x);
    }
    let Some((mut fx, mut g)) = f(&x) else {
        return OptimOutcome { x: x0.to_vec(), value: f64::INFINITY, grad: Vec::new(), iterations: 0, converged: false };
    };
    let mut mem: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut quiet = 0usize;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < settings.max_iter {
        iterations += 1;
        let gnorm = norm2(&g);
        if gnorm == 0.0 || !gnorm.is_finite() {
            converged = gnorm == 0.0;
            break;
        }
        let mut d = direction(&g, &mem);
        let mut gd = dot(&g, &d);
        if mem.is_empty() || !(gd < 0.0) {
            mem.clear();
            let eta = 1e-2 * norm2(&x) / gnorm;
            d = g.iter().map(|v| -eta * v).collect();
            gd = dot(&g, &d);
        }
        let mut step = None;
        let mut alpha = 1.0;
        for _ in 0..settings.max_backtracks {
            let mut trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            if settings.normalize {
                normalized(&mut trial);
            }
            if let Some((ft, gt)) = f(&trial) {
                if ft <= fx + settings.armijo_c * alpha * gd {
                    step = Some((trial, ft, gt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew, gn)) = step else {
            if !mem.is_empty() {
                mem.clear();
                continue;
            }
            converged = accept(&x, fx, &g);
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm2(&s) * norm2(&y) && sy > 0.0 {
            if mem.len() == settings.memory {
                mem.pop_front();
            }
            mem.push_back((s, y, 1.0 / sy));
        }
        let decrease = fx - fnew;
        let rel = abs(decrease) / abs(fx).max(abs(fnew)).max(f64::MIN_POSITIVE);
        x = xn;
        fx = fnew;
        g = gn;
        quiet = if rel < settings.rel_decrease { quiet + 1 } else { 0 };
        if quiet >= 3 && accept(&x, fx, &g) {
            converged = true;
            break;
        }
    }
    OptimOutcome { x, value: fx, grad: g, iterations, converged }
}

fn direction(g: &[f64], mem: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut qv = g.to_vec();
    let mut alphas = Vec::with_capacity(mem.len());
    for (s, y, rho) in mem.iter().rev() {
        let a = rho * dot(s, &qv);
        for (qi, yi) in qv.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = mem.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in qv.iter_mut() {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), a) in mem.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &qv);
        for (qi, si) in qv.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    qv.iter().map(|v| -v).collect()
}

/// Max-norm of a vector; convenience for stopping tests.
pub fn inf_norm(v: &[f64]) -> f64 {
    math::max_abs(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rayleigh_quotient_on_sphere() {
        // f(x) = xᵀAx / xᵀx with A = diag(1..6); minimum 1 at e₁.
        let f = |x: &[f64]| {
            let n2 = dot(x, x);
            let q: f64 = x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum();
            let val = q / n2;
            let g = x.iter().enumerate().map(|(i, v)| 2.0 * ((i + 1) as f64 - val) * v / n2).collect();
            Some((val, g))
        };
        let out = minimize(f, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0], &LbfgsSettings::default(), |_, _, g| norm2(g) < 1e-8);
        assert!(out.converged);
        assert!((out.value - 1.0).abs() < 1e-10, "{}", out.value);
    }
}
