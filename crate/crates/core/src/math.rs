//! Scalar helpers: libm wrappers, compensated sums, monotone root finding
//! and adaptive quadrature.

use alloc::format;

use crate::error::{Error, Result};

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn signum0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Neumaier's improved Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum in iteration order.
pub fn sum<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut acc = Neumaier::new();
    for x in items {
        acc.add(x);
    }
    acc.value()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    sum(a.iter().zip(b).map(|(x, y)| x * y))
}

pub fn norm2(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(abs(*x)))
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (ln(lo), ln(hi));
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |k| if k + 1 == n { hi } else { exp(a + step * k as f64) })
}

/// Finds `lo < hi` with `f(lo) < 0 <= f(hi)` for an increasing `f`, growing
/// geometrically by `factor` away from `start`.
pub fn bracket_increasing<F: FnMut(f64) -> f64>(
    f: &mut F,
    start: f64,
    factor: f64,
    max_steps: usize,
) -> Result<(f64, f64)> {
    let f0 = f(start);
    if f0.is_nan() {
        return Err(Error::BracketFailure(format!("NaN at t = {start}")));
    }
    if f0 < 0.0 {
        let mut lo = start;
        for _ in 0..max_steps {
            let hi = lo * factor;
            let v = f(hi);
            if v.is_nan() {
                break;
            }
            if v >= 0.0 {
                return Ok((lo, hi));
            }
            lo = hi;
        }
        Err(Error::BracketFailure(format!(
            "no sign change up to t = {lo:e}"
        )))
    } else {
        let mut hi = start;
        for _ in 0..max_steps {
            let lo = hi / factor;
            let v = f(lo);
            if v.is_nan() {
                break;
            }
            if v < 0.0 {
                return Ok((lo, hi));
            }
            hi = lo;
        }
        Err(Error::BracketFailure(format!(
            "no sign change down to t = {hi:e}"
        )))
    }
}

/// Bisection for an increasing `f` on a bracket with `f(lo) < 0 <= f(hi)`.
/// Uses geometric midpoints while the bracket spans more than a factor 4.
pub fn bisect_increasing<F: FnMut(f64) -> f64>(
    f: &mut F,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> f64 {
    for _ in 0..max_iter {
        if hi - lo <= rel_tol * abs(hi) {
            break;
        }
        let mid = if lo > 0.0 && hi > 4.0 * lo {
            sqrt(lo * hi)
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`. The tolerance is relative
/// to the magnitude of a 32-panel composite estimate.
pub fn integrate<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    const PANELS: usize = 32;
    let width = (b - a) / PANELS as f64;
    let mut coarse = Neumaier::new();
    let mut scale = Neumaier::new();
    let mut panels = [(0.0, 0.0, 0.0, 0.0, 0.0, 0.0); PANELS];
    for (k, slot) in panels.iter_mut().enumerate() {
        let x0 = a + width * k as f64;
        let x1 = if k + 1 == PANELS { b } else { x0 + width };
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        let s = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        coarse.add(s);
        scale.add(abs(s));
        *slot = (x0, x1, f0, fm, f1, s);
    }
    let tol = rel_tol * scale.value().max(f64::MIN_POSITIVE) / PANELS as f64;
    let mut total = Neumaier::new();
    for &(x0, x1, f0, fm, f1, s) in panels.iter() {
        total.add(simpson_rec(f, x0, x1, f0, fm, f1, s, tol, 48));
    }
    total.value()
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || abs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let v = sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }

    #[test]
    fn bisection_finds_cube_root() {
        let mut f = |t: f64| t * t * t - 2.0;
        let (lo, hi) = bracket_increasing(&mut f, 1.0, 4.0, 100).unwrap();
        let r = bisect_increasing(&mut f, lo, hi, 1e-14, 300);
        assert!((r - powf(2.0, 1.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn bracket_searches_downward() {
        let mut f = |t: f64| t - 1e-6;
        let (lo, hi) = bracket_increasing(&mut f, 1.0, 4.0, 100).unwrap();
        assert!(lo < 1e-6 && hi >= 1e-6);
    }

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = integrate(&mut |x: f64| libm::sin(x), 0.0, core::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
        let w = integrate(&mut |x: f64| sqrt(x), 0.0, 1.0, 1e-10);
        assert!((w - 2.0 / 3.0).abs() < 1e-9);
    }
}
