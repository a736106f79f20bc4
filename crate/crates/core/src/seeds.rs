//! Deterministic starting fields for the descents and random probe fields.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::{BoxGrid, Field};
use crate::math::exp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedKind {
    Gaussian,
    TwoBump,
    RandomPositive,
    SignChanging,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sq_dist(x: [f64; 2], c: [f64; 2]) -> f64 {
    (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1])
}

pub fn gaussian_bump(grid: &BoxGrid, center: [f64; 2], width: f64) -> Field {
    Field::from_fn(*grid, |x| exp(-sq_dist(x, center) / (2.0 * width * width)))
}

pub fn two_bump(grid: &BoxGrid, separation: f64, width: f64) -> Field {
    let c = [0.5 * separation, 0.0];
    let d = [-0.5 * separation, 0.0];
    Field::from_fn(*grid, |x| {
        exp(-sq_dist(x, c) / (2.0 * width * width)) + 0.7 * exp(-sq_dist(x, d) / (2.0 * width * width))
    })
}

/// Smooth random field: a sum of `bumps` random Gaussians with amplitudes in
/// `[lo, 1]`, confined by an envelope that decays toward the box boundary.
pub fn random_bumps<R: Rng>(grid: &BoxGrid, rng: &mut R, bumps: usize, lo: f64) -> Field {
    let l = grid.half_width();
    let dim2 = grid.dim() == 2;
    let mut spec = Vec::with_capacity(bumps);
    for _ in 0..bumps {
        let cx = (rng.gen::<f64>() - 0.5) * l;
        let cy = if dim2 { (rng.gen::<f64>() - 0.5) * l } else { 0.0 };
        let w = l * (0.05 + 0.25 * rng.gen::<f64>());
        let amp = lo + (1.0 - lo) * rng.gen::<f64>();
        spec.push(([cx, cy], w, amp));
    }
    let env = l / 2.5;
    Field::from_fn(*grid, |x| {
        let base: f64 = spec.iter().map(|(c, w, a)| a * exp(-sq_dist(x, *c) / (2.0 * w * w))).sum();
        base * exp(-sq_dist(x, [0.0, 0.0]) / (2.0 * env * env))
    })
}

/// Node-wise independent values in `[-1, 1]`, the roughest admissible probe.
pub fn random_nodal<R: Rng>(grid: &BoxGrid, rng: &mut R) -> Field {
    Field::from_fn(*grid, |_| 2.0 * rng.gen::<f64>() - 1.0)
}

pub fn seed_field(grid: &BoxGrid, kind: SeedKind, seed: u64) -> Field {
    let l = grid.half_width();
    match kind {
        SeedKind::Gaussian => gaussian_bump(grid, [0.0, 0.0], l / 6.0),
        SeedKind::TwoBump => two_bump(grid, l / 2.0, l / 10.0),
        SeedKind::RandomPositive => random_bumps(grid, &mut rng(seed), 4, 0.2),
        SeedKind::SignChanging => {
            let mut f = two_bump(grid, l / 2.0, l / 10.0);
            for (i, v) in f.values_mut().iter_mut().enumerate() {
                if grid.coords(i)[0] < 0.0 {
                    *v *= -0.6;
                }
            }
            f
        }
    }
}

/// The multistart set: one centred bump, one two-bump, one sign-changing
/// field and random positive fields up to `count` starts.
pub fn default_starts(grid: &BoxGrid, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count.max(3));
    out.push(seed_field(grid, SeedKind::Gaussian, seed).into_values());
    out.push(seed_field(grid, SeedKind::TwoBump, seed).into_values());
    out.push(seed_field(grid, SeedKind::SignChanging, seed).into_values());
    let mut r = rng(seed);
    while out.len() < count {
        out.push(random_bumps(grid, &mut r, 3, 0.2).into_values());
    }
    out.truncate(count.max(3));
    out
}
