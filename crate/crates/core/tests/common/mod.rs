#![allow(dead_code)]

use std::sync::Arc;

use nehari_core::seeds;
use nehari_core::{BoxGrid, Discretization, GrowthLaw, PotentialPair, ProblemData};
use rand::Rng;

pub fn laws() -> Vec<(&'static str, GrowthLaw)> {
    vec![
        ("power2", GrowthLaw::power(2.0).unwrap()),
        ("powersum23", GrowthLaw::power_sum(2.0, 3.0).unwrap()),
        ("powerlog2", GrowthLaw::power_log(2.0).unwrap()),
    ]
}

/// V = 1 + x², a = gaussian, zero extension with n/4 padding shells.
pub fn disc_1d(n: usize, half_width: f64, s: f64) -> Arc<Discretization> {
    let grid = BoxGrid::new(1, half_width, n).unwrap();
    let pots = PotentialPair::from_fns(&grid, |x| 1.0 + x[0] * x[0], |x| (-x[0] * x[0] / 2.0).exp()).unwrap();
    Arc::new(Discretization::new(grid, s, grid.default_padding(), pots).unwrap())
}

pub fn problem(law: GrowthLaw, n: usize, q: f64, p: f64, lambda: f64, mu: f64) -> ProblemData {
    ProblemData::new_unchecked(law, disc_1d(n, 3.0, 0.4), q, p, lambda, mu).unwrap()
}

/// The 65-node reference problem: Power 2, q = 3, p = 4, s = 0.4.
pub fn reference(lambda: f64, mu: f64) -> ProblemData {
    ProblemData::new(GrowthLaw::power(2.0).unwrap(), disc_1d(65, 3.0, 0.4), 3.0, 4.0, lambda, mu).unwrap()
}

pub fn random_field(pd: &ProblemData, rng: &mut impl Rng) -> Vec<f64> {
    let grid = *pd.grid();
    if rng.gen::<bool>() {
        let bumps = 1 + rng.gen_range(0..3);
        seeds::random_bumps(&grid, rng, bumps, 0.1).into_values()
    } else {
        seeds::random_nodal(&grid, rng).into_values()
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
