//! A quadratic toy problem with closed-form fibering data.
//!
//! With Φ(t) = t²/2, q = 3, p = 4 and λ = 1, a ray `u` with
//! `A = Σ ω z² = 2`, `B = ‖u‖_4^4 = 1/2` and `C = ‖u‖_{3,a}^3 = 1` has
//! `Q_n(t) = 2/t + t/2`, so 𝗍 = 2, Λ_n = 2, 𝗌 = √8, Λ_e = 3/√2, and the
//! Nehari roots at μ = 5/2 are 1 and 4. The builder picks a constant
//! potential V ≡ κ and a constant weight a that realise these values on a
//! given grid.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::functionals::{Discretization, ProblemData};
use crate::grid::{lp_norm_pow, weighted_q_norm_pow, BoxGrid, Field, PotentialPair};
use crate::math::{exp, sqrt};
use crate::nfunction::GrowthLaw;

pub const TOY_Q: f64 = 3.0;
pub const TOY_P: f64 = 4.0;
pub const TOY_LAMBDA: f64 = 1.0;
pub const TOY_A: f64 = 2.0;
pub const TOY_B: f64 = 0.5;
/// μ at which the toy ray has roots 1 and 4.
pub const TOY_MU: f64 = 2.5;

#[derive(Clone, Debug)]
pub struct ToyProblem {
    pub pd: ProblemData,
    /// The calibrated ray.
    pub u: Vec<f64>,
    pub kappa: f64,
    pub a_const: f64,
    pub width: f64,
}

fn quadratic_sum(disc: &Discretization, u: &[f64]) -> f64 {
    disc.atom_sum(u, |z| z * z)
}

/// Builds the toy on `grid` with fractional order `s`.
pub fn toy_problem(grid: BoxGrid, s: f64) -> Result<ToyProblem> {
    let law = GrowthLaw::power(2.0)?;
    let l = grid.half_width();
    let cell = grid.cell_volume();
    for k in 0..30 {
        let width = l * (0.15 + 0.02 * k as f64);
        let shape = Field::from_fn(grid, |x| exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * width * width))).into_values();
        let ones = PotentialPair::new(&grid, vec![1.0; grid.node_count()], vec![1.0; grid.node_count()])?;
        let disc1 = Discretization::new(grid, s, grid.default_padding(), ones)?;
        let a_total = quadratic_sum(&disc1, &shape);
        let a_bulk: f64 = cell * shape.iter().map(|v| v * v).sum::<f64>();
        let a_nl = a_total - a_bulk;
        let b = lp_norm_pow(&shape, cell, TOY_P);
        // A²/B is invariant under scaling u, so fix it first.
        let kappa = (sqrt(8.0 * b) - a_nl) / a_bulk;
        if !(kappa >= 0.1) {
            continue;
        }
        let a_scaled = a_nl + kappa * a_bulk;
        let amp = sqrt(TOY_A / a_scaled);
        let u: Vec<f64> = shape.iter().map(|v| amp * v).collect();
        let c_unit = weighted_q_norm_pow(&u, &vec![1.0; u.len()], cell, TOY_Q);
        let a_const = 1.0 / c_unit;
        let n = grid.node_count();
        let pots = PotentialPair::new(&grid, vec![kappa; n], vec![a_const; n])?;
        let disc = Arc::new(Discretization::new(grid, s, grid.default_padding(), pots)?);
        let pd = ProblemData::new(law, disc, TOY_Q, TOY_P, TOY_LAMBDA, TOY_MU)?;
        return Ok(ToyProblem { pd, u, kappa, a_const, width });
    }
    Err(Error::InvalidInput(format!("no bump width gives a positive toy potential on this grid (L = {l})")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_atoms_hit_targets() {
        let grid = BoxGrid::new(1, 8.0, 65).unwrap();
        let toy = toy_problem(grid, 0.4).unwrap();
        let atoms = toy.pd.ray_atoms(&toy.u);
        let a: f64 = atoms.w.iter().zip(&atoms.z).map(|(w, z)| w * z * z).sum();
        assert!((a - TOY_A).abs() < 1e-12);
        assert!((atoms.b - TOY_B).abs() < 1e-12);
        assert!((atoms.c - 1.0).abs() < 1e-12);
    }
}
