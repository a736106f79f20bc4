//! Numerics for the Nehari-manifold and nonlinear Rayleigh quotient method
//! applied to the fractional Φ-Laplacian problem
//!
//! ```text
//! (−Δ_Φ)^s u + V(x) φ(|u|)u = μ a(x)|u|^{q−2}u − λ|u|^{p−2}u
//! ```
//!
//! on a truncated box with zero extension. The crate is `no_std` (it needs
//! `alloc`) and every reduction uses compensated summation in a fixed order,
//! so results do not depend on how callers schedule work across threads.
//!
//! Module map:
//! - [`nfunction`]: growth laws Φ, conjugates, Sobolev conjugate, hypothesis checks
//! - [`grid`]: box grids, fields, potentials, pair tables, norms, embedding constants
//! - [`functionals`]: modular, Luxemburg norm, energy and derivatives
//! - [`fibering`]: Rayleigh quotients along rays, 𝗍(u), 𝗌(u), Nehari roots
//! - [`extremal`]: Λ_n, Λ_e and the extremal parameters μ_n(λ), μ_e(λ)
//! - [`solver`]: constrained minimization on 𝒩⁻ and 𝒩⁺, certificates, sweeps
//! - [`calibration`]: the closed-form toy problem used as an oracle

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod calibration;
pub mod error;
pub mod extremal;
pub mod fibering;
pub mod functionals;
pub mod grid;
pub mod math;
pub mod nfunction;
pub mod optim;
pub mod seeds;
pub mod solver;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use extremal::{ExtremalResult, ExtremalSettings, Which};
pub use fibering::{Classification, FiberingProfile, NehariRoots, RootStatus};
pub use functionals::{Discretization, EnergyBreakdown, ProblemData};
pub use grid::{BoxGrid, Field, PotentialPair};
pub use nfunction::{GrowthLaw, HypothesisReport, LawKind};
pub use solver::{Branch, SolutionReport, SolverSettings};
