//! Truncated box grids, fields with implicit zero extension, potentials,
//! the singular pair measure dν = dx dy/|x−y|^N and Lebesgue norms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{self, abs, powf};

/// Uniform lattice on `[−L, L]^N` with `n` nodes per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxGrid {
    dim: usize,
    half_width: f64,
    n_per_axis: usize,
}

impl BoxGrid {
    pub fn new(dim: usize, half_width: f64, n_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidInput(format!("half width must be positive, got {half_width}")));
        }
        if n_per_axis < 8 {
            return Err(Error::InvalidInput(format!("need at least 8 nodes per axis, got {n_per_axis}")));
        }
        Ok(Self { dim, half_width, n_per_axis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_per_axis(&self) -> usize {
        self.n_per_axis
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_per_axis - 1) as f64
    }

    pub fn node_count(&self) -> usize {
        self.n_per_axis.pow(self.dim as u32)
    }

    /// h^N, the quadrature weight of every node.
    pub fn cell_volume(&self) -> f64 {
        powf(self.spacing(), self.dim as f64)
    }

    /// Per-axis lattice indices of a flat node index (row-major, x fastest).
    pub fn multi_index(&self, idx: usize) -> [usize; 2] {
        let n = self.n_per_axis;
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx % n, idx / n]
        }
    }

    /// Physical coordinate of lattice index `k` along one axis. Works for
    /// indices outside `0..n`, which address the zero-extension shells.
    pub fn axis_coord(&self, k: i64) -> f64 {
        -self.half_width + self.spacing() * k as f64
    }

    /// Coordinates of a node; the second entry is 0 in one dimension.
    pub fn coords(&self, idx: usize) -> [f64; 2] {
        let [i, j] = self.multi_index(idx);
        let y = if self.dim == 2 { self.axis_coord(j as i64) } else { 0.0 };
        [self.axis_coord(i as i64), y]
    }

    pub fn nodes(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.node_count()).map(move |i| self.coords(i))
    }

    /// Default number of zero-extension shells, `n/4`.
    pub fn default_padding(&self) -> usize {
        self.n_per_axis / 4
    }
}

/// Grid function with implicit zero extension outside the box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Field {
    grid: BoxGrid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: BoxGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::InvalidInput(format!(
                "field has {} values for {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(String::from("field values must be finite")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: BoxGrid) -> Self {
        Self { grid, values: alloc::vec![0.0; grid.node_count()] }
    }

    /// Samples `f` at every node; `f` receives `[x, y]` (y = 0 in 1D).
    pub fn from_fn<F: FnMut([f64; 2]) -> f64>(grid: BoxGrid, mut f: F) -> Self {
        Self { grid, values: grid.nodes().map(|x| f(x)).collect() }
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        math::max_abs(&self.values)
    }
}

/// Potential V and weight a sampled on the nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialPair {
    v: Vec<f64>,
    a: Vec<f64>,
    v0: f64,
    a_inf: f64,
}

impl PotentialPair {
    pub fn new(grid: &BoxGrid, v: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let n = grid.node_count();
        if v.len() != n || a.len() != n {
            return Err(Error::InvalidInput(format!("potentials need {n} node values")));
        }
        let v0 = v.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(v0 > 0.0) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("V must be finite with a positive floor, min V = {v0}")));
        }
        if a.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidInput(String::from("a must be positive and finite on every node")));
        }
        let a_inf = math::max_abs(&a);
        Ok(Self { v, a, v0, a_inf })
    }

    pub fn from_fns<F: FnMut([f64; 2]) -> f64, G: FnMut([f64; 2]) -> f64>(
        grid: &BoxGrid,
        mut v: F,
        mut a: G,
    ) -> Result<Self> {
        Self::new(grid, grid.nodes().map(&mut v).collect(), grid.nodes().map(&mut a).collect())
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Coercivity floor V₀ = min V.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Discrete ‖a‖_∞.
    pub fn a_inf(&self) -> f64 {
        self.a_inf
    }

    /// Discrete ‖a‖_r.
    pub fn a_r_norm(&self, grid: &BoxGrid, r: f64) -> f64 {
        let h = grid.cell_volume();
        powf(math::sum(self.a.iter().map(|x| h * powf(*x, r))), 1.0 / r)
    }

    /// Fraction of nodes with V ≤ M.
    pub fn sublevel_fraction(&self, level: f64) -> f64 {
        self.v.iter().filter(|x| **x <= level).count() as f64 / self.v.len() as f64
    }

    /// Smallest V over nodes on the box boundary.
    pub fn boundary_min_v(&self, grid: &BoxGrid) -> f64 {
        let n = grid.n_per_axis();
        (0..grid.node_count())
            .filter(|&i| {
                let [x, y] = grid.multi_index(i);
                x == 0 || x == n - 1 || (grid.dim() == 2 && (y == 0 || y == n - 1))
            })
            .map(|i| self.v[i])
            .fold(f64::INFINITY, f64::min)
    }
}

/// `(u(x) − u(y))/|x − y|^s` for interior nodes `x ≠ y`.
pub fn holder_quotient(u: &Field, x: usize, y: usize, s: f64) -> Result<f64> {
    if x == y {
        return Err(Error::DiagonalPair);
    }
    let g = u.grid();
    let (a, b) = (g.coords(x), g.coords(y));
    let d = math::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]));
    Ok((u.values[x] - u.values[y]) / powf(d, s))
}

/// Node of the padded lattice; indices outside `0..n` lie in the exterior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeNode(pub [i64; 2]);

/// One unordered pair with its folded weight `2h^{2N}/|x−y|^N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairWeight {
    pub x: LatticeNode,
    pub y: LatticeNode,
    pub w: f64,
}

/// Lazy enumeration of unordered pairs of the padded lattice with at least
/// one interior node.
pub struct PairIter {
    grid: BoxGrid,
    padding: i64,
    side: i64,
    total: i64,
    a: i64,
    b: i64,
}

pub fn pair_weights(grid: &BoxGrid, padding: usize) -> PairIter {
    let side = grid.n_per_axis() as i64 + 2 * padding as i64;
    let total = side.pow(grid.dim() as u32);
    PairIter { grid: *grid, padding: padding as i64, side, total, a: 0, b: 0 }
}

impl PairIter {
    fn node(&self, flat: i64) -> LatticeNode {
        let p = self.padding;
        if self.grid.dim() == 1 {
            LatticeNode([flat - p, 0])
        } else {
            LatticeNode([flat % self.side - p, flat / self.side - p])
        }
    }

    fn interior(&self, n: LatticeNode) -> bool {
        let m = self.grid.n_per_axis() as i64;
        let inside = |k: i64| (0..m).contains(&k);
        inside(n.0[0]) && (self.grid.dim() == 1 || inside(n.0[1]))
    }
}

impl Iterator for PairIter {
    type Item = PairWeight;

    fn next(&mut self) -> Option<PairWeight> {
        loop {
            self.b += 1;
            if self.b >= self.total {
                self.a += 1;
                self.b = self.a + 1;
            }
            if self.a >= self.total - 1 {
                return None;
            }
            let (x, y) = (self.node(self.a), self.node(self.b));
            if !(self.interior(x) || self.interior(y)) {
                continue;
            }
            let h = self.grid.spacing();
            let (dx, dy) = ((x.0[0] - y.0[0]) as f64, (x.0[1] - y.0[1]) as f64);
            let dist = h * math::sqrt(dx * dx + dy * dy);
            let n = self.grid.dim() as f64;
            return Some(PairWeight { x, y, w: 2.0 * powf(h, 2.0 * n) / powf(dist, n) });
        }
    }
}

/// `(Σ h^N |u_i|^p)^{1/p}`.
pub fn lp_norm(u: &Field, p: f64) -> f64 {
    powf(lp_norm_pow(u.values(), u.grid().cell_volume(), p), 1.0 / p)
}

/// `Σ h^N |u_i|^p`.
pub fn lp_norm_pow(u: &[f64], cell: f64, p: f64) -> f64 {
    math::sum(u.iter().filter(|x| **x != 0.0).map(|x| cell * powf(abs(*x), p)))
}

/// `(Σ h^N a_i |u_i|^q)^{1/q}`.
pub fn weighted_q_norm(u: &Field, a: &[f64], q: f64) -> f64 {
    powf(weighted_q_norm_pow(u.values(), a, u.grid().cell_volume(), q), 1.0 / q)
}

/// `Σ h^N a_i |u_i|^q`.
pub fn weighted_q_norm_pow(u: &[f64], a: &[f64], cell: f64, q: f64) -> f64 {
    math::sum(u.iter().zip(a).filter(|(x, _)| **x != 0.0).map(|(x, w)| cell * w * powf(abs(*x), q)))
}

pub use crate::functionals::{embedding_constant, EmbeddingEstimate};
