//! Run configuration: parsing (TOML or JSON), validation and construction
//! of the numerical problem.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use nehari_core::nfunction::LawTable;
use nehari_core::seeds::SeedKind;
use nehari_core::{BoxGrid, Discretization, ExtremalSettings, GrowthLaw, PotentialPair, ProblemData, SolverSettings};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), message: message.into() }
}

/// Growth law by family and exponents, or a tabulated CSV of `(t, φ, φ′)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LawSpec {
    Power { p: f64 },
    PowerSum { p: f64, q: f64 },
    PowerLog { p: f64 },
    Custom {
        csv: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ell: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default = "one")]
    pub dim: usize,
    pub s: f64,
    /// Half-width L of the box [−L, L]^N.
    pub half_width: f64,
    pub n_per_axis: usize,
    /// Zero-extension shells; defaults to n/4.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<usize>,
}

fn one() -> usize {
    1
}

/// V(x); `quadratic` is `c0 + c2|x|²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Constant { value: f64 },
    Quadratic { c0: f64, c2: f64 },
    File { path: PathBuf },
}

impl Default for PotentialSpec {
    fn default() -> Self {
        Self::Quadratic { c0: 1.0, c2: 1.0 }
    }
}

/// a(x); `gaussian` is `amplitude·exp(−|x|²/(2σ²))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant { value: f64 },
    Gaussian {
        #[serde(default = "unit")]
        amplitude: f64,
        sigma: f64,
    },
    File { path: PathBuf },
}

fn unit() -> f64 {
    1.0
}

impl Default for WeightSpec {
    fn default() -> Self {
        Self::Gaussian { amplitude: 1.0, sigma: 1.0 }
    }
}

/// μ values: explicit, or multipliers of μ̂_n(λ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MuSpec {
    Explicit(Vec<f64>),
    Auto(Vec<f64>),
}

impl MuSpec {
    pub fn values(&self) -> &[f64] {
        match self {
            Self::Explicit(v) | Self::Auto(v) => v,
        }
    }

    pub fn resolve(&self, mu_n_hat: f64) -> Vec<f64> {
        match self {
            Self::Explicit(v) => v.clone(),
            Self::Auto(v) => v.iter().map(|f| f * mu_n_hat).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub q: f64,
    pub p: f64,
    pub lambdas: Vec<f64>,
    pub mu: MuSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub restarts: usize,
    pub max_iter: usize,
    pub resid_rel: f64,
    /// Half-width of the μ band around μ̂_e, relative to μ̂_e.
    pub sign_band_rel: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self { restarts: 4, max_iter: 2000, resid_rel: 1e-6, sign_band_rel: nehari_core::solver::DEFAULT_SIGN_BAND_REL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FiberingSpec {
    pub samples: usize,
    pub seed_kind: SeedKind,
}

impl Default for FiberingSpec {
    fn default() -> Self {
        Self { samples: 200, seed_kind: SeedKind::Gaussian }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonexistSpec {
    pub samples: usize,
}

impl Default for NonexistSpec {
    fn default() -> Self {
        Self { samples: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "one")]
    pub threads: usize,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    pub law: LawSpec,
    pub domain: DomainSpec,
    #[serde(default)]
    pub potential: PotentialSpec,
    #[serde(default)]
    pub weight: WeightSpec,
    pub problem: ProblemSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub fibering: FiberingSpec,
    #[serde(default)]
    pub nonexist: NonexistSpec,
}

fn default_seed() -> u64 {
    7
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, column)
}

impl RunConfig {
    /// Parses TOML, or JSON when the path ends in `.json` or the text starts
    /// with `{`. Relative file paths inside the config are resolved against
    /// the config's directory.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let mut cfg = Self::parse(&text, json, &path.display().to_string())?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    pub fn parse(text: &str, json: bool, origin: &str) -> Result<Self, ConfigError> {
        if json {
            serde_json::from_str(text).map_err(|e| ConfigError::Parse {
                path: origin.to_string(),
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })
        } else {
            toml::from_str(text).map_err(|e| {
                let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
                ConfigError::Parse { path: origin.to_string(), line, column, message: e.message().trim().to_string() }
            })
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        if let LawSpec::Custom { csv, .. } = &mut self.law {
            fix(csv);
        }
        if let PotentialSpec::File { path } = &mut self.potential {
            fix(path);
        }
        if let WeightSpec::File { path } = &mut self.weight {
            fix(path);
        }
    }

    /// Structural checks that do not need the numerics.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let d = &self.domain;
        if !(d.dim == 1 || d.dim == 2) {
            return Err(invalid("domain.dim", format!("must be 1 or 2, got {}", d.dim)));
        }
        if !(d.s > 0.0 && d.s < 1.0) {
            return Err(invalid("domain.s", format!("must lie in (0, 1), got {}", d.s)));
        }
        if !(d.half_width > 0.0) {
            return Err(invalid("domain.half_width", "must be positive"));
        }
        if d.n_per_axis < 3 {
            return Err(invalid("domain.n_per_axis", "need at least 3 nodes"));
        }
        if self.problem.lambdas.is_empty() || self.problem.lambdas.iter().any(|l| !(*l > 0.0)) {
            return Err(invalid("problem.lambdas", "need at least one positive value"));
        }
        let mus = self.problem.mu.values();
        if mus.is_empty() || mus.iter().any(|m| !(*m > 0.0)) {
            return Err(invalid("problem.mu", "need at least one positive value"));
        }
        if self.threads == 0 {
            return Err(invalid("threads", "must be at least 1"));
        }
        if self.solver.restarts == 0 {
            return Err(invalid("solver.restarts", "must be at least 1"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<BoxGrid, ConfigError> {
        let d = &self.domain;
        BoxGrid::new(d.dim, d.half_width, d.n_per_axis).map_err(|e| invalid("domain", e.to_string()))
    }

    pub fn law(&self) -> Result<GrowthLaw, ConfigError> {
        let law = match &self.law {
            LawSpec::Power { p } => GrowthLaw::power(*p),
            LawSpec::PowerSum { p, q } => GrowthLaw::power_sum(*p, *q),
            LawSpec::PowerLog { p } => GrowthLaw::power_log(*p),
            LawSpec::Custom { csv, ell, m } => {
                let table = read_law_table(csv)?;
                GrowthLaw::custom(&table, *ell, *m)
            }
        };
        law.map_err(|e| invalid("law", e.to_string()))
    }

    pub fn discretization(&self) -> Result<Arc<Discretization>, ConfigError> {
        let grid = self.grid()?;
        let v = match &self.potential {
            PotentialSpec::Constant { value } => vec![*value; grid.node_count()],
            PotentialSpec::Quadratic { c0, c2 } => grid.nodes().map(|x| c0 + c2 * (x[0] * x[0] + x[1] * x[1])).collect(),
            PotentialSpec::File { path } => read_node_values(path, grid.node_count())?,
        };
        let a = match &self.weight {
            WeightSpec::Constant { value } => vec![*value; grid.node_count()],
            WeightSpec::Gaussian { amplitude, sigma } => {
                grid.nodes().map(|x| amplitude * (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * sigma * sigma)).exp()).collect()
            }
            WeightSpec::File { path } => read_node_values(path, grid.node_count())?,
        };
        let pots = PotentialPair::new(&grid, v, a).map_err(|e| invalid("potential", e.to_string()))?;
        let padding = self.domain.padding.unwrap_or_else(|| grid.default_padding());
        let disc = Discretization::new(grid, self.domain.s, padding, pots).map_err(|e| invalid("domain", e.to_string()))?;
        Ok(Arc::new(disc))
    }

    /// Problem at the first λ and first listed μ value, without checking
    /// hypotheses.
    pub fn problem_unchecked(&self) -> Result<ProblemData, ConfigError> {
        self.validate()?;
        let pr = &self.problem;
        ProblemData::new_unchecked(self.law()?, self.discretization()?, pr.q, pr.p, pr.lambdas[0], pr.mu.values()[0])
            .map_err(|e| invalid("problem", e.to_string()))
    }

    /// As [`Self::problem_unchecked`] but rejecting configurations that fail
    /// any hypothesis.
    pub fn problem(&self) -> Result<ProblemData, ConfigError> {
        let pd = self.problem_unchecked()?;
        let rep = pd.hypothesis_report();
        if let Some(f) = rep.failures().next() {
            return Err(invalid("problem", format!("hypothesis {} fails: {}", f.name, f.detail)));
        }
        Ok(pd)
    }

    pub fn extremal_settings(&self) -> ExtremalSettings {
        ExtremalSettings { restarts: self.solver.restarts, seed: self.seed, ..ExtremalSettings::default() }
    }

    pub fn solver_settings(&self) -> SolverSettings {
        let mut s = SolverSettings { resid_rel: self.solver.resid_rel, ..SolverSettings::default() };
        s.lbfgs.max_iter = self.solver.max_iter;
        s
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>, ConfigError> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| invalid(&path.display().to_string(), e.to_string()))
}

/// Numeric rows of a CSV file; a non-numeric first row is taken as a header.
fn numeric_rows(path: &Path) -> Result<Vec<Vec<f64>>, ConfigError> {
    let mut rows = Vec::new();
    for (i, rec) in csv_reader(path)?.records().enumerate() {
        let rec = rec.map_err(|e| invalid(&path.display().to_string(), e.to_string()))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(invalid(&path.display().to_string(), format!("row {}: {e}", i + 1))),
        }
    }
    Ok(rows)
}

pub fn read_law_table(path: &Path) -> Result<LawTable, ConfigError> {
    let mut table = LawTable { t: Vec::new(), phi: Vec::new(), phi_prime: Vec::new() };
    for row in numeric_rows(path)? {
        if row.len() != 3 {
            return Err(invalid(&path.display().to_string(), "law tables need three columns t, phi, phi_prime"));
        }
        table.t.push(row[0]);
        table.phi.push(row[1]);
        table.phi_prime.push(row[2]);
    }
    Ok(table)
}

/// One value per grid node in storage order (last column of each row).
pub fn read_node_values(path: &Path, count: usize) -> Result<Vec<f64>, ConfigError> {
    let values: Vec<f64> = numeric_rows(path)?.into_iter().filter_map(|r| r.last().copied()).collect();
    if values.len() != count {
        return Err(invalid(&path.display().to_string(), format!("expected {count} node values, found {}", values.len())));
    }
    Ok(values)
}
