//! Output bundle: CSV tables with `#` header comments, JSON reports,
//! gnuplot scripts and the run manifest. All writes go through one
//! [`OutputBundle`] owned by the orchestrating thread.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::RunConfig;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A table whose cells are already formatted.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), ..Self::default() }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    /// Adds `# name = value` for a float.
    pub fn annotate(&mut self, name: &str, value: f64) -> &mut Self {
        self.comment(format!("{name} = {}", fmt_f64(value)))
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for c in &self.comments {
            out.extend_from_slice(format!("# {c}\n").as_bytes());
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    tool_version: &'a str,
    core_version: &'a str,
    seed: u64,
    threads: usize,
    config: &'a RunConfig,
    files: &'a [String],
    wall_times_s: &'a BTreeMap<String, f64>,
    status: &'a str,
}

pub struct OutputBundle {
    dir: PathBuf,
    files: Vec<String>,
    timings: BTreeMap<String, f64>,
    started: Instant,
}

impl OutputBundle {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new(), timings: BTreeMap::new(), started: Instant::now() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<()> {
        let bytes = table.to_bytes()?;
        self.write_bytes(name, &bytes)
    }

    /// Pretty JSON; key order follows struct field order, maps must be
    /// ordered.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    pub fn script(&mut self, name: &str, text: &str) -> Result<()> {
        self.write_bytes(name, text.as_bytes())
    }

    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.timings.insert(stage.to_string(), t0.elapsed().as_secs_f64());
        out
    }

    pub fn finish(mut self, command: &str, config: &RunConfig, status: &str) -> Result<PathBuf> {
        self.timings.insert("total".to_string(), self.started.elapsed().as_secs_f64());
        let manifest = Manifest {
            command,
            tool_version: env!("CARGO_PKG_VERSION"),
            core_version: nehari_core::VERSION,
            seed: config.seed,
            threads: config.threads,
            config,
            files: &self.files,
            wall_times_s: &self.timings,
            status,
        };
        let path = self.dir.join("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// A gnuplot script plotting `columns` of `data` against column `x`.
pub fn gnuplot(title: &str, data: &str, x: (usize, &str), ys: &[(usize, &str)], logx: bool, extra: &[String]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set title '{title}'\nset xlabel '{}'\nset grid\n", x.1));
    if logx {
        s.push_str("set logscale x\n");
    }
    for e in extra {
        s.push_str(e);
        s.push('\n');
    }
    let curves: Vec<String> =
        ys.iter().map(|(c, name)| format!("'{data}' using {}:{c} with linespoints title '{name}'", x.0)).collect();
    s.push_str(&format!("plot {}\n", curves.join(", \\\n     ")));
    s
}
