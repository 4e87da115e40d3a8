//! Per-node CSV tables.

use std::path::Path;

use anyhow::{bail, Context};

use rigidlab_core::SphereGrid;

/// Reads a `ring,col,rho` table covering every node of `grid`.
pub fn read_tabulated(path: &Path, grid: &SphereGrid) -> anyhow::Result<Vec<f64>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("cannot open {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(ir), Some(ic), Some(iv)) = (col("ring"), col("col"), col("rho")) else {
        bail!("{}: header must contain ring, col and rho", path.display());
    };
    let mut values = vec![f64::NAN; grid.len()];
    let mut seen = vec![false; grid.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = line + 2;
        let parse_idx = |i: usize, name: &str| -> anyhow::Result<usize> {
            record
                .get(i)
                .unwrap_or("")
                .trim()
                .parse()
                .with_context(|| format!("line {row}: bad {name}"))
        };
        let ring = parse_idx(ir, "ring")?;
        let c = parse_idx(ic, "col")?;
        let rho: f64 = record
            .get(iv)
            .unwrap_or("")
            .trim()
            .parse()
            .with_context(|| format!("line {row}: bad rho"))?;
        if ring >= grid.n_colat() || c >= grid.n_lon() {
            bail!(
                "line {row}: node ({ring}, {c}) outside a {}x{} grid",
                grid.n_colat(),
                grid.n_lon()
            );
        }
        let k = grid.node(ring, c);
        if seen[k] {
            bail!("line {row}: node ({ring}, {c}) listed twice");
        }
        seen[k] = true;
        values[k] = rho;
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        bail!(
            "{}: node ({}, {}) missing",
            path.display(),
            k / grid.n_lon(),
            k % grid.n_lon()
        );
    }
    Ok(values)
}

/// Column-oriented table of node values; leading columns are `node,ring,col,theta,lambda`.
#[derive(Debug, Clone, Default)]
pub struct NodeTable {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl NodeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, values: Vec<f64>) {
        if let Some(first) = self.columns.first() {
            assert_eq!(
                first.len(),
                values.len(),
                "column {name} has the wrong length"
            );
        }
        self.names.push(name.to_string());
        self.columns.push(values);
    }

    pub fn write(&self, path: &Path, grid: &SphereGrid) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_path(path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        let mut header = vec!["node", "ring", "col", "theta", "lambda"];
        header.extend(self.names.iter().map(String::as_str));
        w.write_record(&header)?;
        for k in 0..grid.len() {
            let (t, l) = grid.angles(k);
            let mut row = vec![
                k.to_string(),
                (k / grid.n_lon()).to_string(),
                (k % grid.n_lon()).to_string(),
                fmt_f64(t),
                fmt_f64(l),
            ];
            row.extend(self.columns.iter().map(|c| fmt_f64(c[k])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip representation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}
