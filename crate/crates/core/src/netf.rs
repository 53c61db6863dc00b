//! The 15-feature NetF vector and the dataset feature matrix.
//!
//! Column order is fixed: `k, d, S, C, Q` for the WNVG, then the WHVG, then
//! the QG.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::netmap::{hvg, nvg, quantile_graph, Graph};
use crate::topo::{topo_summary, TopoSummary};
use crate::tsio::{Dataset, TimeSeries};

/// Number of quantile bins used when none is given.
pub const DEFAULT_ETA: usize = 50;

pub const FEATURE_NAMES: [&str; 15] = [
    "wnvg_k", "wnvg_d", "wnvg_S", "wnvg_C", "wnvg_Q", //
    "whvg_k", "whvg_d", "whvg_S", "whvg_C", "whvg_Q", //
    "qg_k", "qg_d", "qg_S", "qg_C", "qg_Q",
];

const MEASURES: [&str; 5] = ["k", "d", "S", "C", "Q"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mapping {
    Wnvg,
    Whvg,
    Qg,
}

impl Mapping {
    pub const ALL: [Mapping; 3] = [Mapping::Wnvg, Mapping::Whvg, Mapping::Qg];

    pub fn name(self) -> &'static str {
        match self {
            Mapping::Wnvg => "wnvg",
            Mapping::Whvg => "whvg",
            Mapping::Qg => "qg",
        }
    }

    /// Column names of this mapping's five-feature block.
    pub fn columns(self) -> [String; 5] {
        MEASURES.map(|m| format!("{}_{m}", self.name()))
    }

    pub fn graph(self, values: &[f64], eta: usize) -> Result<Graph> {
        match self {
            Mapping::Wnvg => nvg(values),
            Mapping::Whvg => hvg(values),
            Mapping::Qg => quantile_graph(values, eta),
        }
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mapping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mapping::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::InvalidArgument(format!("unknown mapping {s:?} (expected wnvg, whvg or qg)"))
            })
    }
}

/// Input properties under which some features degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct InputFlags {
    pub constant: bool,
    /// Strictly increasing or strictly decreasing.
    pub monotone: bool,
    /// Fewer observations than quantile bins.
    pub shorter_than_eta: bool,
}

impl InputFlags {
    pub fn of(values: &[f64], eta: usize) -> Self {
        let constant = values.windows(2).all(|w| w[0] == w[1]);
        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = values.windows(2).all(|w| w[0] > w[1]);
        InputFlags {
            constant,
            monotone: !constant && (increasing || decreasing),
            shorter_than_eta: values.len() < eta,
        }
    }

    fn messages(self) -> Vec<String> {
        let mut out = Vec::new();
        if self.constant {
            out.push("constant series, quantile graph collapses to one node".to_string());
        }
        if self.monotone {
            out.push("monotone series, quantile graph is a chain".to_string());
        }
        if self.shorter_than_eta {
            out.push("fewer observations than quantile bins".to_string());
        }
        out
    }
}

/// Topological summaries of the three mappings of one series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetFVector {
    pub wnvg: TopoSummary,
    pub whvg: TopoSummary,
    pub qg: TopoSummary,
    pub flags: InputFlags,
}

impl NetFVector {
    pub fn values(&self) -> [f64; 15] {
        let mut out = [0.0; 15];
        for (block, s) in [&self.wnvg, &self.whvg, &self.qg].into_iter().enumerate() {
            out[block * 5..block * 5 + 5].copy_from_slice(&s.values());
        }
        out
    }

    pub fn summary(&self, mapping: Mapping) -> &TopoSummary {
        match mapping {
            Mapping::Wnvg => &self.wnvg,
            Mapping::Whvg => &self.whvg,
            Mapping::Qg => &self.qg,
        }
    }

    /// Degenerate inputs and measures that were encoded as 0.
    pub fn warnings(&self) -> Vec<String> {
        warnings_for(
            self.flags,
            Mapping::ALL.iter().map(|&m| (m, *self.summary(m))),
        )
    }
}

fn warnings_for(
    flags: InputFlags,
    summaries: impl IntoIterator<Item = (Mapping, TopoSummary)>,
) -> Vec<String> {
    let mut out = flags.messages();
    out.extend(
        summaries
            .into_iter()
            .filter(|(_, s)| !s.path_length_defined)
            .map(|(m, _)| format!("{m}: no connected node pair, average path length set to 0")),
    );
    out
}

/// Maps the series into the three graphs and measures each.
pub fn netf(series: &TimeSeries, eta: usize) -> Result<NetFVector> {
    let blocks = netf_for(series, eta, &Mapping::ALL)?;
    Ok(NetFVector {
        wnvg: blocks[0].1,
        whvg: blocks[1].1,
        qg: blocks[2].1,
        flags: InputFlags::of(series.values(), eta),
    })
}

/// Summaries for a subset of the mappings, in the order given.
pub fn netf_for(
    series: &TimeSeries,
    eta: usize,
    mappings: &[Mapping],
) -> Result<Vec<(Mapping, TopoSummary)>> {
    series.ensure_mappable()?;
    mappings
        .iter()
        .map(|&m| Ok((m, topo_summary(&m.graph(series.values(), eta)?)?)))
        .collect()
}

/// Rows are series, columns are features.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureMatrix {
    row_ids: Vec<String>,
    labels: Option<Vec<String>>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    /// Per-column `(min, max)` used by [`minmax_rescale`].
    scaling: Option<Vec<(f64, f64)>>,
    warnings: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(
        row_ids: Vec<String>,
        labels: Option<Vec<String>>,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if row_ids.len() != rows.len() {
            return Err(Error::SizeMismatch {
                expected: rows.len(),
                actual: row_ids.len(),
            });
        }
        if let Some(labels) = &labels {
            if labels.len() != rows.len() {
                return Err(Error::SizeMismatch {
                    expected: rows.len(),
                    actual: labels.len(),
                });
            }
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != columns.len()) {
            return Err(Error::SizeMismatch {
                expected: columns.len(),
                actual: bad.len(),
            });
        }
        Ok(Self {
            row_ids,
            labels,
            columns,
            rows,
            scaling: None,
            warnings: Vec::new(),
        })
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn scaling(&self) -> Option<&[(f64, f64)]> {
        self.scaling.as_deref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Keeps the given columns, in the given order.
    pub fn select_columns(&self, names: &[String]) -> Result<FeatureMatrix> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.columns
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| Error::InvalidArgument(format!("no feature column {n:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(FeatureMatrix {
            row_ids: self.row_ids.clone(),
            labels: self.labels.clone(),
            columns: names.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| idx.iter().map(|&j| r[j]).collect())
                .collect(),
            scaling: self
                .scaling
                .as_ref()
                .map(|s| idx.iter().map(|&j| s[j]).collect()),
            warnings: self.warnings.clone(),
        })
    }

    /// Keeps the five-feature blocks of the given mappings.
    pub fn select_mappings(&self, mappings: &[Mapping]) -> Result<FeatureMatrix> {
        let names: Vec<String> = mappings.iter().flat_map(|m| m.columns()).collect();
        self.select_columns(&names)
    }

    /// Feature CSV: `id`, optional `label`, then one column per feature.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        write!(out, "id")?;
        if self.labels.is_some() {
            write!(out, ",label")?;
        }
        for c in &self.columns {
            write!(out, ",{c}")?;
        }
        writeln!(out)?;
        for (i, row) in self.rows.iter().enumerate() {
            write!(out, "{}", self.row_ids[i])?;
            if let Some(labels) = &self.labels {
                write!(out, ",{}", labels[i])?;
            }
            for v in row {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_csv(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }

    /// Reads the layout written by [`FeatureMatrix::write_csv`]; a second
    /// column named `label` is taken as class labels.
    pub fn read_csv<R: Read>(reader: R) -> Result<FeatureMatrix> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| Error::Parse {
                row: 0,
                column: 0,
                message: e.to_string(),
            })?
            .clone();
        let has_labels = header.get(1) == Some("label");
        let first = if has_labels { 2 } else { 1 };
        let columns: Vec<String> = header.iter().skip(first).map(str::to_string).collect();

        let (mut ids, mut labels, mut rows) = (Vec::new(), Vec::new(), Vec::new());
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse {
                row,
                column: 0,
                message: e.to_string(),
            })?;
            ids.push(record.get(0).unwrap_or_default().to_string());
            if has_labels {
                labels.push(record.get(1).unwrap_or_default().to_string());
            }
            let values = record
                .iter()
                .enumerate()
                .skip(first)
                .map(|(column, f)| {
                    f.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Parse {
                            row,
                            column,
                            message: format!("invalid feature value {f:?}"),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(values);
        }
        FeatureMatrix::new(ids, has_labels.then_some(labels), columns, rows)
    }

    pub fn read_csv_file(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file)
    }
}

/// Full 15-column NetF matrix, one row per series in dataset order.
pub fn feature_matrix(ds: &Dataset, eta: usize) -> Result<FeatureMatrix> {
    feature_matrix_for(ds, eta, &Mapping::ALL)
}

/// Feature matrix restricted to the blocks of `mappings`. Series are
/// processed in parallel; row order follows the dataset.
pub fn feature_matrix_for(ds: &Dataset, eta: usize, mappings: &[Mapping]) -> Result<FeatureMatrix> {
    let per_series: Vec<Vec<(Mapping, TopoSummary)>> = ds
        .series()
        .par_iter()
        .map(|s| netf_for(s, eta, mappings))
        .collect::<Result<_>>()?;

    let mut warnings = Vec::new();
    let mut rows = Vec::with_capacity(per_series.len());
    for (s, blocks) in ds.series().iter().zip(per_series) {
        let flags = InputFlags::of(s.values(), eta);
        for w in warnings_for(flags, blocks.iter().copied()) {
            warnings.push(format!("{}: {w}", s.id()));
        }
        rows.push(blocks.iter().flat_map(|(_, t)| t.values()).collect());
    }
    let columns = mappings.iter().flat_map(|m| m.columns()).collect();
    let labels = ds
        .labels()
        .map(|l| l.into_iter().map(str::to_string).collect());
    let ids = ds.series().iter().map(|s| s.id().to_string()).collect();
    if !warnings.is_empty() {
        log::debug!(
            "{} feature warnings over {} series",
            warnings.len(),
            ds.len()
        );
    }
    let mut m = FeatureMatrix::new(ids, labels, columns, rows)?;
    m.warnings = warnings;
    Ok(m)
}

/// Per-column `(x - min) / (max - min)`; constant columns become 0 with a
/// warning.
pub fn minmax_rescale(m: &FeatureMatrix) -> FeatureMatrix {
    let mut out = m.clone();
    let mut scaling = Vec::with_capacity(m.column_count());
    for j in 0..m.column_count() {
        let col = m.column(j);
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = max - min;
        if range <= 0.0 {
            out.warnings.push(format!(
                "column {} is constant, rescaled to 0",
                m.columns[j]
            ));
        }
        for row in &mut out.rows {
            row[j] = if range > 0.0 {
                ((row[j] - min) / range).clamp(0.0, 1.0)
            } else {
                0.0
            };
        }
        scaling.push((min, max));
    }
    out.scaling = Some(scaling);
    out
}
