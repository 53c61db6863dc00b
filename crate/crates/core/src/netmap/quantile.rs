//! Quantile graphs: nodes are sample-quantile bins, directed edges carry
//! empirical transition probabilities between consecutive observations.

use std::collections::BTreeMap;

use super::{Edge, Graph};
use crate::error::{Error, Result};
use crate::tsio::MIN_LEN;

/// Upper bin edges `q_1 <= ... <= q_eta`; bin `i` covers `(q_{i-1}, q_i]`
/// and the first bin everything up to `q_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileBinning {
    eta: usize,
    breakpoints: Vec<f64>,
}

impl QuantileBinning {
    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// 0-based bin of `y`: the smallest `i` with `y <= q_i`, clamped to the
    /// last bin for values above the series maximum.
    pub fn bin(&self, y: f64) -> usize {
        self.breakpoints
            .partition_point(|&q| q < y)
            .min(self.eta - 1)
    }
}

fn check(values: &[f64], eta: usize) -> Result<()> {
    if eta < 2 {
        return Err(Error::InvalidArgument(format!(
            "eta must be at least 2, got {eta}"
        )));
    }
    if values.len() < MIN_LEN {
        return Err(Error::TooShort {
            id: String::new(),
            len: values.len(),
            min: MIN_LEN,
        });
    }
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "non-finite value at index {pos}"
        )));
    }
    Ok(())
}

/// Sample quantiles at probabilities `i / eta`, `i = 1..=eta`, by linear
/// interpolation of the order statistics: with `h = (n - 1) p`,
/// `q = x[floor h] + frac(h) (x[floor h + 1] - x[floor h])` (0-based).
pub fn sample_quantiles(values: &[f64], eta: usize) -> Result<QuantileBinning> {
    check(values, eta)?;
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();

    let mut breakpoints = Vec::with_capacity(eta);
    let mut floor = f64::NEG_INFINITY;
    for i in 1..=eta {
        let p = i as f64 / eta as f64;
        let h = (n - 1) as f64 * p;
        let lo = h.floor() as usize;
        let q = if lo + 1 < n {
            sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
        } else {
            sorted[n - 1]
        };
        // Rounding must not break monotonicity.
        floor = floor.max(q);
        breakpoints.push(floor);
    }
    Ok(QuantileBinning { eta, breakpoints })
}

/// Quantile graph on exactly `eta` nodes. Self-loops are kept; nodes whose
/// bin is never left (or never entered) have no outgoing edges.
pub fn quantile_graph(values: &[f64], eta: usize) -> Result<Graph> {
    let binning = sample_quantiles(values, eta)?;
    let bins: Vec<usize> = values.iter().map(|&y| binning.bin(y)).collect();

    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut out_totals = vec![0usize; eta];
    for w in bins.windows(2) {
        *counts.entry((w[0], w[1])).or_default() += 1;
        out_totals[w[0]] += 1;
    }
    let edges = counts
        .into_iter()
        .map(|((source, target), c)| Edge {
            source,
            target,
            weight: c as f64 / out_totals[source] as f64,
        })
        .collect();
    Graph::new(eta, edges, true, true)
}
