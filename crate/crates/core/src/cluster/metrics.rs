use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topo::Partition;

fn check_sizes(a: &Partition, b: &Partition) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(())
}

/// Contingency counts `n[i][j]` with row and column totals.
fn contingency(a: &Partition, b: &Partition) -> (Vec<Vec<u64>>, Vec<u64>, Vec<u64>) {
    let mut table = vec![vec![0u64; b.community_count()]; a.community_count()];
    for (&x, &y) in a.assignments().iter().zip(b.assignments()) {
        table[x][y] += 1;
    }
    let rows = table.iter().map(|r| r.iter().sum()).collect();
    let cols = (0..b.community_count())
        .map(|j| table.iter().map(|r| r[j]).sum())
        .collect();
    (table, rows, cols)
}

fn pairs(n: u64) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// Adjusted Rand index (Hubert & Arabie). Two identical trivial partitions
/// (all singletons, or one block) score 1.
pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    check_sizes(a, b)?;
    let (table, rows, cols) = contingency(a, b);
    let index: f64 = table.iter().flatten().map(|&c| pairs(c)).sum();
    let sum_a: f64 = rows.iter().map(|&c| pairs(c)).sum();
    let sum_b: f64 = cols.iter().map(|&c| pairs(c)).sum();
    let total = pairs(a.len() as u64);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_a * sum_b / total;
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NmiNormalization {
    /// `I / sqrt(H(a) H(b))`.
    #[default]
    Geometric,
    /// `I / ((H(a) + H(b)) / 2)`.
    Arithmetic,
}

/// Normalized mutual information with geometric-mean normalization.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    nmi_with(a, b, NmiNormalization::Geometric)
}

/// NMI with natural logarithms. Both partitions trivial (one block each)
/// gives 1; exactly one trivial gives 0.
pub fn nmi_with(a: &Partition, b: &Partition, norm: NmiNormalization) -> Result<f64> {
    check_sizes(a, b)?;
    let n = a.len() as f64;
    if a.is_empty() {
        return Ok(1.0);
    }
    let (table, rows, cols) = contingency(a, b);
    let entropy = |counts: &[u64]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let (ha, hb) = (entropy(&rows), entropy(&cols));
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (n * c / (rows[i] as f64 * cols[j] as f64)).ln();
            }
        }
    }
    let denom = match norm {
        NmiNormalization::Geometric => (ha * hb).sqrt(),
        NmiNormalization::Arithmetic => 0.5 * (ha + hb),
    };
    Ok((mi / denom).clamp(0.0, 1.0))
}

/// Mean silhouette over items with Euclidean distances. Members of
/// singleton clusters score 0, as does an item whose `a` and `b` are both 0.
pub fn avg_silhouette(points: &[Vec<f64>], p: &Partition) -> Result<f64> {
    if points.len() != p.len() {
        return Err(Error::SizeMismatch {
            expected: p.len(),
            actual: points.len(),
        });
    }
    let k = p.community_count();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "silhouette needs at least 2 clusters, got {k}"
        )));
    }
    let labels = p.assignments();
    let sizes = p.sizes();
    let n = points.len();

    let mut total = 0.0;
    let mut sums = vec![0.0; k];
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        for j in 0..n {
            if i != j {
                let d: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                sums[labels[j]] += d;
            }
        }
        let own = labels[i];
        if sizes[own] < 2 {
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    Ok(total / n as f64)
}
