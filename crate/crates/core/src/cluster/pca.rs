use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Covariance PCA of the column-centered data (columns are not rescaled).
#[derive(Debug, Clone, Serialize)]
pub struct PcaModel {
    /// Column means subtracted before projection.
    pub mean: Vec<f64>,
    /// One unit-length row per component, in feature space.
    pub loadings: Vec<Vec<f64>>,
    /// One row per item, one column per component.
    pub scores: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
}

impl PcaModel {
    /// Scores restricted to the first `m` components.
    pub fn leading_scores(&self, m: usize) -> Vec<Vec<f64>> {
        self.scores
            .iter()
            .map(|r| r[..m.min(r.len())].to_vec())
            .collect()
    }
}

/// Components are sorted by decreasing variance; each is oriented so its
/// largest-magnitude loading is positive.
pub fn pca(rows: &[Vec<f64>]) -> Result<PcaModel> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "PCA needs at least 2 rows, got {n}"
        )));
    }
    let p = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != p) {
        return Err(Error::SizeMismatch {
            expected: p,
            actual: bad.len(),
        });
    }

    let mean: Vec<f64> = (0..p)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let centered = DMatrix::from_fn(n, p, |i, j| rows[i][j] - mean[j]);
    let cov = (centered.transpose() * &centered) / (n - 1) as f64;
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });

    let mut loadings = Vec::with_capacity(p);
    let mut explained_variance = Vec::with_capacity(p);
    for &c in &order {
        let mut v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
        let pivot = v.iter().enumerate().fold(
            0,
            |best, (i, x)| if x.abs() > v[best].abs() { i } else { best },
        );
        if v[pivot] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        loadings.push(v);
        explained_variance.push(eig.eigenvalues[c].max(0.0));
    }

    let total: f64 = explained_variance.iter().sum();
    let explained_variance_ratio = if total > 0.0 {
        explained_variance.iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / p as f64; p]
    };

    let scores = (0..n)
        .map(|i| {
            loadings
                .iter()
                .map(|l| {
                    l.iter()
                        .zip(centered.row(i).iter())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect()
        })
        .collect();

    Ok(PcaModel {
        mean,
        loadings,
        scores,
        explained_variance,
        explained_variance_ratio,
    })
}
