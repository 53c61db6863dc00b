use serde::{Deserialize, Serialize};

use super::kmeans::{kmeans, KMeansConfig};
use super::metrics::{ari, avg_silhouette, nmi};
use crate::error::{Error, Result};
use crate::topo::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMetric {
    /// Average silhouette.
    As,
    Ari,
    Nmi,
}

impl std::str::FromStr for SelectionMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "as" | "silhouette" => Ok(SelectionMetric::As),
            "ari" => Ok(SelectionMetric::Ari),
            "nmi" => Ok(SelectionMetric::Nmi),
            _ => Err(Error::InvalidArgument(format!(
                "unknown metric {s:?} (expected as, ari or nmi)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KSelection {
    pub k: usize,
    pub metric: SelectionMetric,
    /// `(k, score)` for every candidate.
    pub scores: Vec<(usize, f64)>,
}

/// Runs k-means for every `k` in `k_min..=k_max` and keeps the `k` with the
/// best score (smallest `k` on ties). `base` supplies restarts and seed.
pub fn select_k(
    points: &[Vec<f64>],
    k_min: usize,
    k_max: usize,
    metric: SelectionMetric,
    truth: Option<&Partition>,
    base: &KMeansConfig,
) -> Result<KSelection> {
    if k_min == 0 || k_min > k_max || k_max > points.len() {
        return Err(Error::InvalidArgument(format!(
            "k range {k_min}..={k_max} invalid for {} items",
            points.len()
        )));
    }
    if metric == SelectionMetric::As && k_min < 2 {
        return Err(Error::InvalidArgument(
            "silhouette selection needs k >= 2".into(),
        ));
    }
    let truth = match (metric, truth) {
        (SelectionMetric::As, _) => None,
        (_, Some(t)) => Some(t),
        (_, None) => {
            return Err(Error::InvalidArgument(
                "ARI/NMI selection requires ground-truth labels".into(),
            ))
        }
    };

    let mut scores = Vec::with_capacity(k_max - k_min + 1);
    for k in k_min..=k_max {
        let result = kmeans(points, &KMeansConfig { k, ..*base })?;
        let score = match (metric, truth) {
            (SelectionMetric::As, _) if result.k < 2 => f64::NEG_INFINITY,
            (SelectionMetric::As, _) => avg_silhouette(points, &result.partition)?,
            (SelectionMetric::Ari, Some(t)) => ari(&result.partition, t)?,
            (SelectionMetric::Nmi, Some(t)) => nmi(&result.partition, t)?,
            _ => unreachable!("truth checked above"),
        };
        scores.push((k, score));
    }
    let k = scores
        .iter()
        .fold(scores[0], |best, &s| if s.1 > best.1 { s } else { best })
        .0;
    Ok(KSelection { k, metric, scores })
}
