use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::topo::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub max_iter: usize,
    /// Convergence threshold on the largest centroid displacement.
    pub tolerance: f64,
    pub seed: u64,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            restarts: 10,
            max_iter: 300,
            tolerance: 1e-9,
            seed,
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterResult {
    pub partition: Partition,
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_seeds(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids = vec![points[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, d) in d2.iter().enumerate() {
                acc += d;
                if acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.push(points[pick].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

struct Run {
    labels: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    inertia: f64,
    /// Inertia after each assignment step.
    #[cfg_attr(not(test), allow(dead_code))]
    trace: Vec<f64>,
}

fn lloyd(points: &[Vec<f64>], cfg: &KMeansConfig, seed: u64) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = points[0].len();
    let mut centroids = plus_plus_seeds(points, cfg.k, &mut rng);
    let mut labels = vec![0; points.len()];
    let mut trace = Vec::new();

    for _ in 0..cfg.max_iter {
        let mut inertia = 0.0;
        let mut dists = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            labels[i] = c;
            inertia += d;
            dists.push(d);
        }
        trace.push(inertia);

        let mut sums = vec![vec![0.0; dim]; cfg.k];
        let mut counts = vec![0usize; cfg.k];
        for (p, &c) in points.iter().zip(&labels) {
            counts[c] += 1;
            sums[c].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        // An empty cluster takes over the point farthest from its centroid.
        for c in 0..cfg.k {
            if counts[c] == 0 {
                let far = (0..points.len())
                    .filter(|&i| counts[labels[i]] > 1)
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)));
                if let Some(i) = far {
                    let old = labels[i];
                    counts[old] -= 1;
                    sums[old]
                        .iter_mut()
                        .zip(&points[i])
                        .for_each(|(s, x)| *s -= x);
                    labels[i] = c;
                    counts[c] = 1;
                    sums[c] = points[i].clone();
                    dists[i] = 0.0;
                }
            }
        }

        let mut shift: f64 = 0.0;
        for c in 0..cfg.k {
            if counts[c] == 0 {
                continue;
            }
            let updated: Vec<f64> = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            shift = shift.max(sq_dist(&updated, &centroids[c]).sqrt());
            centroids[c] = updated;
        }
        if shift < cfg.tolerance {
            break;
        }
    }

    let mut inertia = 0.0;
    for (i, p) in points.iter().enumerate() {
        let (c, d) = nearest(p, &centroids);
        labels[i] = c;
        inertia += d;
    }
    Run {
        labels,
        centroids,
        inertia,
        trace,
    }
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs by
/// inertia (ties go to the earliest restart). Cluster labels are numbered in
/// order of first appearance.
pub fn kmeans(points: &[Vec<f64>], cfg: &KMeansConfig) -> Result<ClusterResult> {
    let n = points.len();
    if cfg.k == 0 || cfg.k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {} outside 1..={n}",
            cfg.k
        )));
    }
    let dim = points[0].len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::SizeMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }

    let runs: Vec<Run> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| lloyd(points, cfg, restart_seed(cfg.seed, r)))
        .collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.inertia < a.inertia { b } else { a })
        .expect("at least one restart");

    let partition = Partition::from_labels(&best.labels);
    let mut centroids = vec![Vec::new(); partition.community_count()];
    for (&raw, &label) in best.labels.iter().zip(partition.assignments()) {
        if centroids[label].is_empty() {
            centroids[label] = best.centroids[raw].clone();
        }
    }
    Ok(ClusterResult {
        k: partition.community_count(),
        partition,
        centroids,
        inertia: best.inertia,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_pairs() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![100.0, 100.0],
            vec![0.1, 0.0],
            vec![100.0, 100.1],
        ];
        let r = kmeans(&pts, &KMeansConfig::new(2, 1)).unwrap();
        assert_eq!(r.partition.assignments(), &[0, 1, 0, 1]);
        assert_eq!(r.k, 2);
    }

    #[test]
    fn one_cluster_per_point() {
        let pts = vec![vec![0.0], vec![1.0], vec![5.0], vec![2.5]];
        let r = kmeans(&pts, &KMeansConfig::new(4, 3)).unwrap();
        assert_eq!(r.inertia, 0.0);
        assert_eq!(r.k, 4);
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let pts = vec![vec![0.0, 1.0], vec![2.0, 3.0], vec![4.0, 8.0]];
        let r = kmeans(&pts, &KMeansConfig::new(1, 0)).unwrap();
        assert!((r.centroids[0][0] - 2.0).abs() < 1e-12);
        assert!((r.centroids[0][1] - 4.0).abs() < 1e-12);
        let expected = 4.0 + 9.0 + 0.0 + 1.0 + 4.0 + 16.0;
        assert!((r.inertia - expected).abs() < 1e-9);
    }

    #[test]
    fn k_out_of_range() {
        let pts = vec![vec![0.0], vec![1.0]];
        assert!(kmeans(&pts, &KMeansConfig::new(0, 0)).is_err());
        assert!(kmeans(&pts, &KMeansConfig::new(3, 0)).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let pts: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i * 7 % 13) as f64, (i * 3 % 5) as f64])
            .collect();
        let a = kmeans(&pts, &KMeansConfig::new(3, 9)).unwrap();
        let b = kmeans(&pts, &KMeansConfig::new(3, 9)).unwrap();
        assert_eq!(a.partition, b.partition);
        assert_eq!(a.inertia, b.inertia);
    }

    #[test]
    fn inertia_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..20 {
            let pts: Vec<Vec<f64>> = (0..60)
                .map(|_| vec![rng.random(), rng.random(), rng.random()])
                .collect();
            let run = lloyd(&pts, &KMeansConfig::new(5, trial), trial);
            for w in run.trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{:?}", run.trace);
            }
            assert!(run.inertia <= *run.trace.last().unwrap() + 1e-12);
        }
    }
}
