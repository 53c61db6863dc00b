use std::collections::BTreeMap;

use rayon::prelude::*;

use super::Partition;
use crate::error::{Error, Result};
use crate::netmap::{Edge, Graph};

/// Compressed adjacency, self-loops dropped. For directed graphs only
/// out-neighbours are listed unless built with `both_directions`.
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Adjacency {
    pub(crate) fn new(g: &Graph, both_directions: bool) -> Self {
        let n = g.node_count();
        let symmetric = !g.is_directed() || both_directions;
        let mut degree = vec![0usize; n + 1];
        for e in g.edges().iter().filter(|e| e.source != e.target) {
            degree[e.source] += 1;
            if symmetric {
                degree[e.target] += 1;
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for e in g.edges().iter().filter(|e| e.source != e.target) {
            targets[fill[e.source]] = e.target;
            weights[fill[e.source]] = e.weight;
            fill[e.source] += 1;
            if symmetric {
                targets[fill[e.target]] = e.source;
                weights[fill[e.target]] = e.weight;
                fill[e.target] += 1;
            }
        }
        Self {
            offsets,
            targets,
            weights,
        }
    }

    pub(crate) fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn neighbors(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub(crate) fn weights(&self, i: usize) -> &[f64] {
        &self.weights[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Mean node strength over all nodes, isolated ones included. Every edge
/// adds its weight to both endpoints, so a self-loop counts twice on its
/// node (once out, once in).
pub fn avg_weighted_degree(g: &Graph) -> Result<f64> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut strength = vec![0.0; g.node_count()];
    for e in g.edges() {
        strength[e.source] += e.weight;
        strength[e.target] += e.weight;
    }
    Ok(strength.iter().sum::<f64>() / g.node_count() as f64)
}

/// Mean breadth-first hop distance over ordered reachable pairs `i != j`.
/// Weights and self-loops are ignored; directed graphs are walked along
/// edge direction.
pub fn avg_path_length(g: &Graph) -> Result<f64> {
    let adj = Adjacency::new(g, false);
    let n = adj.node_count();

    let (sum, pairs) = (0..n)
        .into_par_iter()
        .fold(
            || (0u64, 0u64, vec![u32::MAX; n], Vec::with_capacity(n)),
            |(mut sum, mut pairs, mut dist, mut queue), source| {
                queue.clear();
                dist[source] = 0;
                queue.push(source);
                let mut head = 0;
                while head < queue.len() {
                    let u = queue[head];
                    head += 1;
                    let du = dist[u];
                    for &v in adj.neighbors(u) {
                        if dist[v] == u32::MAX {
                            dist[v] = du + 1;
                            queue.push(v);
                        }
                    }
                }
                for &v in &queue[1..] {
                    sum += u64::from(dist[v]);
                }
                pairs += (queue.len() - 1) as u64;
                for &v in &queue {
                    dist[v] = u32::MAX;
                }
                (sum, pairs, dist, queue)
            },
        )
        .map(|(sum, pairs, _, _)| (sum, pairs))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    if pairs == 0 {
        return Err(Error::NoReachablePair);
    }
    Ok(sum as f64 / pairs as f64)
}

/// Undirected view: every node pair joined by at least one edge gets one
/// undirected edge whose weight is the sum of the original weights.
/// Self-loops are dropped.
pub fn to_undirected(g: &Graph) -> Graph {
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in g.edges().iter().filter(|e| e.source != e.target) {
        let key = (e.source.min(e.target), e.source.max(e.target));
        *merged.entry(key).or_default() += e.weight;
    }
    let edges = merged
        .into_iter()
        .map(|((source, target), weight)| Edge {
            source,
            target,
            weight,
        })
        .collect();
    Graph::undirected(g.node_count(), edges).expect("collapsing a valid graph keeps it valid")
}

/// Global transitivity `3 * triangles / connected triplets`, ignoring
/// weights, direction and self-loops; 0 without triplets.
pub fn clustering_coefficient(g: &Graph) -> f64 {
    let adj = Adjacency::new(g, true);
    let n = adj.node_count();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut v = adj.neighbors(i).to_vec();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();

    let triplets: u64 = neighbors
        .iter()
        .map(|v| {
            let d = v.len() as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triplets == 0 {
        return 0.0;
    }

    // Each triangle u < v < w is counted once from its smallest edge (u, v).
    let mut triangles = 0u64;
    for u in 0..n {
        for &v in neighbors[u].iter().filter(|&&v| v > u) {
            let (a, b) = (&neighbors[u], &neighbors[v]);
            let (mut i, mut j) = (
                a.partition_point(|&x| x <= v),
                b.partition_point(|&x| x <= v),
            );
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        triangles += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    3.0 * triangles as f64 / triplets as f64
}

/// Weighted modularity `Q = sum_c [ in_c / 2W - (tot_c / 2W)^2 ]`, where
/// `W` is the total edge weight, `in_c` the weight inside `c` counted over
/// ordered pairs and `tot_c` the summed strength of `c`. Directed graphs
/// are evaluated on [`to_undirected`]. Zero for an edgeless graph.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.len() != g.node_count() {
        return Err(Error::SizeMismatch {
            expected: g.node_count(),
            actual: p.len(),
        });
    }
    let collapsed;
    let g = if g.is_directed() {
        collapsed = to_undirected(g);
        &collapsed
    } else {
        g
    };

    let labels = p.assignments();
    let k = p.community_count();
    let mut inside = vec![0.0; k];
    let mut total = vec![0.0; k];
    let mut weight = 0.0;
    for e in g.edges() {
        let (cs, ct) = (labels[e.source], labels[e.target]);
        total[cs] += e.weight;
        total[ct] += e.weight;
        if cs == ct {
            inside[cs] += 2.0 * e.weight;
        }
        weight += e.weight;
    }
    if weight == 0.0 {
        return Ok(0.0);
    }
    let two_w = 2.0 * weight;
    Ok(inside
        .iter()
        .zip(&total)
        .map(|(i, t)| i / two_w - (t / two_w) * (t / two_w))
        .sum())
}
