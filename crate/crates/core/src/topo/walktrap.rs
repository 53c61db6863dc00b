//! Walktrap community detection (Pons & Latapy).
//!
//! Every node gets a self-loop weighted by its mean incident edge weight,
//! then communities are merged agglomeratively. Each step merges the pair
//! of adjacent communities with the smallest increase
//! `delta_sigma = (1/n) * |C1||C2| / (|C1| + |C2|) * r^2(C1, C2)`, where
//! `r^2` is the degree-normalized squared distance between the `t`-step
//! random-walk profiles of the two communities. The dendrogram is cut at
//! the level of highest modularity.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use super::measures::{to_undirected, Adjacency};
use super::Partition;
use crate::error::{Error, Result};
use crate::netmap::Graph;

pub const DEFAULT_STEPS: usize = 4;

/// Sparse walk profile `P^t_C(k) / sqrt(d(k))`, indices ascending.
#[derive(Debug, Clone, Default)]
struct Profile {
    index: Vec<u32>,
    value: Vec<f64>,
}

impl Profile {
    fn squared_distance(&self, other: &Profile) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < self.index.len() && j < other.index.len() {
            match self.index[i].cmp(&other.index[j]) {
                Ordering::Less => {
                    acc += self.value[i] * self.value[i];
                    i += 1;
                }
                Ordering::Greater => {
                    acc += other.value[j] * other.value[j];
                    j += 1;
                }
                Ordering::Equal => {
                    let d = self.value[i] - other.value[j];
                    acc += d * d;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc += self.value[i..].iter().map(|v| v * v).sum::<f64>();
        acc += other.value[j..].iter().map(|v| v * v).sum::<f64>();
        acc
    }

    /// `(wa * a + wb * b) / (wa + wb)`.
    fn blend(a: &Profile, wa: f64, b: &Profile, wb: f64) -> Profile {
        let total = wa + wb;
        let (fa, fb) = (wa / total, wb / total);
        let mut out = Profile {
            index: Vec::with_capacity(a.index.len().max(b.index.len())),
            value: Vec::with_capacity(a.index.len().max(b.index.len())),
        };
        let (mut i, mut j) = (0, 0);
        loop {
            let next = match (a.index.get(i), b.index.get(j)) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some(x), Some(y)) => x.cmp(y),
            };
            match next {
                Ordering::Less => {
                    out.index.push(a.index[i]);
                    out.value.push(fa * a.value[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.index.push(b.index[j]);
                    out.value.push(fb * b.value[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.index.push(a.index[i]);
                    out.value.push(fa * a.value[i] + fb * b.value[j]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
}

/// Random walk with the added self-loops.
struct Walker<'a> {
    adj: &'a Adjacency,
    loop_weight: Vec<f64>,
    degree: Vec<f64>,
    current: Vec<f64>,
    next: Vec<f64>,
    seen: Vec<bool>,
}

impl<'a> Walker<'a> {
    fn new(adj: &'a Adjacency) -> Self {
        let n = adj.node_count();
        let mut loop_weight = vec![0.0; n];
        let mut degree = vec![0.0; n];
        for i in 0..n {
            let w = adj.weights(i);
            if !w.is_empty() {
                let strength: f64 = w.iter().sum();
                loop_weight[i] = strength / w.len() as f64;
                degree[i] = strength + loop_weight[i];
            }
        }
        Self {
            adj,
            loop_weight,
            degree,
            current: vec![0.0; n],
            next: vec![0.0; n],
            seen: vec![false; n],
        }
    }

    fn profile(&mut self, start: usize, steps: usize) -> Profile {
        let mut support = vec![start];
        self.current[start] = 1.0;
        self.seen[start] = true;
        for _ in 0..steps {
            let reach = support.len();
            for s in 0..reach {
                let u = support[s];
                let p = self.current[u];
                if p == 0.0 {
                    continue;
                }
                let per_weight = p / self.degree[u];
                self.next[u] += per_weight * self.loop_weight[u];
                for (&v, &w) in self.adj.neighbors(u).iter().zip(self.adj.weights(u)) {
                    if !self.seen[v] {
                        self.seen[v] = true;
                        support.push(v);
                    }
                    self.next[v] += per_weight * w;
                }
            }
            for &u in &support {
                self.current[u] = self.next[u];
                self.next[u] = 0.0;
            }
        }
        support.sort_unstable();
        let mut profile = Profile {
            index: Vec::with_capacity(support.len()),
            value: Vec::with_capacity(support.len()),
        };
        for &u in &support {
            let p = self.current[u];
            if p != 0.0 {
                profile.index.push(u as u32);
                profile.value.push(p / self.degree[u].sqrt());
            }
            self.current[u] = 0.0;
            self.seen[u] = false;
        }
        profile
    }
}

#[derive(Debug, Clone, Copy)]
struct Link {
    delta_sigma: f64,
    weight: f64,
}

struct Community {
    size: usize,
    profile: Profile,
    neighbors: BTreeMap<usize, Link>,
    /// Edge weight inside the community, counted over ordered pairs.
    inside: f64,
    /// Summed strength of the members.
    strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    delta_sigma: f64,
    a: usize,
    b: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delta_sigma
            .total_cmp(&other.delta_sigma)
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Full merge sequence with the modularity of every level.
///
/// Community ids `0..n` are the nodes; the `i`-th merge creates id `n + i`.
/// Level `l` is the partition after the first `l` merges.
#[derive(Debug, Clone)]
pub struct WalktrapHierarchy {
    node_count: usize,
    merges: Vec<(usize, usize)>,
    modularity: Vec<f64>,
    best_level: usize,
}

impl WalktrapHierarchy {
    pub fn merges(&self) -> &[(usize, usize)] {
        &self.merges
    }

    pub fn modularity_by_level(&self) -> &[f64] {
        &self.modularity
    }

    pub fn best_level(&self) -> usize {
        self.best_level
    }

    /// Partition after `level` merges, labelled in order of first node.
    pub fn partition_at(&self, level: usize) -> Partition {
        let n = self.node_count;
        let level = level.min(self.merges.len());
        let mut parent: Vec<usize> = (0..n + level).collect();
        for (i, &(a, b)) in self.merges[..level].iter().enumerate() {
            parent[a] = n + i;
            parent[b] = n + i;
        }
        let root = |mut x: usize| {
            while parent[x] != x {
                x = parent[x];
            }
            x
        };
        let roots: Vec<usize> = (0..n).map(root).collect();
        Partition::from_labels(&roots)
    }

    pub fn best_partition(&self) -> Partition {
        self.partition_at(self.best_level)
    }
}

/// Walktrap partition of `g` with walks of `steps` steps. Directed graphs
/// are collapsed first; self-loops of `g` are ignored. Isolated nodes end up
/// as singleton communities.
pub fn walktrap(g: &Graph, steps: usize) -> Result<Partition> {
    Ok(walktrap_hierarchy(g, steps)?.best_partition())
}

pub fn walktrap_hierarchy(g: &Graph, steps: usize) -> Result<WalktrapHierarchy> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "walk length must be positive".into(),
        ));
    }
    let simple = to_undirected(g);
    let adj = Adjacency::new(&simple, true);
    let total_weight = simple.total_weight();
    let two_w = 2.0 * total_weight;
    let score = |c: &Community| {
        if two_w == 0.0 {
            0.0
        } else {
            c.inside / two_w - (c.strength / two_w) * (c.strength / two_w)
        }
    };

    let mut walker = Walker::new(&adj);
    let mut communities: Vec<Option<Community>> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let profile = if adj.neighbors(i).is_empty() {
            Profile::default()
        } else {
            walker.profile(i, steps)
        };
        communities.push(Some(Community {
            size: 1,
            profile,
            neighbors: BTreeMap::new(),
            inside: 0.0,
            strength: adj.weights(i).iter().sum(),
        }));
    }

    let scale = 1.0 / n as f64;
    let mut heap = BinaryHeap::new();
    for e in simple.edges() {
        let (a, b) = (e.source, e.target);
        let r2 = {
            let ca = communities[a].as_ref().expect("alive");
            let cb = communities[b].as_ref().expect("alive");
            ca.profile.squared_distance(&cb.profile)
        };
        let link = Link {
            delta_sigma: scale * 0.5 * r2,
            weight: e.weight,
        };
        communities[a]
            .as_mut()
            .expect("alive")
            .neighbors
            .insert(b, link);
        communities[b]
            .as_mut()
            .expect("alive")
            .neighbors
            .insert(a, link);
        heap.push(Reverse(Candidate {
            delta_sigma: link.delta_sigma,
            a,
            b,
        }));
    }

    let mut q: f64 = communities.iter().flatten().map(score).sum();
    let mut modularity = vec![q];
    let mut merges = Vec::new();

    while let Some(Reverse(cand)) = heap.pop() {
        if communities[cand.a].is_none() || communities[cand.b].is_none() {
            continue;
        }
        let ca = communities[cand.a].take().expect("alive");
        let cb = communities[cand.b].take().expect("alive");
        let id = communities.len();
        let between = ca.neighbors[&cand.b];

        let (sa, sb) = (ca.size as f64, cb.size as f64);
        let size = ca.size + cb.size;
        let profile = Profile::blend(&ca.profile, sa, &cb.profile, sb);

        let mut neighbors = BTreeMap::new();
        let others: Vec<usize> = ca
            .neighbors
            .keys()
            .chain(cb.neighbors.keys())
            .copied()
            .filter(|&c| c != cand.a && c != cand.b)
            .collect();
        for c in others {
            if neighbors.contains_key(&c) {
                continue;
            }
            let other = communities[c].as_mut().expect("neighbours are alive");
            let sc = other.size as f64;
            let link = match (ca.neighbors.get(&c), cb.neighbors.get(&c)) {
                (Some(la), Some(lb)) => Link {
                    delta_sigma: ((sa + sc) * la.delta_sigma + (sb + sc) * lb.delta_sigma
                        - sc * between.delta_sigma)
                        / (sa + sb + sc),
                    weight: la.weight + lb.weight,
                },
                (Some(l), None) | (None, Some(l)) => Link {
                    delta_sigma: scale * (size as f64 * sc) / (size as f64 + sc)
                        * profile.squared_distance(&other.profile),
                    weight: l.weight,
                },
                (None, None) => unreachable!("c was collected from the neighbour maps"),
            };
            other.neighbors.remove(&cand.a);
            other.neighbors.remove(&cand.b);
            other.neighbors.insert(id, link);
            neighbors.insert(c, link);
            heap.push(Reverse(Candidate {
                delta_sigma: link.delta_sigma,
                a: c,
                b: id,
            }));
        }

        let merged = Community {
            size,
            profile,
            neighbors,
            inside: ca.inside + cb.inside + 2.0 * between.weight,
            strength: ca.strength + cb.strength,
        };
        q += score(&merged) - score(&ca) - score(&cb);
        communities.push(Some(merged));
        merges.push((cand.a, cand.b));
        modularity.push(q);
    }

    let mut best_level = 0;
    for (level, &value) in modularity.iter().enumerate() {
        if value > modularity[best_level] + 1e-13 {
            best_level = level;
        }
    }

    Ok(WalktrapHierarchy {
        node_count: n,
        merges,
        modularity,
        best_level,
    })
}
