#![allow(dead_code)]

use netf_core::dgp::generate_presets;
use netf_core::{modularity, Graph, Partition, Preset};

/// Adjusted Rand index from the four pair counts.
pub fn ari_pair_count(a: &[usize], b: &[usize]) -> f64 {
    let (mut n11, mut n10, mut n01, mut n00) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => n11 += 1.0,
                (true, false) => n10 += 1.0,
                (false, true) => n01 += 1.0,
                (false, false) => n00 += 1.0,
            }
        }
    }
    let den = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
    if den == 0.0 {
        1.0
    } else {
        2.0 * (n11 * n00 - n10 * n01) / den
    }
}

/// Every set partition of `n` items as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur[i] = c;
            rec(i + 1, max.max(c), cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![vec![]];
    }
    let mut cur = vec![0; n];
    rec(1, 0, &mut cur, &mut out);
    out
}

/// Exact maximum modularity over all partitions of the nodes.
pub fn max_modularity(g: &Graph) -> f64 {
    set_partitions(g.node_count())
        .into_iter()
        .map(|p| modularity(g, &Partition::new(p).unwrap()).unwrap())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Visibility test of `k` between `i` and `j` with strict inequality.
pub fn nvg_pairs_oracle(y: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            let visible = (i + 1..j).all(|k| {
                let line = y[j] + (y[i] - y[j]) * (j - k) as f64 / (j - i) as f64;
                y[k] < line
            });
            if visible {
                out.push((i, j));
            }
        }
    }
    out
}

/// Edge weight `1 / Euclidean distance` with index time.
pub fn weight_oracle(y: &[f64], i: usize, j: usize) -> f64 {
    let dt = (j - i) as f64;
    let dy = y[j] - y[i];
    1.0 / (dt * dt + dy * dy).sqrt()
}

/// Deterministic mix of white noise, AR(1) and INAR series with lengths
/// spread over `2..=512`.
pub fn visibility_suite(count: usize) -> Vec<Vec<f64>> {
    let presets = [
        Preset::Wn,
        Preset::Ar1Pos,
        Preset::Ar1Neg,
        Preset::Ar2,
        Preset::Inar,
    ];
    (0..count)
        .map(|i| {
            let len = match i {
                0 => 2,
                1 => 512,
                _ => 2 + (i * 7919 + 13) % 511,
            };
            let p = presets[i % presets.len()];
            let ds = generate_presets(&[p], 1, len, 1000 + i as u64).unwrap();
            ds.series()[0].values().to_vec()
        })
        .collect()
}

/// Walktrap by direct recomputation: dense `P^t`, community profiles as
/// plain means, every adjacent pair rescored at every step. Returns the
/// partition after each merge, as sorted lists of sorted members.
pub fn walktrap_dense_levels(g: &Graph, t: usize) -> Vec<Vec<Vec<usize>>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        if e.source != e.target {
            a[e.source][e.target] += e.weight;
            a[e.target][e.source] += e.weight;
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        let deg = row.iter().filter(|&&w| w > 0.0).count();
        let total: f64 = row.iter().sum();
        row[i] = if deg > 0 { total / deg as f64 } else { 1.0 };
    }
    let d: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let step: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a[i][j] / d[i]).collect())
        .collect();
    let mut pt: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for _ in 0..t {
        pt = pt
            .iter()
            .map(|row| {
                (0..n)
                    .map(|j| (0..n).map(|k| row[k] * step[k][j]).sum())
                    .collect()
            })
            .collect();
    }

    let mut comms: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut levels = Vec::new();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for x in 0..comms.len() {
            for y in x + 1..comms.len() {
                let touching = comms[x]
                    .iter()
                    .any(|&i| comms[y].iter().any(|&j| i != j && a[i][j] > 0.0));
                if !touching {
                    continue;
                }
                let mean = |c: &[usize]| -> Vec<f64> {
                    (0..n)
                        .map(|k| c.iter().map(|&i| pt[i][k]).sum::<f64>() / c.len() as f64)
                        .collect()
                };
                let (px, py) = (mean(&comms[x]), mean(&comms[y]));
                let r2: f64 = (0..n).map(|k| (px[k] - py[k]).powi(2) / d[k]).sum();
                let (s1, s2) = (comms[x].len() as f64, comms[y].len() as f64);
                let ds = s1 * s2 / (s1 + s2) * r2 / n as f64;
                if best.is_none_or(|(b, _, _)| ds < b) {
                    best = Some((ds, x, y));
                }
            }
        }
        let Some((_, x, y)) = best else { break };
        let merged = comms.remove(y);
        comms[x].extend(merged);
        comms[x].sort_unstable();
        let mut level = comms.clone();
        level.sort();
        levels.push(level);
    }
    levels
}
