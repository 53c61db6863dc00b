//! Weighted natural and horizontal visibility graphs.
//!
//! Nodes are sample indices; an edge `(i, j)` carries weight
//! `1 / sqrt((j - i)^2 + (y_j - y_i)^2)`. Visibility uses strict
//! inequalities, so an intermediate point exactly on the sight line (or
//! exactly as tall as an endpoint, for the horizontal variant) blocks it.

use super::{Edge, Graph};
use crate::error::{Error, Result};
use crate::tsio::MIN_LEN;

fn check(values: &[f64]) -> Result<()> {
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

#[inline]
fn edge(values: &[f64], i: usize, j: usize) -> Edge {
    let dt = (j - i) as f64;
    let dy = values[j] - values[i];
    Edge {
        source: i,
        target: j,
        weight: 1.0 / dt.hypot(dy),
    }
}

fn finish(values: &[f64], mut edges: Vec<Edge>) -> Result<Graph> {
    edges.sort_unstable_by_key(|e| (e.source, e.target));
    Graph::undirected(values.len(), edges)
}

/// Natural visibility graph by divide & conquer: the maximum of a segment
/// sees the points of each side whose slope from it beats every slope
/// before them, and no sight line crosses the maximum, so both sides are
/// then solved independently.
pub fn nvg(values: &[f64]) -> Result<Graph> {
    check(values)?;
    let mut edges = Vec::with_capacity(values.len() * 4);
    let mut pending = vec![(0usize, values.len() - 1)];

    while let Some((lo, hi)) = pending.pop() {
        if lo >= hi {
            continue;
        }
        // First index of the maximum.
        let mut top = lo;
        for k in lo + 1..=hi {
            if values[k] > values[top] {
                top = k;
            }
        }
        let peak = values[top];

        let mut steepest = f64::NEG_INFINITY;
        for j in top + 1..=hi {
            let slope = (values[j] - peak) / (j - top) as f64;
            if slope > steepest {
                edges.push(edge(values, top, j));
                steepest = slope;
            }
        }
        let mut steepest = f64::NEG_INFINITY;
        for i in (lo..top).rev() {
            let slope = (values[i] - peak) / (top - i) as f64;
            if slope > steepest {
                edges.push(edge(values, i, top));
                steepest = slope;
            }
        }

        if top > lo {
            pending.push((lo, top - 1));
        }
        pending.push((top + 1, hi));
    }
    finish(values, edges)
}

/// Natural visibility graph by evaluating the visibility inequality for
/// every pair and every intermediate point. Quadratic to cubic; meant as a
/// reference for [`nvg`].
pub fn nvg_bruteforce(values: &[f64]) -> Result<Graph> {
    check(values)?;
    let n = values.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (ti, tj) = (i as f64, j as f64);
            let visible = (i + 1..j).all(|k| {
                let tk = k as f64;
                values[k] < values[j] + (values[i] - values[j]) * (tj - tk) / (tj - ti)
            });
            if visible {
                let dt = tj - ti;
                let dy = values[j] - values[i];
                edges.push(Edge {
                    source: i,
                    target: j,
                    weight: 1.0 / (dt * dt + dy * dy).sqrt(),
                });
            }
        }
    }
    Graph::undirected(n, edges)
}

/// Horizontal visibility graph with a monotone stack: the stack holds
/// strictly decreasing values, every popped value sees the newcomer, and
/// so does the first survivor.
pub fn hvg(values: &[f64]) -> Result<Graph> {
    check(values)?;
    let mut edges = Vec::with_capacity(values.len() * 2);
    let mut stack: Vec<usize> = Vec::new();
    for j in 0..values.len() {
        while let Some(&top) = stack.last() {
            if values[top] < values[j] {
                edges.push(edge(values, top, j));
                stack.pop();
            } else {
                edges.push(edge(values, top, j));
                if values[top] == values[j] {
                    stack.pop();
                }
                break;
            }
        }
        stack.push(j);
    }
    finish(values, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points_block() {
        let g = nvg(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(g.edge_set(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn valley_is_seen_over() {
        let g = nvg(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(g.edge_set(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(
            nvg_bruteforce(&[3.0, 1.0, 2.0]).unwrap().edge_set(),
            g.edge_set()
        );
        assert_eq!(
            nvg_bruteforce(&[1.0, 2.0, 3.0]).unwrap().edge_set(),
            vec![(0, 1), (1, 2)]
        );
    }

    #[test]
    fn equal_neighbours_have_unit_weight() {
        let g = nvg(&[5.0, 5.0]).unwrap();
        assert_eq!(
            g.edges(),
            &[Edge {
                source: 0,
                target: 1,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn hvg_examples() {
        assert_eq!(
            hvg(&[3.0, 1.0, 2.0]).unwrap().edge_set(),
            vec![(0, 1), (0, 2), (1, 2)]
        );
        assert_eq!(
            hvg(&[1.0, 3.0, 2.0]).unwrap().edge_set(),
            vec![(0, 1), (1, 2)]
        );
    }

    #[test]
    fn hvg_equal_heights_block() {
        // The middle 2 is as tall as the right 2: (0, 3) is blocked, (1, 3) is not.
        let g = hvg(&[3.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(g.edge_set(), vec![(0, 1), (1, 2), (1, 3), (2, 3)]);
        let g = hvg(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(g.edge_set(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn too_short_rejected() {
        assert!(nvg(&[1.0]).is_err());
        assert!(hvg(&[]).is_err());
        assert!(nvg_bruteforce(&[1.0]).is_err());
        assert!(nvg(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn monotone_series_is_a_path() {
        let values: Vec<f64> = (0..50).map(f64::from).collect();
        assert_eq!(nvg(&values).unwrap().edge_count(), 49);
        assert_eq!(hvg(&values).unwrap().edge_count(), 49);
    }
}
