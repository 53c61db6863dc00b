//! Time series to graph mappings and the graph type they share.

mod quantile;
mod visibility;

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::error::{Error, Result};

pub use quantile::{quantile_graph, sample_quantiles, QuantileBinning};
pub use visibility::{hvg, nvg, nvg_bruteforce};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// Weighted edge list over nodes `0..node_count`.
///
/// Undirected graphs store each edge once with `source <= target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    directed: bool,
    allows_self_loops: bool,
}

impl Graph {
    pub fn new(
        node_count: usize,
        edges: Vec<Edge>,
        directed: bool,
        allows_self_loops: bool,
    ) -> Result<Self> {
        let mut edges = edges;
        for e in &mut edges {
            if e.source >= node_count || e.target >= node_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) out of range for {node_count} nodes",
                    e.source, e.target
                )));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) has non-positive or non-finite weight {}",
                    e.source, e.target, e.weight
                )));
            }
            if e.source == e.target && !allows_self_loops {
                return Err(Error::InvalidArgument(format!(
                    "self-loop on node {} not allowed",
                    e.source
                )));
            }
            if !directed && e.source > e.target {
                std::mem::swap(&mut e.source, &mut e.target);
            }
        }
        Ok(Self {
            node_count,
            edges,
            directed,
            allows_self_loops,
        })
    }

    /// Undirected graph without self-loops.
    pub fn undirected(node_count: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new(node_count, edges, false, false)
    }

    /// Undirected, unit-weight graph from node pairs.
    pub fn from_pairs(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(source, target)| Edge {
                source,
                target,
                weight: 1.0,
            })
            .collect();
        Self::undirected(node_count, edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn allows_self_loops(&self) -> bool {
        self.allows_self_loops
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Sorted `(source, target)` pairs.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = self.edges.iter().map(|e| (e.source, e.target)).collect();
        pairs.sort_unstable();
        pairs
    }

    /// Writes the edge list: a `# directed|undirected nodes=N` header, then
    /// one `source target weight` line per edge, weights to 12 significant
    /// digits.
    pub fn write_edge_list<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let kind = if self.directed {
            "directed"
        } else {
            "undirected"
        };
        writeln!(out, "# {kind} nodes={}", self.node_count)?;
        for e in &self.edges {
            writeln!(
                out,
                "{} {} {}",
                e.source,
                e.target,
                format_significant(e.weight, 12)
            )?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

/// `%.<digits>g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub(crate) fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= digits as i32 {
        let mut s = trim_zeros(mantissa).to_string();
        let _ = write!(
            s,
            "e{}{:02}",
            if exponent < 0 { '-' } else { '+' },
            exponent.abs()
        );
        s
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_edges_are_normalized() {
        let g = Graph::from_pairs(3, &[(2, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_set(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn invalid_edges_rejected() {
        assert!(Graph::from_pairs(2, &[(0, 2)]).is_err());
        assert!(Graph::from_pairs(2, &[(1, 1)]).is_err());
        let bad = Edge {
            source: 0,
            target: 1,
            weight: 0.0,
        };
        assert!(Graph::undirected(2, vec![bad]).is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(0.5, 12), "0.5");
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(
            format_significant(std::f64::consts::FRAC_1_SQRT_2, 12),
            "0.707106781187"
        );
        assert_eq!(format_significant(1.5e-7, 12), "1.5e-07");
        assert_eq!(format_significant(123456.789, 12), "123456.789");
    }

    #[test]
    fn edge_list_text() {
        let g = Graph::new(
            2,
            vec![
                Edge {
                    source: 0,
                    target: 0,
                    weight: 0.5,
                },
                Edge {
                    source: 0,
                    target: 1,
                    weight: 0.5,
                },
                Edge {
                    source: 1,
                    target: 1,
                    weight: 1.0,
                },
            ],
            true,
            true,
        )
        .unwrap();
        assert_eq!(
            g.to_edge_list_string(),
            "# directed nodes=2\n0 0 0.5\n0 1 0.5\n1 1 1\n"
        );
    }
}
