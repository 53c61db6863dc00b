//! Global topological measures: average weighted degree, average path
//! length, clustering coefficient, Walktrap community count and modularity.

mod measures;
mod partition;
mod walktrap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::netmap::Graph;

pub use measures::{
    avg_path_length, avg_weighted_degree, clustering_coefficient, modularity, to_undirected,
};
pub use partition::Partition;
pub use walktrap::{walktrap, walktrap_hierarchy, WalktrapHierarchy, DEFAULT_STEPS};

/// The five measures of one graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopoSummary {
    pub avg_weighted_degree: f64,
    /// 0 when no node pair is connected; see `path_length_defined`.
    pub avg_path_length: f64,
    pub communities: usize,
    pub clustering_coefficient: f64,
    pub modularity: f64,
    pub path_length_defined: bool,
}

impl TopoSummary {
    /// Values in `k, d, S, C, Q` order.
    pub fn values(&self) -> [f64; 5] {
        [
            self.avg_weighted_degree,
            self.avg_path_length,
            self.communities as f64,
            self.clustering_coefficient,
            self.modularity,
        ]
    }
}

/// All five measures. Directed graphs are collapsed to their undirected
/// view for clustering, communities and modularity; path lengths follow
/// edge direction.
pub fn topo_summary(g: &Graph) -> Result<TopoSummary> {
    let avg_weighted_degree = avg_weighted_degree(g)?;
    let (avg_path_length, path_length_defined) = match avg_path_length(g) {
        Ok(d) => (d, true),
        Err(Error::NoReachablePair) => (0.0, false),
        Err(e) => return Err(e),
    };
    let undirected = to_undirected(g);
    let partition = walktrap(&undirected, DEFAULT_STEPS)?;
    Ok(TopoSummary {
        avg_weighted_degree,
        avg_path_length,
        communities: partition.community_count(),
        clustering_coefficient: clustering_coefficient(&undirected),
        modularity: modularity(&undirected, &partition)?,
        path_length_defined,
    })
}
