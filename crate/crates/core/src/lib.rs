//! Complex-network features for univariate time series.
//!
//! A series is mapped into three graphs (weighted natural visibility graph,
//! weighted horizontal visibility graph and quantile graph), five global
//! topological measures are taken on each, and the resulting 15-dimensional
//! NetF vector feeds a min-max / PCA / k-means clustering pipeline.
//!
//! ```
//! use netf_core::{netf, TimeSeries};
//!
//! let series = TimeSeries::new("toy", vec![3.0, 1.0, 2.0, 5.0, 0.5, 4.0]).unwrap();
//! let features = netf(&series, 4).unwrap();
//! assert_eq!(features.values().len(), 15);
//! ```

pub mod cluster;
pub mod dgp;
mod error;
pub mod netf;
pub mod netmap;
pub mod topo;
pub mod tsio;

pub use cluster::{
    ari, avg_silhouette, kmeans, nmi, nmi_with, pca, select_k, ClusterResult, KMeansConfig,
    NmiNormalization, PcaModel, SelectionMetric,
};
pub use dgp::{generate, GenConfig, ModelSpec, Preset};
pub use error::{Error, Result};
pub use netf::{
    feature_matrix, feature_matrix_for, minmax_rescale, netf, netf_for, FeatureMatrix, InputFlags,
    Mapping, NetFVector, DEFAULT_ETA, FEATURE_NAMES,
};
pub use netmap::{
    hvg, nvg, nvg_bruteforce, quantile_graph, sample_quantiles, Graph, QuantileBinning,
};
pub use topo::{
    avg_path_length, avg_weighted_degree, clustering_coefficient, modularity, to_undirected,
    topo_summary, walktrap, Partition, TopoSummary,
};
pub use tsio::{load_csv, load_ucr_tsv, write_csv, Dataset, TimeSeries};
