//! Feature-based clustering: PCA, k-means, choice of `k`, and the ARI,
//! NMI and average silhouette evaluation metrics.

mod kmeans;
mod metrics;
mod pca;
mod select;

pub use kmeans::{kmeans, ClusterResult, KMeansConfig};
pub use metrics::{ari, avg_silhouette, nmi, nmi_with, NmiNormalization};
pub use pca::{pca, PcaModel};
pub use select::{select_k, KSelection, SelectionMetric};
