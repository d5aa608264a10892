//! Relative-abundance profiles, their hierarchical clustering, and
//! ranking-drift measurement over time windows.

mod dendrogram;
mod jaccard;
mod profile;

pub use dendrogram::{cluster_profiles, ClusterSummary, Dendrogram, Linkage, Merge};
pub use jaccard::{
    drift_series, extended_jaccard, extended_multiset, peak_index, DriftPoint, RankSimilarity,
    RankedList,
};
pub use profile::{build_profiles, ks_distance, Profile};
