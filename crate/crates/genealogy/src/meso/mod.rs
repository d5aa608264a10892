//! Mesoscale networks: attribute-level projections of the genealogy.
//!
//! Nodes are attribute values (countries, disciplines, ...); a directed
//! edge A -> B accumulates one unit of weight for every advisor link whose
//! mentor carries A and whose student carries B. Self-loops are meaningful:
//! they count transitions that stay inside one attribute value.

mod centrality;
mod louvain;
mod network;
mod nmi;

pub use centrality::{centralities, CentralityRow};
pub use louvain::{detect_communities, Partition};
pub use network::{
    build_meso, flow_triples, hierarchy_curve, hierarchy_series, windowed_meso, FlowDirection,
    FlowTriple, HierarchyCurve, HierarchyPoint, MesoNetwork,
};
pub use nmi::{dip_index, nmi_series, partition_nmi, NmiPoint};
