//! Decomposition of the genealogy DAG into disjoint single-progenitor
//! families.
//!
//! Students with several advisors make the genealogy a DAG rather than a
//! forest. To recover lineages, the graph is first condensed into
//! super-nodes (maximal pure-tree subgraphs), then for every multi-advisor
//! scholar exactly one parent link is kept. The link to keep is chosen by
//! Monte-Carlo: random single-parent realizations estimate, for each link,
//! the probability that its removal leaves the two endpoints connected
//! anyway; the link whose removal would most likely disconnect them is the
//! structurally essential one and is retained. The resulting forest's trees
//! are the families, each rooted at its initiator.
//!
//! On top of the partition: family size rankings, kinship-style indicators
//! (endogamy, concentration, symmetry) with a multinomial null model, and
//! family-by-attribute incidence matrices.

mod condense;
mod kinship;
mod montecarlo;
mod resolve;

pub use condense::{condense, SuperNodeGraph};
pub use kinship::{
    incidence_matrix, kinship_indicators, null_model, IncidenceMatrix, KinshipIndicators,
    NullModelReport,
};
pub use montecarlo::{sample_cut_probabilities, CutProbabilities, SamplingMode};
pub use resolve::{resolve_families, CutDecision, FamilyPartition, FamilySizes};
