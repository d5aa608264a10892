//! Analysis toolkit for academic advisor-student genealogy corpora.
//!
//! The crate ingests a corpus of scholars with mentor links, repairs its
//! temporal and disciplinary metadata, and derives the quantities used to
//! study how a scientific community evolves:
//!
//! - demographic prevalence profiles per country or discipline, clustered
//!   by Kolmogorov-Smirnov distance ([`rankings`]);
//! - drift of top-k rankings across time windows via an extended, multiset
//!   Jaccard index ([`rankings`]);
//! - weighted directed attribute-transition ("mesoscale") networks with
//!   flow decompositions, hierarchy curves, centralities, communities and
//!   cross-window NMI series ([`meso`]);
//! - decomposition of the genealogy DAG into disjoint single-progenitor
//!   families by Monte-Carlo cut selection, plus kinship indicators with a
//!   multinomial null model ([`families`]);
//! - iso-discipline chain statistics quantifying disciplinary memory
//!   ([`chains`]);
//! - a synthetic corpus generator with planted ground truth ([`synth`]).
//!
//! Everything downstream of ingestion works on an immutable
//! [`GenealogyGraph`] and is safe to drive from multiple threads. With the
//! default `parallel` feature the heavy inner loops (Monte-Carlo sampling,
//! per-window community detection, null-model replicates) fan out over
//! rayon; results are identical either way.

pub mod chains;
pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod meso;
pub mod rankings;
pub mod repair;
pub mod scholar;
pub mod seeding;
pub mod synth;
pub mod window;

mod par;

pub use error::{Error, Result};
pub use graph::{AdvisorEdge, GenealogyGraph, GraphBuilder, YearBounds};
pub use io::{ingest_corpus, write_corpus, CorpusFormat, Ingested, IngestReport};
pub use scholar::{DisciplineProvenance, Scholar, ScholarId, YearProvenance};
pub use window::{window_counts, AbundanceTable, Attribute, TimeWindowing};
