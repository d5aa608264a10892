use crate::scholar::ScholarId;

/// Errors produced while ingesting or analysing a genealogy corpus.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("schema violation at line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("duplicate scholar id {id}")]
    DuplicateId { id: ScholarId },

    #[error("self-loop edge: scholar {id} listed as their own advisor")]
    SelfLoop { id: ScholarId },

    #[error("duplicate advisor edge {mentor} -> {student}")]
    DuplicateEdge { mentor: ScholarId, student: ScholarId },

    #[error("edge references unknown scholar id {id}")]
    UnknownScholar { id: ScholarId },

    #[error("cycle detected: {}", format_cycle(.cycle))]
    Cycle { cycle: Vec<ScholarId> },

    #[error("scholar {id}: year {year} outside accepted bounds [{min}, {max}]")]
    YearOutOfBounds {
        id: ScholarId,
        year: i32,
        min: i32,
        max: i32,
    },

    #[error("gap model is empty: no valid mentor-student year pairs to learn from")]
    EmptyGapModel,

    #[error("no scholars carry both a thesis title and an original discipline label")]
    NoLabeledTitles,

    #[error("no scholars carry a discipline label")]
    NoDisciplines,

    #[error("attribute network has no edges")]
    EmptyNetwork,

    #[error("clustering requires at least two profiles, got {0}")]
    NotEnoughProfiles(usize),

    #[error("invalid ranked list: {0}")]
    InvalidRanking(String),

    #[error("invalid window configuration: {0}")]
    InvalidWindowing(String),

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

fn format_cycle(cycle: &[ScholarId]) -> String {
    cycle
        .iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

pub type Result<T> = std::result::Result<T, Error>;
