//! Data enrichment: constraint-consistent date repair/imputation and
//! title-based discipline inference.

mod dates;
mod disciplines;

pub use dates::{detect_date_violations, repair_dates, DateRepairReport, GapModel, Violations};
pub use disciplines::{
    infer_disciplines, train_keyword_model, InferenceReport, KeywordModel, STOPWORDS,
};
