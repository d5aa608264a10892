use serde::{Deserialize, Serialize};

/// Corpus-wide unique identifier of a scholar.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct ScholarId(pub u64);

impl std::fmt::Display for ScholarId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for ScholarId {
    fn from(v: u64) -> Self {
        ScholarId(v)
    }
}

/// Where a scholar's defense year came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum YearProvenance {
    /// As found in the corpus.
    Original,
    /// Replaced by the date-repair pass (a year was present but inconsistent).
    Repaired,
    /// Filled in by the date-repair pass (no year was present).
    Imputed,
}

/// Where a scholar's discipline label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisciplineProvenance {
    /// As found in the corpus.
    Original,
    /// Assigned by title-based inference.
    Inferred,
}

/// One scientist record: the node payload of the genealogy graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scholar {
    pub id: ScholarId,
    pub name: String,
    /// PhD defense year (CE), if known.
    pub year: Option<i32>,
    pub country: Option<String>,
    pub university: Option<String>,
    pub discipline: Option<String>,
    pub thesis_title: Option<String>,
    pub year_provenance: YearProvenance,
    pub discipline_provenance: DisciplineProvenance,
}

impl Scholar {
    /// A fresh record with every provenance marked `original`.
    pub fn new(id: ScholarId, name: impl Into<String>) -> Self {
        Scholar {
            id,
            name: name.into(),
            year: None,
            country: None,
            university: None,
            discipline: None,
            thesis_title: None,
            year_provenance: YearProvenance::Original,
            discipline_provenance: DisciplineProvenance::Original,
        }
    }

    pub fn with_year(mut self, year: i32) -> Self {
        self.year = Some(year);
        self
    }

    pub fn with_country(mut self, country: impl Into<String>) -> Self {
        self.country = Some(normalize_label(&country.into()));
        self
    }

    pub fn with_university(mut self, university: impl Into<String>) -> Self {
        self.university = Some(normalize_label(&university.into()));
        self
    }

    pub fn with_discipline(mut self, discipline: impl Into<String>) -> Self {
        self.discipline = Some(normalize_label(&discipline.into()));
        self
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.thesis_title = Some(title.into());
        self
    }
}

/// Canonical form of an attribute label: trimmed and case-folded.
/// No fuzzy matching beyond that; disambiguation is out of scope.
pub fn normalize_label(raw: &str) -> String {
    raw.trim().to_lowercase()
}

/// Returns `None` for labels that are empty after normalization.
pub fn normalize_opt(raw: Option<String>) -> Option<String> {
    raw.map(|s| normalize_label(&s)).filter(|s| !s.is_empty())
}
