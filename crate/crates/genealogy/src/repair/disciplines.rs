//! Title-based discipline inference.
//!
//! A multinomial naive-Bayes model is fit on the scholars that carry both a
//! thesis title and an original discipline label, then applied to the
//! unlabeled titles. Tokens are lowercased alphanumeric runs of length >= 3
//! with a fixed English stopword list removed; per-class token frequencies
//! get additive smoothing of 1.

use std::collections::HashMap;

use crate::graph::GenealogyGraph;
use crate::par::indexed_map;
use crate::scholar::{DisciplineProvenance, Scholar};
use crate::{Error, Result};

/// Words carrying no disciplinary signal.
pub const STOPWORDS: &[&str] = &[
    "about", "above", "after", "all", "also", "and", "any", "are", "based", "been", "being",
    "between", "both", "but", "can", "certain", "concerning", "contribution", "contributions",
    "der", "des", "die", "each", "einer", "for", "from", "further", "general", "has", "have",
    "her", "his", "how", "into", "its", "les", "method", "methods", "new", "non", "not", "notes",
    "observations", "one", "only", "other", "our", "over", "part", "problem", "problems",
    "properties", "research", "results", "several", "some", "studies", "study", "such", "sur",
    "that", "the", "their", "theory", "these", "they", "this", "three", "through", "two", "und",
    "under", "upon", "use", "using", "various", "via", "was", "were", "which", "with", "within",
];

/// Splits a title into signal tokens: lowercase alphanumeric runs, length
/// >= 3, stopwords removed.
pub fn tokenize(title: &str) -> Vec<String> {
    title
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 3)
        .map(str::to_lowercase)
        .filter(|t| !STOPWORDS.contains(&t.as_str()))
        .collect()
}

/// Fraction of alphabetic characters that are ASCII; a low value marks a
/// title that was never translated.
pub fn ascii_letter_fraction(title: &str) -> f64 {
    let letters: Vec<char> = title.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.is_empty() {
        return 1.0;
    }
    letters.iter().filter(|c| c.is_ascii()).count() as f64 / letters.len() as f64
}

/// Multinomial naive-Bayes model over title tokens.
#[derive(Debug, Clone)]
pub struct KeywordModel {
    disciplines: Vec<String>,
    /// log prior per discipline.
    log_priors: Vec<f64>,
    /// token -> per-discipline smoothed log-likelihood.
    token_scores: HashMap<String, Vec<f64>>,
}

impl KeywordModel {
    pub fn disciplines(&self) -> &[String] {
        &self.disciplines
    }

    pub fn vocabulary_len(&self) -> usize {
        self.token_scores.len()
    }

    pub fn priors(&self) -> Vec<f64> {
        self.log_priors.iter().map(|lp| lp.exp()).collect()
    }

    /// Smoothed log P(token | discipline); tokens outside the vocabulary
    /// are unknown to the model and score `None`.
    pub fn token_score(&self, token: &str, discipline: &str) -> Option<f64> {
        let di = self.disciplines.iter().position(|d| d == discipline)?;
        self.token_scores.get(token).map(|row| row[di])
    }

    /// Per-discipline log score of a title; `None` when no token of the
    /// title is in the vocabulary (no evidence to classify on).
    pub fn score(&self, title: &str) -> Option<Vec<(usize, f64)>> {
        let mut seen = false;
        let mut scores = self.log_priors.clone();
        for token in tokenize(title) {
            if let Some(row) = self.token_scores.get(&token) {
                seen = true;
                for (s, &l) in scores.iter_mut().zip(row) {
                    *s += l;
                }
            }
        }
        if !seen {
            return None;
        }
        Some(scores.into_iter().enumerate().collect())
    }

    /// Most probable discipline and the log-score margin over the runner-up.
    /// The margin is infinite when only one discipline exists.
    pub fn classify(&self, title: &str) -> Option<(usize, f64)> {
        let mut scores = self.score(title)?;
        scores.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let (best_idx, best) = scores[0];
        let margin = scores
            .get(1)
            .map(|&(_, second)| best - second)
            .unwrap_or(f64::INFINITY);
        Some((best_idx, margin))
    }
}

/// Fits the keyword model on scholars carrying both a title and an
/// `original` discipline label.
pub fn train_keyword_model(graph: &GenealogyGraph) -> Result<KeywordModel> {
    let labeled: Vec<&Scholar> = graph
        .scholars()
        .iter()
        .filter(|s| {
            s.discipline.is_some()
                && s.thesis_title.is_some()
                && s.discipline_provenance == DisciplineProvenance::Original
        })
        .collect();
    if labeled.is_empty() {
        return Err(Error::NoLabeledTitles);
    }

    let mut disciplines: Vec<String> = labeled
        .iter()
        .map(|s| s.discipline.clone().expect("filtered"))
        .collect();
    disciplines.sort_unstable();
    disciplines.dedup();
    let index: HashMap<&str, usize> = disciplines
        .iter()
        .enumerate()
        .map(|(i, d)| (d.as_str(), i))
        .collect();

    let mut class_docs = vec![0u64; disciplines.len()];
    let mut class_tokens = vec![0u64; disciplines.len()];
    let mut counts: HashMap<String, Vec<u64>> = HashMap::new();
    for scholar in &labeled {
        let di = index[scholar.discipline.as_deref().expect("filtered")];
        class_docs[di] += 1;
        for token in tokenize(scholar.thesis_title.as_deref().expect("filtered")) {
            class_tokens[di] += 1;
            counts
                .entry(token)
                .or_insert_with(|| vec![0; disciplines.len()])[di] += 1;
        }
    }

    let total_docs: u64 = class_docs.iter().sum();
    let log_priors: Vec<f64> = class_docs
        .iter()
        .map(|&d| (d as f64 / total_docs as f64).ln())
        .collect();
    let vocab = counts.len() as f64;
    let token_scores: HashMap<String, Vec<f64>> = counts
        .into_iter()
        .map(|(token, row)| {
            let scores = row
                .iter()
                .zip(&class_tokens)
                .map(|(&c, &t)| ((c as f64 + 1.0) / (t as f64 + vocab)).ln())
                .collect();
            (token, scores)
        })
        .collect();

    Ok(KeywordModel {
        disciplines,
        log_priors,
        token_scores,
    })
}

/// Outcome of an [`infer_disciplines`] run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InferenceReport {
    pub already_labeled: usize,
    pub inferred: usize,
    /// Unlabeled scholars left untouched: no title, no usable token, margin
    /// below the threshold, or title skipped as untranslatable.
    pub unlabeled: usize,
    pub skipped_untranslatable: usize,
}

/// Assigns the most probable discipline to every scholar that has a title
/// but no label, provided the log-score margin between the best and the
/// runner-up class is at least `min_margin` (0 assigns whenever any
/// evidence exists). Labeled scholars are never touched. When
/// `skip_untranslatable` is set, titles with under 30% ASCII letters are
/// ignored.
pub fn infer_disciplines(
    graph: &GenealogyGraph,
    model: &KeywordModel,
    min_margin: f64,
    skip_untranslatable: bool,
) -> (GenealogyGraph, InferenceReport) {
    #[derive(Clone, Copy)]
    enum Outcome {
        Keep,
        Unlabeled,
        Untranslatable,
        Assign(usize),
    }

    let outcomes: Vec<Outcome> = indexed_map(graph.len(), |pos| {
        let scholar = graph.scholar(pos);
        if scholar.discipline.is_some() {
            return Outcome::Keep;
        }
        let Some(title) = scholar.thesis_title.as_deref() else {
            return Outcome::Unlabeled;
        };
        if skip_untranslatable && ascii_letter_fraction(title) < 0.3 {
            return Outcome::Untranslatable;
        }
        match model.classify(title) {
            Some((best, margin)) if margin >= min_margin => Outcome::Assign(best),
            _ => Outcome::Unlabeled,
        }
    });

    let mut report = InferenceReport {
        already_labeled: 0,
        inferred: 0,
        unlabeled: 0,
        skipped_untranslatable: 0,
    };
    for outcome in &outcomes {
        match outcome {
            Outcome::Keep => report.already_labeled += 1,
            Outcome::Assign(_) => report.inferred += 1,
            Outcome::Unlabeled => report.unlabeled += 1,
            Outcome::Untranslatable => {
                report.unlabeled += 1;
                report.skipped_untranslatable += 1;
            }
        }
    }

    let mut pos = 0usize;
    let inferred_graph = graph.map_scholars(|s| {
        let mut out = s.clone();
        if let Outcome::Assign(di) = outcomes[pos] {
            out.discipline = Some(model.disciplines[di].clone());
            out.discipline_provenance = DisciplineProvenance::Inferred;
        }
        pos += 1;
        out
    });
    (inferred_graph, report)
}
