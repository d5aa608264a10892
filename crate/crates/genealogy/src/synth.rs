//! Synthetic genealogy corpora with planted, recorded ground truth.
//!
//! Generation is cohort-based: scholars appear in year order and advisors
//! are always strictly older, so the corpus is acyclic by construction.
//! Everything the generator plants (true primary-parent trees, attribute
//! regimes, discipline blocks, school trees, injected corruption) is
//! recorded in a [`GroundTruth`] manifest so tests can compare detector
//! output against exact lists.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{GenealogyGraph, GraphBuilder, YearBounds};
use crate::scholar::{Scholar, ScholarId};
use crate::seeding;
use crate::{Error, Result};

/// Country (or other label) distribution that may change over time: the
/// regime with the largest `from_year` not exceeding a scholar's year is in
/// force.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributeModel {
    pub labels: Vec<String>,
    pub regimes: Vec<AttributeRegime>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributeRegime {
    pub from_year: i32,
    /// Sampling weight per label, same length as `labels`.
    pub weights: Vec<f64>,
}

/// How student disciplines relate to mentor disciplines.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum DisciplineModel {
    /// Student keeps the mentor's discipline with probability `q`,
    /// otherwise draws uniformly. Memoryless beyond one generation.
    Inherit { labels: Vec<String>, q: f64 },
    /// Disciplines are grouped into blocks; a student stays inside the
    /// mentor's block (uniformly) with probability `p_in`, otherwise draws
    /// uniformly over every label. The block map may change over time.
    Blocks {
        labels: Vec<String>,
        p_in: f64,
        regimes: Vec<BlockRegime>,
    },
    /// A fraction of root trees are "schools" with sticky inheritance
    /// `q_school`; the rest inherit with `q_other`.
    Schools {
        labels: Vec<String>,
        q_school: f64,
        q_other: f64,
        school_fraction: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockRegime {
    pub from_year: i32,
    /// Block id per label, same length as `labels`.
    pub block_of: Vec<usize>,
}

/// Full description of a synthetic corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Stop creating scholars at this count.
    pub scholars: usize,
    pub roots: usize,
    pub start_year: i32,
    pub end_year: i32,
    /// Mentor-student year gap, uniform in this inclusive range.
    pub gap_range: (i32, i32),
    /// Mean of the geometric offspring distribution.
    pub mean_offspring: f64,
    /// Probability that a scholar receives a second advisor.
    pub second_advisor_prob: f64,
    /// Given a second advisor, probability it comes from outside the
    /// scholar's root tree (otherwise a random proper ancestor).
    pub cross_family_prob: f64,
    pub countries: Option<AttributeModel>,
    pub disciplines: Option<DisciplineModel>,
    pub missing_year_rate: f64,
    pub missing_country_rate: f64,
    pub missing_discipline_rate: f64,
    /// Fraction of edges corrupted into `year(mentor) > year(student)`.
    pub date_violation_rate: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            scholars: 1000,
            roots: 10,
            start_year: 1700,
            end_year: 2000,
            gap_range: (4, 10),
            mean_offspring: 1.1,
            second_advisor_prob: 0.1,
            cross_family_prob: 0.5,
            countries: None,
            disciplines: None,
            missing_year_rate: 0.0,
            missing_country_rate: 0.0,
            missing_discipline_rate: 0.0,
            date_violation_rate: 0.0,
        }
    }
}

impl GeneratorConfig {
    fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| -> Result<()> {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} = {p} not in [0, 1]")))
            }
        };
        prob("second_advisor_prob", self.second_advisor_prob)?;
        prob("cross_family_prob", self.cross_family_prob)?;
        prob("missing_year_rate", self.missing_year_rate)?;
        prob("missing_country_rate", self.missing_country_rate)?;
        prob("missing_discipline_rate", self.missing_discipline_rate)?;
        prob("date_violation_rate", self.date_violation_rate)?;
        if self.roots == 0 || self.scholars < self.roots {
            return Err(Error::InvalidConfig(
                "need at least one root and scholars >= roots".into(),
            ));
        }
        if self.end_year < self.start_year {
            return Err(Error::InvalidConfig("end_year before start_year".into()));
        }
        if !(self.mean_offspring.is_finite() && self.mean_offspring > 0.0) {
            return Err(Error::InvalidConfig(
                "mean_offspring must be positive and finite".into(),
            ));
        }
        if self.gap_range.0 < 1 || self.gap_range.1 < self.gap_range.0 {
            return Err(Error::InvalidConfig(format!(
                "invalid gap range {:?}",
                self.gap_range
            )));
        }
        if let Some(model) = &self.countries {
            if model.regimes.is_empty() {
                return Err(Error::InvalidConfig("country model has no regimes".into()));
            }
            for regime in &model.regimes {
                if regime.weights.len() != model.labels.len() {
                    return Err(Error::InvalidConfig(
                        "country regime weight count != label count".into(),
                    ));
                }
            }
        }
        match &self.disciplines {
            Some(DisciplineModel::Inherit { labels, q }) => {
                prob("q", *q)?;
                if labels.is_empty() {
                    return Err(Error::InvalidConfig("no discipline labels".into()));
                }
            }
            Some(DisciplineModel::Blocks {
                labels,
                p_in,
                regimes,
            }) => {
                prob("p_in", *p_in)?;
                if regimes.is_empty() {
                    return Err(Error::InvalidConfig("block model has no regimes".into()));
                }
                for regime in regimes {
                    if regime.block_of.len() != labels.len() {
                        return Err(Error::InvalidConfig(
                            "block map length != label count".into(),
                        ));
                    }
                }
            }
            Some(DisciplineModel::Schools {
                labels,
                q_school,
                q_other,
                school_fraction,
            }) => {
                prob("q_school", *q_school)?;
                prob("q_other", *q_other)?;
                prob("school_fraction", *school_fraction)?;
                if labels.is_empty() {
                    return Err(Error::InvalidConfig("no discipline labels".into()));
                }
            }
            None => {}
        }
        Ok(())
    }
}

/// What the generator actually planted.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub scholars: usize,
    /// student -> primary advisor: the true single-parent forest.
    pub primary_parent: BTreeMap<u64, u64>,
    /// scholar -> root of its primary tree.
    pub true_family_root: BTreeMap<u64, u64>,
    /// Edges corrupted into date violations, exactly as injected.
    pub injected_violations: Vec<(u64, u64)>,
    /// Scholars whose year was blanked.
    pub blanked_years: Vec<u64>,
    pub blanked_countries: Vec<u64>,
    pub blanked_disciplines: Vec<u64>,
    /// Root ids of school trees (sticky-inheritance lineages).
    pub school_roots: Vec<u64>,
}

struct Draft {
    id: u64,
    year: i32,
    primary: Option<u64>,
    root: u64,
    second: Option<u64>,
    country: Option<String>,
    discipline: Option<String>,
}

fn sample_geometric(rng: &mut impl Rng, mean: f64) -> usize {
    // failures before first success, success probability 1/(1+mean)
    let p_continue = mean / (1.0 + mean);
    let u: f64 = rng.random();
    if p_continue <= 0.0 {
        return 0;
    }
    (u.ln() / p_continue.ln()).floor() as usize
}

fn sample_weighted(rng: &mut impl Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        target -= w;
        if target <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// Generates the corpus in memory. Deterministic for a fixed config.
pub fn generate(config: &GeneratorConfig) -> Result<(GenealogyGraph, GroundTruth)> {
    config.validate()?;
    let mut rng = seeding::rng(config.seed);
    let mut truth = GroundTruth {
        seed: config.seed,
        ..GroundTruth::default()
    };

    // cohort growth: scholars processed in creation order (parents before
    // children), children enqueued behind. Lineages near the mean-offspring
    // threshold die out often, so fresh root lineages are seeded whenever
    // the queue drains before the target size is reached.
    let mut drafts: Vec<Draft> = Vec::with_capacity(config.scholars);
    let mut spawn_root = |drafts: &mut Vec<Draft>, rng: &mut rand_chacha::ChaCha8Rng| {
        let id = drafts.len() as u64 + 1;
        drafts.push(Draft {
            id,
            year: config.start_year + rng.random_range(0..=3),
            primary: None,
            root: id,
            second: None,
            country: None,
            discipline: None,
        });
    };
    for _ in 0..config.roots {
        spawn_root(&mut drafts, &mut rng);
    }
    let mut cursor = 0usize;
    while drafts.len() < config.scholars {
        if cursor >= drafts.len() {
            spawn_root(&mut drafts, &mut rng);
            continue;
        }
        let (parent_id, parent_year, parent_root) = {
            let d = &drafts[cursor];
            (d.id, d.year, d.root)
        };
        let offspring = sample_geometric(&mut rng, config.mean_offspring);
        for _ in 0..offspring {
            if drafts.len() >= config.scholars {
                break;
            }
            let gap = rng.random_range(config.gap_range.0..=config.gap_range.1);
            let year = parent_year + gap;
            if year > config.end_year {
                continue;
            }
            let id = drafts.len() as u64 + 1;
            drafts.push(Draft {
                id,
                year,
                primary: Some(parent_id),
                root: parent_root,
                second: None,
                country: None,
                discipline: None,
            });
        }
        cursor += 1;
    }

    // second advisors: cross-tree picks come from the year-sorted pool,
    // same-tree picks from the primary ancestor chain
    let year_sorted: Vec<(i32, u64)> = {
        let mut v: Vec<(i32, u64)> = drafts.iter().map(|d| (d.year, d.id)).collect();
        v.sort_unstable();
        v
    };
    let index_of: BTreeMap<u64, usize> = drafts.iter().enumerate().map(|(i, d)| (d.id, i)).collect();
    for i in 0..drafts.len() {
        let Some(primary) = drafts[i].primary else {
            continue;
        };
        if !rng.random_bool(config.second_advisor_prob) {
            continue;
        }
        let year = drafts[i].year;
        let root = drafts[i].root;
        let candidate = if rng.random_bool(config.cross_family_prob) {
            // anyone strictly older, regardless of tree
            let older = year_sorted.partition_point(|&(y, _)| y < year);
            if older == 0 {
                None
            } else {
                let pick = year_sorted[rng.random_range(0..older)].1;
                (pick != primary && pick != drafts[i].id).then_some(pick)
            }
        } else {
            // a random proper ancestor beyond the primary parent
            let mut chain = Vec::new();
            let mut at = primary;
            while let Some(up) = drafts[index_of[&at]].primary {
                chain.push(up);
                at = up;
            }
            if chain.is_empty() {
                None
            } else {
                Some(chain[rng.random_range(0..chain.len())])
            }
        };
        if let Some(second) = candidate {
            let _ = root;
            drafts[i].second = Some(second);
        }
    }

    // attributes, in id order so mentors are assigned before students
    if let Some(model) = &config.countries {
        for i in 0..drafts.len() {
            let year = drafts[i].year;
            let regime = model
                .regimes
                .iter()
                .rev()
                .find(|r| r.from_year <= year)
                .unwrap_or(&model.regimes[0]);
            let label = sample_weighted(&mut rng, &regime.weights);
            drafts[i].country = Some(model.labels[label].clone());
        }
    }
    match &config.disciplines {
        Some(DisciplineModel::Inherit { labels, q }) => {
            for i in 0..drafts.len() {
                let inherited = drafts[i].primary.and_then(|p| {
                    rng.random_bool(*q)
                        .then(|| drafts[index_of[&p]].discipline.clone())
                        .flatten()
                });
                drafts[i].discipline = Some(
                    inherited
                        .unwrap_or_else(|| labels[rng.random_range(0..labels.len())].clone()),
                );
            }
        }
        Some(DisciplineModel::Blocks {
            labels,
            p_in,
            regimes,
        }) => {
            let label_id: BTreeMap<&str, usize> = labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.as_str(), i))
                .collect();
            for i in 0..drafts.len() {
                let year = drafts[i].year;
                let regime = regimes
                    .iter()
                    .rev()
                    .find(|r| r.from_year <= year)
                    .unwrap_or(&regimes[0]);
                let mentor_label = drafts[i]
                    .primary
                    .and_then(|p| drafts[index_of[&p]].discipline.as_deref())
                    .map(|l| label_id[l]);
                let choice = match mentor_label {
                    Some(mentor) if rng.random_bool(*p_in) => {
                        let block = regime.block_of[mentor];
                        let members: Vec<usize> = (0..labels.len())
                            .filter(|&l| regime.block_of[l] == block)
                            .collect();
                        members[rng.random_range(0..members.len())]
                    }
                    _ => rng.random_range(0..labels.len()),
                };
                drafts[i].discipline = Some(labels[choice].clone());
            }
        }
        Some(DisciplineModel::Schools {
            labels,
            q_school,
            q_other,
            school_fraction,
        }) => {
            let mut school_roots = std::collections::HashSet::new();
            for d in drafts.iter().filter(|d| d.primary.is_none()) {
                if rng.random_bool(*school_fraction) {
                    school_roots.insert(d.id);
                }
            }
            truth.school_roots = {
                let mut v: Vec<u64> = school_roots.iter().copied().collect();
                v.sort_unstable();
                v
            };
            for i in 0..drafts.len() {
                let q = if school_roots.contains(&drafts[i].root) {
                    *q_school
                } else {
                    *q_other
                };
                let inherited = drafts[i].primary.and_then(|p| {
                    rng.random_bool(q)
                        .then(|| drafts[index_of[&p]].discipline.clone())
                        .flatten()
                });
                drafts[i].discipline = Some(
                    inherited
                        .unwrap_or_else(|| labels[rng.random_range(0..labels.len())].clone()),
                );
            }
        }
        None => {}
    }

    // corruption; violation targets are leaf students with a single
    // advisor, so each injection creates exactly one detectable violation
    let mut years: BTreeMap<u64, Option<i32>> =
        drafts.iter().map(|d| (d.id, Some(d.year))).collect();
    let has_children: std::collections::HashSet<u64> = drafts
        .iter()
        .filter_map(|d| d.primary)
        .chain(drafts.iter().filter_map(|d| d.second))
        .collect();
    if config.date_violation_rate > 0.0 {
        let total_edges = drafts
            .iter()
            .map(|d| d.primary.iter().len() + d.second.iter().len())
            .sum::<usize>();
        let wanted = (config.date_violation_rate * total_edges as f64).round() as usize;
        let mut eligible: Vec<usize> = (0..drafts.len())
            .filter(|&i| {
                drafts[i].primary.is_some()
                    && drafts[i].second.is_none()
                    && !has_children.contains(&drafts[i].id)
            })
            .collect();
        // deterministic shuffle
        for i in (1..eligible.len()).rev() {
            let j = rng.random_range(0..=i);
            eligible.swap(i, j);
        }
        for &i in eligible.iter().take(wanted) {
            let mentor = drafts[i].primary.expect("eligible has a primary");
            let mentor_year = drafts[index_of[&mentor]].year;
            if mentor_year <= config.start_year {
                continue;
            }
            let below = rng.random_range(1..=(mentor_year - config.start_year).min(5));
            years.insert(drafts[i].id, Some(mentor_year - below));
            truth
                .injected_violations
                .push((mentor, drafts[i].id));
        }
        truth.injected_violations.sort_unstable();
    }
    let violation_nodes: std::collections::HashSet<u64> = truth
        .injected_violations
        .iter()
        .flat_map(|&(m, s)| [m, s])
        .collect();
    if config.missing_year_rate > 0.0 {
        for d in &drafts {
            if violation_nodes.contains(&d.id) {
                continue;
            }
            if rng.random_bool(config.missing_year_rate) {
                years.insert(d.id, None);
                truth.blanked_years.push(d.id);
            }
        }
    }
    let mut blank_country: std::collections::HashSet<u64> = std::collections::HashSet::new();
    if config.missing_country_rate > 0.0 {
        for d in &drafts {
            if rng.random_bool(config.missing_country_rate) {
                blank_country.insert(d.id);
                truth.blanked_countries.push(d.id);
            }
        }
    }
    let mut blank_discipline: std::collections::HashSet<u64> = std::collections::HashSet::new();
    if config.missing_discipline_rate > 0.0 {
        for d in &drafts {
            if rng.random_bool(config.missing_discipline_rate) {
                blank_discipline.insert(d.id);
                truth.blanked_disciplines.push(d.id);
            }
        }
    }

    // assemble the graph
    let mut builder = GraphBuilder::with_bounds(YearBounds::new(
        config.start_year - 10,
        config.end_year + 10,
    ));
    for d in &drafts {
        let mut scholar = Scholar::new(ScholarId(d.id), format!("scholar {}", d.id));
        scholar.year = years[&d.id];
        if !blank_country.contains(&d.id) {
            scholar.country = d.country.clone();
        }
        if !blank_discipline.contains(&d.id) {
            scholar.discipline = d.discipline.clone();
            // titles echo the discipline so the keyword model has signal
            if let Some(disc) = &d.discipline {
                scholar.thesis_title = Some(format!("Advances concerning {disc} structures"));
            }
        }
        builder.add_scholar(scholar)?;
        if let Some(p) = d.primary {
            truth.primary_parent.insert(d.id, p);
        }
        truth.true_family_root.insert(d.id, d.root);
    }
    for d in &drafts {
        if let Some(p) = d.primary {
            builder.add_edge(ScholarId(p), ScholarId(d.id))?;
        }
        if let Some(s) = d.second {
            builder.add_edge(ScholarId(s), ScholarId(d.id))?;
        }
    }
    truth.scholars = drafts.len();
    let graph = builder.build()?;
    Ok((graph, truth))
}

/// Generates and writes the corpus (jsonl) plus its manifest (json).
pub fn generate_to_files(
    config: &GeneratorConfig,
    corpus_path: &Path,
    manifest_path: &Path,
) -> Result<(GenealogyGraph, GroundTruth)> {
    let (graph, truth) = generate(config)?;
    crate::io::write_corpus(&graph, corpus_path, crate::io::CorpusFormat::Jsonl)?;
    let file = std::fs::File::create(manifest_path)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &truth)?;
    Ok((graph, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repair::detect_date_violations;

    #[test]
    fn no_second_advisors_means_forest() {
        let config = GeneratorConfig {
            seed: 5,
            scholars: 500,
            second_advisor_prob: 0.0,
            ..GeneratorConfig::default()
        };
        let (graph, truth) = generate(&config).unwrap();
        for pos in 0..graph.len() {
            assert!(graph.parents_of(pos).len() <= 1);
        }
        // families are exactly the planted trees
        let partition = {
            let sng = crate::families::condense(&graph);
            let probs = crate::families::sample_cut_probabilities(
                &sng,
                crate::families::SamplingMode::Auto(100),
                0,
            );
            crate::families::resolve_families(&graph, &sng, &probs)
        };
        for pos in 0..graph.len() as u32 {
            if graph.is_isolated(pos as usize) {
                continue;
            }
            let id = graph.scholar(pos as usize).id.0;
            let family = partition.family_of(pos).unwrap();
            let root = graph.scholar(partition.root_of(family) as usize).id.0;
            assert_eq!(root, truth.true_family_root[&id]);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let config = GeneratorConfig {
            seed: 9,
            scholars: 800,
            second_advisor_prob: 0.2,
            missing_year_rate: 0.05,
            date_violation_rate: 0.01,
            ..GeneratorConfig::default()
        };
        let (a, _) = generate(&config).unwrap();
        let (b, _) = generate(&config).unwrap();
        assert!(a.same_corpus(&b));
    }

    #[test]
    fn injected_violations_are_recovered_exactly() {
        let config = GeneratorConfig {
            seed: 31,
            scholars: 4000,
            second_advisor_prob: 0.08,
            date_violation_rate: 0.0032,
            ..GeneratorConfig::default()
        };
        let (graph, truth) = generate(&config).unwrap();
        assert!(!truth.injected_violations.is_empty());
        let found = detect_date_violations(&graph);
        let mut got: Vec<(u64, u64)> = found.edges.iter().map(|&(m, s)| (m.0, s.0)).collect();
        got.sort_unstable();
        assert_eq!(got, truth.injected_violations);
    }

    #[test]
    fn corpora_pass_ingestion_round_trip() {
        let config = GeneratorConfig {
            seed: 77,
            scholars: 300,
            second_advisor_prob: 0.15,
            countries: Some(AttributeModel {
                labels: vec!["us".into(), "de".into(), "fr".into()],
                regimes: vec![AttributeRegime {
                    from_year: 0,
                    weights: vec![3.0, 2.0, 1.0],
                }],
            }),
            disciplines: Some(DisciplineModel::Inherit {
                labels: vec!["algebra".into(), "logic".into()],
                q: 0.5,
            }),
            ..GeneratorConfig::default()
        };
        let dir = tempfile::tempdir().unwrap();
        let corpus = dir.path().join("corpus.jsonl");
        let manifest = dir.path().join("truth.json");
        let (graph, _) = generate_to_files(&config, &corpus, &manifest).unwrap();
        let ingested = crate::io::ingest_corpus(
            &corpus,
            crate::io::CorpusFormat::Jsonl,
            YearBounds::new(config.start_year - 10, config.end_year + 10),
        )
        .unwrap();
        assert!(ingested.graph.same_corpus(&graph));
        assert!(manifest.exists());
    }

    #[test]
    fn blanked_lists_match_missing_fields() {
        let config = GeneratorConfig {
            seed: 13,
            scholars: 2000,
            missing_year_rate: 0.06,
            ..GeneratorConfig::default()
        };
        let (graph, truth) = generate(&config).unwrap();
        let missing: Vec<u64> = graph
            .scholars()
            .iter()
            .filter(|s| s.year.is_none())
            .map(|s| s.id.0)
            .collect();
        assert_eq!(missing, truth.blanked_years);
        let rate = missing.len() as f64 / graph.len() as f64;
        assert!((rate - 0.06).abs() < 0.02, "rate {rate}");
    }

    #[test]
    fn invalid_config_is_rejected() {
        let config = GeneratorConfig {
            second_advisor_prob: 1.5,
            ..GeneratorConfig::default()
        };
        assert!(matches!(generate(&config), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn years_respect_cohort_ordering() {
        let config = GeneratorConfig {
            seed: 21,
            scholars: 1500,
            second_advisor_prob: 0.3,
            ..GeneratorConfig::default()
        };
        let (graph, _) = generate(&config).unwrap();
        for (mentor, student) in graph.edge_endpoints() {
            assert!(mentor.year.unwrap() < student.year.unwrap());
        }
    }
}
