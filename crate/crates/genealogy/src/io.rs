//! Corpus file formats.
//!
//! jsonl: one object per line with fields `id` (required), `name`, `year`,
//! `country`, `university`, `discipline`, `title` and `advisors` (array of
//! ids). csv: the same columns with `advisors` as a `;`-separated list.
//! Attribute labels are trimmed and case-folded at ingestion; empty labels
//! count as missing. All emitted tables are UTF-8 with `\n` line endings.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GenealogyGraph, GraphBuilder, YearBounds};
use crate::scholar::{normalize_opt, Scholar, ScholarId};

/// Supported corpus serializations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// Guess from a file extension; defaults to jsonl.
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

impl std::str::FromStr for CorpusFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(format!("unknown corpus format `{other}`")),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: u64,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    year: Option<i32>,
    #[serde(default)]
    country: Option<String>,
    #[serde(default)]
    university: Option<String>,
    #[serde(default)]
    discipline: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    advisors: Vec<u64>,
}

#[derive(Debug, Serialize)]
struct RawRecordOut<'a> {
    id: u64,
    name: &'a str,
    year: Option<i32>,
    country: Option<&'a str>,
    university: Option<&'a str>,
    discipline: Option<&'a str>,
    title: Option<&'a str>,
    advisors: &'a [u64],
}

/// Missing-field tallies collected while ingesting.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct IngestReport {
    pub scholars: usize,
    pub edges: usize,
    pub missing_year: usize,
    pub missing_discipline: usize,
    pub missing_country: usize,
    pub missing_university: usize,
    pub missing_title: usize,
    /// Nodes with neither advisors nor students. Retained in the graph but
    /// ignored by the family decomposition.
    pub isolated: usize,
}

/// A validated graph together with its ingestion report.
#[derive(Debug)]
pub struct Ingested {
    pub graph: GenealogyGraph,
    pub report: IngestReport,
}

/// Parses and validates a corpus file. Every provenance field starts out
/// `original`; scholars whose year falls outside `bounds` are rejected.
pub fn ingest_corpus(path: &Path, format: CorpusFormat, bounds: YearBounds) -> Result<Ingested> {
    let records = match format {
        CorpusFormat::Jsonl => read_jsonl(path)?,
        CorpusFormat::Csv => read_csv(path)?,
    };
    ingest_records(records, bounds)
}

fn read_jsonl(path: &Path) -> Result<Vec<RawRecord>> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RawRecord = serde_json::from_str(&line).map_err(|e| Error::Schema {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

fn read_csv(path: &Path) -> Result<Vec<RawRecord>> {
    let mut reader = csv::ReaderBuilder::new().from_path(path)?;
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<CsvRecord>().enumerate() {
        let row = row.map_err(|e| Error::Schema {
            line: i + 2, // header is line 1
            message: e.to_string(),
        })?;
        let advisors = parse_advisor_list(&row.advisors).map_err(|message| Error::Schema {
            line: i + 2,
            message,
        })?;
        records.push(RawRecord {
            id: row.id,
            name: row.name,
            year: row.year,
            country: row.country,
            university: row.university,
            discipline: row.discipline,
            title: row.title,
            advisors,
        });
    }
    Ok(records)
}

#[derive(Debug, Deserialize)]
struct CsvRecord {
    id: u64,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    year: Option<i32>,
    #[serde(default)]
    country: Option<String>,
    #[serde(default)]
    university: Option<String>,
    #[serde(default)]
    discipline: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    advisors: String,
}

fn parse_advisor_list(raw: &str) -> std::result::Result<Vec<u64>, String> {
    raw.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| format!("field `advisors`: invalid id `{s}`"))
        })
        .collect()
}

fn ingest_records(records: Vec<RawRecord>, bounds: YearBounds) -> Result<Ingested> {
    let mut builder = GraphBuilder::with_bounds(bounds);
    let mut report = IngestReport::default();
    let mut edges: Vec<(ScholarId, ScholarId)> = Vec::new();

    for record in records {
        let id = ScholarId(record.id);
        let mut scholar = Scholar::new(id, record.name.unwrap_or_default());
        scholar.year = record.year;
        scholar.country = normalize_opt(record.country);
        scholar.university = normalize_opt(record.university);
        scholar.discipline = normalize_opt(record.discipline);
        scholar.thesis_title = record.title.filter(|t| !t.trim().is_empty());

        report.missing_year += scholar.year.is_none() as usize;
        report.missing_country += scholar.country.is_none() as usize;
        report.missing_university += scholar.university.is_none() as usize;
        report.missing_discipline += scholar.discipline.is_none() as usize;
        report.missing_title += scholar.thesis_title.is_none() as usize;

        for &advisor in &record.advisors {
            edges.push((ScholarId(advisor), id));
        }
        builder.add_scholar(scholar)?;
    }
    for (mentor, student) in edges {
        builder.add_edge(mentor, student)?;
    }
    let graph = builder.build()?;
    report.scholars = graph.len();
    report.edges = graph.edge_count();
    report.isolated = graph.isolated_count();
    if report.isolated > 0 {
        log::warn!(
            "{} isolated scholars (no advisor links); they are kept but skipped by family analysis",
            report.isolated
        );
    }
    Ok(Ingested { graph, report })
}

/// Writes the corpus in a form `ingest_corpus` accepts back. Advisors are
/// listed per student in parent order, so a freshly ingested graph
/// round-trips exactly.
pub fn write_corpus(graph: &GenealogyGraph, path: &Path, format: CorpusFormat) -> Result<()> {
    match format {
        CorpusFormat::Jsonl => write_jsonl(graph, path),
        CorpusFormat::Csv => write_csv(graph, path),
    }
}

fn advisor_ids(graph: &GenealogyGraph, pos: usize) -> Vec<u64> {
    graph
        .parents_of(pos)
        .iter()
        .map(|&p| graph.scholar(p as usize).id.0)
        .collect()
}

fn write_jsonl(graph: &GenealogyGraph, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (pos, s) in graph.scholars().iter().enumerate() {
        let advisors = advisor_ids(graph, pos);
        let record = RawRecordOut {
            id: s.id.0,
            name: &s.name,
            year: s.year,
            country: s.country.as_deref(),
            university: s.university.as_deref(),
            discipline: s.discipline.as_deref(),
            title: s.thesis_title.as_deref(),
            advisors: &advisors,
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn write_csv(graph: &GenealogyGraph, path: &Path) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    writer.write_record([
        "id",
        "name",
        "year",
        "country",
        "university",
        "discipline",
        "title",
        "advisors",
    ])?;
    for (pos, s) in graph.scholars().iter().enumerate() {
        let advisors = advisor_ids(graph, pos)
            .iter()
            .map(|id| id.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writer.write_record([
            s.id.0.to_string(),
            s.name.clone(),
            s.year.map(|y| y.to_string()).unwrap_or_default(),
            s.country.clone().unwrap_or_default(),
            s.university.clone().unwrap_or_default(),
            s.discipline.clone().unwrap_or_default(),
            s.thesis_title.clone().unwrap_or_default(),
            advisors,
        ])?;
    }
    writer.flush()?;
    Ok(())
}
