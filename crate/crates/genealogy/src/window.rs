//! Time windows and attribute abundance counts per window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GenealogyGraph;

/// Which per-scholar label a table or network is built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attribute {
    Country,
    Discipline,
    University,
}

impl Attribute {
    pub fn of<'a>(&self, scholar: &'a crate::scholar::Scholar) -> Option<&'a str> {
        match self {
            Attribute::Country => scholar.country.as_deref(),
            Attribute::Discipline => scholar.discipline.as_deref(),
            Attribute::University => scholar.university.as_deref(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Attribute::Country => "country",
            Attribute::Discipline => "discipline",
            Attribute::University => "university",
        }
    }
}

impl std::str::FromStr for Attribute {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "country" => Ok(Attribute::Country),
            "discipline" => Ok(Attribute::Discipline),
            "university" => Ok(Attribute::University),
            other => Err(format!("unknown attribute `{other}`")),
        }
    }
}

/// Half-open bins `[t, t + bin_width)` partitioning `[start_year, end_year]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindowing {
    pub start_year: i32,
    pub end_year: i32,
    pub bin_width: i32,
}

impl TimeWindowing {
    pub fn new(start_year: i32, end_year: i32, bin_width: i32) -> Result<Self> {
        if bin_width < 1 {
            return Err(Error::InvalidWindowing(format!(
                "bin width must be >= 1, got {bin_width}"
            )));
        }
        if end_year < start_year {
            return Err(Error::InvalidWindowing(format!(
                "end year {end_year} before start year {start_year}"
            )));
        }
        Ok(TimeWindowing {
            start_year,
            end_year,
            bin_width,
        })
    }

    /// Windowing covering every dated scholar in the graph, with the start
    /// aligned down to a `bin_width` boundary (so decades start at years
    /// divisible by ten).
    pub fn covering(graph: &GenealogyGraph, bin_width: i32) -> Result<Self> {
        let years: Vec<i32> = graph.scholars().iter().filter_map(|s| s.year).collect();
        let (&min, &max) = match (years.iter().min(), years.iter().max()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidWindowing(
                    "no dated scholars to derive a windowing from".into(),
                ))
            }
        };
        let start = min.div_euclid(bin_width) * bin_width;
        TimeWindowing::new(start, max, bin_width)
    }

    pub fn bin_count(&self) -> usize {
        let span = (self.end_year - self.start_year) as usize + 1;
        span.div_ceil(self.bin_width as usize)
    }

    /// Bin index for a year, or `None` outside the covered range.
    pub fn bin_of(&self, year: i32) -> Option<usize> {
        if year < self.start_year || year > self.end_year {
            return None;
        }
        Some(((year - self.start_year) / self.bin_width) as usize)
    }

    /// First year of bin `index`.
    pub fn bin_start(&self, index: usize) -> i32 {
        self.start_year + index as i32 * self.bin_width
    }

    pub fn bin_starts(&self) -> Vec<i32> {
        (0..self.bin_count()).map(|i| self.bin_start(i)).collect()
    }
}

/// `N_I(t)`: scholars per attribute value and window.
///
/// `attributed_totals[t]` is the number of scholars with both the attribute
/// and a year in window `t` (the profile denominator); `dated_totals[t]`
/// additionally includes scholars whose attribute is missing. Scholars
/// contributing to no cell are tallied in `excluded`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbundanceTable {
    pub attribute: Attribute,
    pub windows: TimeWindowing,
    /// Sorted attribute values present in the table.
    pub labels: Vec<String>,
    /// `counts[label][bin]`.
    pub counts: Vec<Vec<u64>>,
    pub attributed_totals: Vec<u64>,
    pub dated_totals: Vec<u64>,
    pub excluded: u64,
}

impl AbundanceTable {
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn count(&self, label: &str, bin: usize) -> u64 {
        self.label_index(label)
            .map(|i| self.counts[i][bin])
            .unwrap_or(0)
    }

    /// Top-`k` labels per window by count (ties broken by label), skipping
    /// zero-count labels. One ranking per bin, possibly shorter than `k`.
    pub fn rank_windows(&self, k: usize) -> Vec<crate::rankings::RankedList> {
        (0..self.windows.bin_count())
            .map(|bin| {
                let mut entries: Vec<(&str, u64)> = self
                    .labels
                    .iter()
                    .zip(&self.counts)
                    .map(|(l, row)| (l.as_str(), row[bin]))
                    .filter(|&(_, c)| c > 0)
                    .collect();
                entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
                entries.truncate(k);
                crate::rankings::RankedList::new(
                    bin,
                    entries.into_iter().map(|(l, _)| l.to_string()).collect(),
                )
                .expect("ranked labels are distinct")
            })
            .collect()
    }
}

/// Counts scholars per (attribute value, window). Scholars with a missing
/// attribute or no year inside the windowing are excluded from the cells
/// and reported in `excluded`.
pub fn window_counts(
    graph: &GenealogyGraph,
    attribute: Attribute,
    windows: TimeWindowing,
) -> AbundanceTable {
    let bins = windows.bin_count();
    let mut labels: Vec<String> = graph
        .scholars()
        .iter()
        .filter_map(|s| attribute.of(s))
        .map(str::to_owned)
        .collect();
    labels.sort_unstable();
    labels.dedup();

    let mut counts = vec![vec![0u64; bins]; labels.len()];
    let mut attributed_totals = vec![0u64; bins];
    let mut dated_totals = vec![0u64; bins];
    let mut excluded = 0u64;

    for scholar in graph.scholars() {
        let bin = scholar.year.and_then(|y| windows.bin_of(y));
        let label = attribute.of(scholar);
        match (bin, label) {
            (Some(bin), Some(label)) => {
                let li = labels
                    .binary_search_by(|l| l.as_str().cmp(label))
                    .expect("label collected above");
                counts[li][bin] += 1;
                attributed_totals[bin] += 1;
                dated_totals[bin] += 1;
            }
            (Some(bin), None) => {
                dated_totals[bin] += 1;
                excluded += 1;
            }
            (None, _) => excluded += 1,
        }
    }

    AbundanceTable {
        attribute,
        windows,
        labels,
        counts,
        attributed_totals,
        dated_totals,
        excluded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::scholar::{Scholar, ScholarId};

    fn graph_of(scholars: Vec<Scholar>) -> GenealogyGraph {
        let mut b = GraphBuilder::new();
        for s in scholars {
            b.add_scholar(s).unwrap();
        }
        b.build().unwrap()
    }

    fn s(id: u64, year: Option<i32>, country: Option<&str>) -> Scholar {
        let mut sc = Scholar::new(ScholarId(id), format!("s{id}"));
        sc.year = year;
        sc.country = country.map(|c| c.to_lowercase());
        sc
    }

    #[test]
    fn bins_are_half_open() {
        let w = TimeWindowing::new(1900, 1929, 10).unwrap();
        assert_eq!(w.bin_count(), 3);
        assert_eq!(w.bin_of(1900), Some(0));
        assert_eq!(w.bin_of(1909), Some(0));
        assert_eq!(w.bin_of(1910), Some(1));
        assert_eq!(w.bin_of(1929), Some(2));
        assert_eq!(w.bin_of(1930), None);
        assert_eq!(w.bin_of(1899), None);
    }

    #[test]
    fn covering_aligns_start_to_bin_boundary() {
        let g = graph_of(vec![s(1, Some(1905), None), s(2, Some(1931), None)]);
        let w = TimeWindowing::covering(&g, 10).unwrap();
        assert_eq!(w.start_year, 1900);
        assert_eq!(w.bin_count(), 4);
    }

    #[test]
    fn counts_two_scholars_in_same_decade() {
        let g = graph_of(vec![
            s(1, Some(1905), Some("DE")),
            s(2, Some(1907), Some("DE")),
        ]);
        let w = TimeWindowing::new(1900, 1909, 10).unwrap();
        let t = window_counts(&g, Attribute::Country, w);
        assert_eq!(t.count("de", 0), 2);
        assert_eq!(t.excluded, 0);
    }

    #[test]
    fn missing_year_goes_to_excluded() {
        let g = graph_of(vec![s(1, None, Some("DE")), s(2, Some(1905), None)]);
        let w = TimeWindowing::new(1900, 1909, 10).unwrap();
        let t = window_counts(&g, Attribute::Country, w);
        assert_eq!(t.excluded, 2);
        assert_eq!(t.attributed_totals[0], 0);
        assert_eq!(t.dated_totals[0], 1);
    }

    #[test]
    fn row_sums_match_brute_force_recount() {
        // Ten scholars across three decades, a few with gaps.
        let spec: [(Option<i32>, Option<&str>); 10] = [
            (Some(1900), Some("de")),
            (Some(1901), Some("fr")),
            (Some(1912), Some("de")),
            (Some(1915), None),
            (Some(1918), Some("fr")),
            (Some(1921), Some("uk")),
            (Some(1925), Some("de")),
            (None, Some("uk")),
            (Some(1929), Some("uk")),
            (Some(1904), Some("uk")),
        ];
        let g = graph_of(
            spec.iter()
                .enumerate()
                .map(|(i, &(y, c))| s(i as u64 + 1, y, c))
                .collect(),
        );
        let w = TimeWindowing::new(1900, 1929, 10).unwrap();
        let t = window_counts(&g, Attribute::Country, w);

        // Independent recount straight from the fixture.
        let mut expected_total = 0u64;
        for &(y, c) in &spec {
            if let (Some(y), Some(_)) = (y, c) {
                if (1900..=1929).contains(&y) {
                    expected_total += 1;
                }
            }
        }
        let table_total: u64 = t.counts.iter().flatten().sum();
        assert_eq!(table_total, expected_total);
        for bin in 0..w.bin_count() {
            let col: u64 = t.counts.iter().map(|row| row[bin]).sum();
            assert_eq!(col, t.attributed_totals[bin]);
            assert!(col <= t.dated_totals[bin]);
        }
        assert_eq!(t.excluded, 2);
    }

    #[test]
    fn rank_windows_orders_by_count_then_label() {
        let g = graph_of(vec![
            s(1, Some(1900), Some("b")),
            s(2, Some(1901), Some("b")),
            s(3, Some(1902), Some("a")),
            s(4, Some(1903), Some("c")),
        ]);
        let w = TimeWindowing::new(1900, 1909, 10).unwrap();
        let t = window_counts(&g, Attribute::Country, w);
        let ranked = t.rank_windows(2);
        assert_eq!(ranked[0].labels(), &["b".to_string(), "a".to_string()]);
    }
}
