//! Iso-discipline chain statistics.
//!
//! An iso-discipline chain of length `n` is a directed mentor-to-descendant
//! path of `n` edges whose `n + 1` scholars all share one discipline. The
//! conditional probability of extending a chain by one more generation,
//! `P(n+1 | n)`, measures how much disciplinary memory the genealogy has:
//! flat in `n` means students inherit independently, growing in `n` marks
//! "schools" that keep a tradition alive. Chains run over the full advisor
//! DAG; multi-advisor students can extend a chain through any advisor.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::GenealogyGraph;
use crate::{Error, Result};

/// How `P(n+1 | n)` is derived from the counts for `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainMode {
    /// Fraction of length-`n` chains that are the prefix of at least one
    /// length-`n+1` chain (any same-discipline child continues them).
    Prefix,
    /// Raw path-count ratio `C(n+1) / C(n)`; sensitive to fan-out.
    PathCount,
}

impl std::str::FromStr for ChainMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(ChainMode::Prefix),
            "pathcount" => Ok(ChainMode::PathCount),
            other => Err(format!("unknown chain mode `{other}`")),
        }
    }
}

/// Counts for one chain length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainRow {
    pub length: usize,
    /// Number of iso-discipline paths of this length.
    pub count: u128,
    /// Paths of this length extendable by one more iso generation.
    pub extended: u128,
}

/// Chain counts, aggregated and (optionally) per discipline.
#[derive(Debug, Clone, Serialize)]
pub struct ChainCensus {
    /// Rows for n = 0.. while counts stay positive. Row 0 counts the
    /// disciplined scholars themselves.
    pub rows: Vec<ChainRow>,
    pub per_discipline: Option<BTreeMap<String, Vec<ChainRow>>>,
    /// Advisor edges whose endpoints both carry a discipline.
    pub disciplined_edges: u64,
    /// Among those, edges whose endpoints share the discipline.
    pub iso_edges: u64,
    /// Per discipline: (edges whose mentor is in d and student is
    /// disciplined, edges with both endpoints in d).
    pub discipline_edges: BTreeMap<String, (u64, u64)>,
}

impl ChainCensus {
    /// The curve `P(n+1 | n)` for n = 0, 1, 2, ... The first point is the
    /// probability that a student keeps the mentor's discipline (iso edges
    /// over disciplined edges); later points follow `mode`.
    pub fn probabilities(&self, mode: ChainMode) -> Vec<(usize, f64)> {
        Self::curve(&self.rows, self.disciplined_edges, self.iso_edges, mode)
    }

    /// Per-discipline curves; the n = 0 point of discipline `d` is the
    /// fraction of `d`-mentor edges (with a disciplined student) that stay
    /// in `d`.
    pub fn probabilities_per_discipline(&self, mode: ChainMode) -> BTreeMap<String, Vec<(usize, f64)>> {
        let Some(per) = &self.per_discipline else {
            return BTreeMap::new();
        };
        per.iter()
            .map(|(d, rows)| {
                let (denom, iso) = self.discipline_edges.get(d).copied().unwrap_or((0, 0));
                (d.clone(), Self::curve(rows, denom, iso, mode))
            })
            .collect()
    }

    fn curve(rows: &[ChainRow], edge_denom: u64, edge_iso: u64, mode: ChainMode) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        if edge_denom > 0 {
            out.push((0, edge_iso as f64 / edge_denom as f64));
        }
        for (i, row) in rows.iter().enumerate().skip(1) {
            if row.count == 0 {
                break;
            }
            let p = match mode {
                ChainMode::Prefix => row.extended as f64 / row.count as f64,
                ChainMode::PathCount => {
                    let next = rows.get(i + 1).map(|r| r.count).unwrap_or(0);
                    next as f64 / row.count as f64
                }
            };
            out.push((row.length, p));
        }
        out
    }
}

/// Counts every iso-discipline path in the full advisor DAG by dynamic
/// programming over path endpoints, one level per chain length, until the
/// counts die out. Errors when no scholar carries a discipline.
pub fn chain_census(graph: &GenealogyGraph, per_discipline: bool) -> Result<ChainCensus> {
    let n = graph.len();
    let discipline_id: Vec<Option<u32>> = {
        let mut labels: Vec<&str> = graph
            .scholars()
            .iter()
            .filter_map(|s| s.discipline.as_deref())
            .collect();
        labels.sort_unstable();
        labels.dedup();
        let index: BTreeMap<&str, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as u32))
            .collect();
        graph
            .scholars()
            .iter()
            .map(|s| s.discipline.as_deref().map(|d| index[d]))
            .collect()
    };
    if discipline_id.iter().all(|d| d.is_none()) {
        return Err(Error::NoDisciplines);
    }
    let labels: Vec<String> = {
        let mut l: Vec<String> = graph
            .scholars()
            .iter()
            .filter_map(|s| s.discipline.clone())
            .collect();
        l.sort_unstable();
        l.dedup();
        l
    };

    // same-discipline parents per node, and whether a node has a
    // same-discipline child (the extension test)
    let mut iso_parents: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut has_iso_child = vec![false; n];
    let mut disciplined_edges = 0u64;
    let mut iso_edges = 0u64;
    let mut discipline_edges: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for &(mentor, student) in graph.edges() {
        let (Some(dm), Some(ds)) = (
            discipline_id[mentor as usize],
            discipline_id[student as usize],
        ) else {
            continue;
        };
        disciplined_edges += 1;
        let entry = discipline_edges
            .entry(labels[dm as usize].clone())
            .or_insert((0, 0));
        entry.0 += 1;
        if dm == ds {
            iso_edges += 1;
            entry.1 += 1;
            iso_parents[student as usize].push(mentor);
            has_iso_child[mentor as usize] = true;
        }
    }

    // level 0: the disciplined scholars themselves
    let mut up: Vec<u128> = discipline_id
        .iter()
        .map(|d| u128::from(d.is_some()))
        .collect();
    let tally = |up: &[u128], length: usize| -> (ChainRow, BTreeMap<u32, ChainRow>) {
        let mut total = ChainRow {
            length,
            count: 0,
            extended: 0,
        };
        let mut per: BTreeMap<u32, ChainRow> = BTreeMap::new();
        for pos in 0..up.len() {
            if up[pos] == 0 {
                continue;
            }
            let d = discipline_id[pos].expect("positive count implies a discipline");
            let row = per.entry(d).or_insert(ChainRow {
                length,
                count: 0,
                extended: 0,
            });
            total.count += up[pos];
            row.count += up[pos];
            if has_iso_child[pos] {
                total.extended += up[pos];
                row.extended += up[pos];
            }
        }
        (total, per)
    };

    let mut rows = Vec::new();
    let mut per_rows: BTreeMap<String, Vec<ChainRow>> = BTreeMap::new();
    let mut length = 0usize;
    loop {
        let (total, per) = tally(&up, length);
        if total.count == 0 {
            break;
        }
        rows.push(total);
        if per_discipline {
            for (d, row) in per {
                per_rows
                    .entry(labels[d as usize].clone())
                    .or_default()
                    .push(row);
            }
        }
        // next level: extend every path by one same-discipline edge
        let mut next = vec![0u128; n];
        let mut any = false;
        for pos in 0..n {
            let mut acc = 0u128;
            for &p in &iso_parents[pos] {
                acc += up[p as usize];
            }
            if acc > 0 {
                any = true;
            }
            next[pos] = acc;
        }
        up = next;
        length += 1;
        if !any {
            // close with the empty level so C(max+1) = 0 is visible
            break;
        }
    }

    Ok(ChainCensus {
        rows,
        per_discipline: per_discipline.then_some(per_rows),
        disciplined_edges,
        iso_edges,
        discipline_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::scholar::{Scholar, ScholarId};

    fn graph_from(records: Vec<(u64, Option<&str>)>, edges: &[(u64, u64)]) -> GenealogyGraph {
        let mut b = GraphBuilder::new();
        for (id, disc) in records {
            let mut s = Scholar::new(ScholarId(id), format!("s{id}"));
            if let Some(d) = disc {
                s = s.with_discipline(d);
            }
            b.add_scholar(s).unwrap();
        }
        for &(m, s) in edges {
            b.add_edge(ScholarId(m), ScholarId(s)).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn four_scholar_chain_counts_by_hand() {
        let g = graph_from(
            (1..=4).map(|id| (id, Some("geometry"))).collect(),
            &[(1, 2), (2, 3), (3, 4)],
        );
        let census = chain_census(&g, false).unwrap();
        // C(1) = 3, C(2) = 2, C(3) = 1
        assert_eq!(census.rows[1].count, 3);
        assert_eq!(census.rows[2].count, 2);
        assert_eq!(census.rows[3].count, 1);
        assert_eq!(census.rows.len(), 4);
        // P(2|1) = 2/3: of the three length-1 chains only (1,2) and (2,3)
        // extend; (3,4) dead-ends.
        let probs = census.probabilities(ChainMode::Prefix);
        assert_eq!(probs[0], (0, 1.0));
        assert!((probs[1].1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cross_discipline_edge_feeds_only_the_denominator() {
        let g = graph_from(
            vec![(1, Some("algebra")), (2, Some("logic"))],
            &[(1, 2)],
        );
        let census = chain_census(&g, false).unwrap();
        assert_eq!(census.disciplined_edges, 1);
        assert_eq!(census.iso_edges, 0);
        assert_eq!(census.rows.len(), 1); // no chains beyond length 0
        let probs = census.probabilities(ChainMode::Prefix);
        assert_eq!(probs, vec![(0, 0.0)]);
    }

    #[test]
    fn undisciplined_endpoint_is_ignored() {
        let g = graph_from(
            vec![(1, Some("algebra")), (2, None), (3, Some("algebra"))],
            &[(1, 2), (2, 3)],
        );
        let census = chain_census(&g, false).unwrap();
        assert_eq!(census.disciplined_edges, 0);
        assert_eq!(census.rows[0].count, 2);
    }

    #[test]
    fn no_disciplines_is_an_error() {
        let g = graph_from(vec![(1, None), (2, None)], &[(1, 2)]);
        assert!(matches!(chain_census(&g, false), Err(Error::NoDisciplines)));
    }

    #[test]
    fn multi_advisor_paths_count_through_both_parents() {
        // diamond: 1 -> 2, 1 -> 3, 2 -> 4, 3 -> 4, all one discipline
        let g = graph_from(
            (1..=4).map(|id| (id, Some("x"))).collect(),
            &[(1, 2), (1, 3), (2, 4), (3, 4)],
        );
        let census = chain_census(&g, false).unwrap();
        assert_eq!(census.rows[1].count, 4);
        assert_eq!(census.rows[2].count, 2); // 1-2-4 and 1-3-4
    }

    #[test]
    fn aggregate_equals_sum_of_disciplines() {
        let g = graph_from(
            vec![
                (1, Some("a")),
                (2, Some("a")),
                (3, Some("a")),
                (4, Some("b")),
                (5, Some("b")),
                (6, Some("a")),
            ],
            &[(1, 2), (2, 3), (4, 5), (5, 6), (3, 6)],
        );
        let census = chain_census(&g, true).unwrap();
        let per = census.per_discipline.as_ref().unwrap();
        for (i, row) in census.rows.iter().enumerate() {
            let sum: u128 = per
                .values()
                .filter_map(|rows| rows.get(i))
                .filter(|r| r.length == row.length)
                .map(|r| r.count)
                .sum();
            assert_eq!(sum, row.count, "level {i}");
        }
    }

    #[test]
    fn census_adds_over_disjoint_unions() {
        let half1 = graph_from(
            (1..=3).map(|id| (id, Some("a"))).collect(),
            &[(1, 2), (2, 3)],
        );
        let half2 = graph_from(
            (1..=2).map(|id| (id, Some("a"))).collect(),
            &[(1, 2)],
        );
        let joint = graph_from(
            (1..=5).map(|id| (id, Some("a"))).collect(),
            &[(1, 2), (2, 3), (4, 5)],
        );
        let c1 = chain_census(&half1, false).unwrap();
        let c2 = chain_census(&half2, false).unwrap();
        let cj = chain_census(&joint, false).unwrap();
        for (i, row) in cj.rows.iter().enumerate() {
            let a = c1.rows.get(i).map(|r| r.count).unwrap_or(0);
            let b = c2.rows.get(i).map(|r| r.count).unwrap_or(0);
            assert_eq!(row.count, a + b);
        }
    }

    #[test]
    fn deterministic_inheritance_reduces_to_branching() {
        // binary tree of one discipline: P(n+1|n) in prefix mode equals the
        // probability that a depth-n path end has any child
        let mut records = vec![(1, Some("x"))];
        let mut edges = Vec::new();
        for parent in 1..=3u64 {
            for child in [2 * parent, 2 * parent + 1] {
                records.push((child, Some("x")));
                edges.push((parent, child));
            }
        }
        let g = graph_from(records, &edges);
        let census = chain_census(&g, false).unwrap();
        let probs = census.probabilities(ChainMode::Prefix);
        // levels: 7 nodes, depth-1 chains: 6 (4 of them end at leaves'
        // parents? nodes 2,3 have children; 4..7 are leaves)
        // length-1 chains: (1,2),(1,3),(2,4),(2,5),(3,6),(3,7); extendable:
        // the two ending at nodes 2 and 3 -> P(2|1) = 2/6
        assert!((probs[1].1 - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn pathcount_mode_uses_raw_ratios() {
        let g = graph_from(
            (1..=4).map(|id| (id, Some("x"))).collect(),
            &[(1, 2), (2, 3), (2, 4)],
        );
        let census = chain_census(&g, false).unwrap();
        // C(1) = 3, C(2) = 2
        let probs = census.probabilities(ChainMode::PathCount);
        assert!((probs[1].1 - 2.0 / 3.0).abs() < 1e-12);
    }
}
