//! Stochastic, self-consistent repair of defense years.
//!
//! The corpus contains edges whose reported years run backwards
//! (`year(mentor) > year(student)`) and scholars with no year at all. Both
//! are fixed from the genealogical structure itself: the empirical
//! distribution of mentor-student year gaps is learned from the clean part
//! of the corpus, and unresolved nodes are assigned years drawn from that
//! distribution restricted to the interval their dated neighbours allow.
//!
//! The sweep runs over nodes in topological order and repeats until a full
//! pass assigns nothing, so each assignment respects every year fixed
//! before it. Original years that satisfy all their edges are never
//! touched; a minimal set of violation endpoints is re-sampled instead.

use rand::Rng;

use crate::graph::GenealogyGraph;
use crate::scholar::{ScholarId, YearProvenance};
use crate::seeding;
use crate::{Error, Result};

/// Empirical year-gap histograms learned from pairs where both years are
/// `original` and consistent.
#[derive(Debug, Clone)]
pub struct GapModel {
    /// `counts[g]` = occurrences of `year(student) - year(mentor) = g`, g >= 1.
    mentor_student: Vec<u64>,
    /// Absolute year differences between students of the same mentor.
    sibling: Vec<u64>,
}

impl GapModel {
    /// Learns both gap histograms from the graph.
    pub fn fit(graph: &GenealogyGraph) -> Result<GapModel> {
        let mut mentor_student: Vec<u64> = Vec::new();
        for (mentor, student) in graph.edge_endpoints() {
            if mentor.year_provenance != YearProvenance::Original
                || student.year_provenance != YearProvenance::Original
            {
                continue;
            }
            if let (Some(my), Some(sy)) = (mentor.year, student.year) {
                if sy > my {
                    let gap = (sy - my) as usize;
                    if mentor_student.len() <= gap {
                        mentor_student.resize(gap + 1, 0);
                    }
                    mentor_student[gap] += 1;
                }
            }
        }
        if mentor_student.iter().sum::<u64>() == 0 {
            return Err(Error::EmptyGapModel);
        }

        let mut sibling: Vec<u64> = Vec::new();
        for pos in 0..graph.len() {
            let years: Vec<i32> = graph
                .children_of(pos)
                .iter()
                .map(|&c| graph.scholar(c as usize))
                .filter(|s| s.year_provenance == YearProvenance::Original)
                .filter_map(|s| s.year)
                .collect();
            for i in 0..years.len() {
                for j in i + 1..years.len() {
                    let gap = (years[i] - years[j]).unsigned_abs() as usize;
                    if sibling.len() <= gap {
                        sibling.resize(gap + 1, 0);
                    }
                    sibling[gap] += 1;
                }
            }
        }
        Ok(GapModel {
            mentor_student,
            sibling,
        })
    }

    /// Median mentor-student gap; the fallback offset when sampling is
    /// impossible.
    pub fn median_gap(&self) -> i32 {
        let total: u64 = self.mentor_student.iter().sum();
        let mut acc = 0u64;
        for (gap, &count) in self.mentor_student.iter().enumerate() {
            acc += count;
            if acc * 2 >= total {
                return gap as i32;
            }
        }
        1
    }

    pub fn sibling_histogram(&self) -> &[u64] {
        &self.sibling
    }

    /// Draws a mentor-student gap restricted to `[lo, hi]`; `None` when the
    /// restricted histogram is empty.
    fn sample_gap(&self, lo: i32, hi: i32, rng: &mut impl Rng) -> Option<i32> {
        let lo = lo.max(1) as usize;
        if hi < lo as i32 {
            return None;
        }
        let hi = (hi as usize).min(self.mentor_student.len().saturating_sub(1));
        if hi < lo {
            return None;
        }
        let total: u64 = self.mentor_student[lo..=hi].iter().sum();
        if total == 0 {
            return None;
        }
        let mut target = rng.random_range(0..total);
        for gap in lo..=hi {
            let c = self.mentor_student[gap];
            if target < c {
                return Some(gap as i32);
            }
            target -= c;
        }
        unreachable!("target < total")
    }
}

/// Backwards edges found in a graph.
#[derive(Debug, Clone)]
pub struct Violations {
    /// (mentor, student) id pairs with `year(mentor) > year(student)`.
    pub edges: Vec<(ScholarId, ScholarId)>,
    /// Edges where both endpoints carry a year.
    pub dated_edges: usize,
}

impl Violations {
    /// Violating fraction of dated edges.
    pub fn rate(&self) -> f64 {
        if self.dated_edges == 0 {
            0.0
        } else {
            self.edges.len() as f64 / self.dated_edges as f64
        }
    }
}

/// Lists every edge with both years present and `year(mentor) >
/// year(student)`. Equal years are consistent: the inequality is strict.
pub fn detect_date_violations(graph: &GenealogyGraph) -> Violations {
    let mut edges = Vec::new();
    let mut dated_edges = 0usize;
    for (mentor, student) in graph.edge_endpoints() {
        if let (Some(my), Some(sy)) = (mentor.year, student.year) {
            dated_edges += 1;
            if my > sy {
                edges.push((mentor.id, student.id));
            }
        }
    }
    Violations { edges, dated_edges }
}

/// Outcome of a [`repair_dates`] run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DateRepairReport {
    pub violations_before: usize,
    pub repaired: usize,
    pub imputed: usize,
    /// Nodes that could not be assigned a year (no dated constraint
    /// reachable, or contradictory dated neighbours).
    pub unresolved: Vec<ScholarId>,
    pub passes: usize,
    pub converged: bool,
}

/// Replaces every missing or violation-implicated year so that all edges
/// with two dated endpoints satisfy `year(student) > year(mentor)`.
///
/// Nodes to re-solve are the year-less scholars plus a greedy cover of the
/// violating edges (the endpoint touching the most violations, ties to the
/// smaller id). Each sweep visits unresolved nodes in topological order and
/// assigns a year drawn from `model` restricted to the interval spanned by
/// already-dated parents and children; sweeps repeat until nothing changes
/// or `max_iter` is hit. Deterministic for a fixed seed, and a second run
/// with the same seed is a no-op.
pub fn repair_dates(
    graph: &GenealogyGraph,
    model: &GapModel,
    seed: u64,
    max_iter: usize,
) -> (GenealogyGraph, DateRepairReport) {
    let n = graph.len();
    let mut rng = seeding::rng(seed);

    // Working year of every node, None = to solve.
    let mut years: Vec<Option<i32>> = graph.scholars().iter().map(|s| s.year).collect();
    let mut provenance: Vec<YearProvenance> = graph
        .scholars()
        .iter()
        .map(|s| s.year_provenance)
        .collect();
    let had_year: Vec<bool> = years.iter().map(|y| y.is_some()).collect();

    // Greedy cover of violating edges: repeatedly blank the node incident
    // to the most uncovered violations.
    let violations = detect_date_violations(graph);
    let violations_before = violations.edges.len();
    let mut open: Vec<(usize, usize)> = violations
        .edges
        .iter()
        .map(|&(m, s)| {
            (
                graph.position(m).expect("violation endpoint exists"),
                graph.position(s).expect("violation endpoint exists"),
            )
        })
        .collect();
    while !open.is_empty() {
        let mut load: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        for &(m, s) in &open {
            *load.entry(m).or_default() += 1;
            *load.entry(s).or_default() += 1;
        }
        let (&worst, _) = load
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .expect("open violations have endpoints");
        years[worst] = None;
        open.retain(|&(m, s)| m != worst && s != worst);
    }

    let order = graph.topo_order();
    let mut passes = 0usize;
    let mut converged = false;
    let mut repaired = 0usize;
    let mut imputed = 0usize;
    while passes < max_iter {
        passes += 1;
        let mut assigned = 0usize;
        for &pos in &order {
            if years[pos].is_some() {
                continue;
            }
            // Feasible interval from dated neighbours.
            let lo = graph
                .parents_of(pos)
                .iter()
                .filter_map(|&p| years[p as usize])
                .max()
                .map(|y| y + 1);
            let hi = graph
                .children_of(pos)
                .iter()
                .filter_map(|&c| years[c as usize])
                .min()
                .map(|y| y - 1);
            let year = match (lo, hi) {
                (None, None) => continue, // no constraint yet; retry next pass
                (Some(lo), Some(hi)) if lo > hi => continue, // contradictory neighbours
                (Some(lo), hi) => {
                    let base = lo - 1; // latest dated parent
                    let cap = hi.map(|h| h - base).unwrap_or(i32::MAX);
                    match model.sample_gap(1, cap, &mut rng) {
                        Some(gap) => base + gap,
                        // restricted histogram empty: hi is finite here,
                        // fall back to the interval midpoint
                        None => lo + (hi.expect("empty restriction implies finite hi") - lo) / 2,
                    }
                }
                (None, Some(hi)) => {
                    let base = hi + 1; // earliest dated child
                    match model.sample_gap(1, i32::MAX, &mut rng) {
                        Some(gap) => base - gap,
                        None => base - model.median_gap().max(1),
                    }
                }
            };
            years[pos] = Some(year);
            provenance[pos] = if had_year[pos] {
                repaired += 1;
                YearProvenance::Repaired
            } else {
                imputed += 1;
                YearProvenance::Imputed
            };
            assigned += 1;
        }
        if assigned == 0 {
            converged = true;
            break;
        }
    }

    let unresolved: Vec<ScholarId> = (0..n)
        .filter(|&p| years[p].is_none())
        .map(|p| graph.scholar(p).id)
        .collect();
    // Unresolved nodes keep what they had; covered-but-unassigned originals
    // fall back to their original year (still violating, still reported).
    let repaired_graph = {
        let mut pos = 0usize;
        graph.map_scholars(|s| {
            let mut out = s.clone();
            if let Some(y) = years[pos] {
                out.year = Some(y);
                out.year_provenance = provenance[pos];
            }
            pos += 1;
            out
        })
    };
    let report = DateRepairReport {
        violations_before,
        repaired,
        imputed,
        unresolved,
        passes,
        converged,
    };
    (repaired_graph, report)
}
