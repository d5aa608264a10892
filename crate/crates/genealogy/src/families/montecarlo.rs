//! Cut-probability estimation over random single-parent realizations.
//!
//! A realization keeps one uniformly-random parent link per multi-advisor
//! scholar, producing a forest at the super-node level. For every link that
//! the realization removed we record whether its endpoints still land in
//! the same connected component. The fraction of removals that left the
//! pair connected is `p_keep`: high means the link is redundant (safe to
//! cut), low means it is structurally essential.
//!
//! Realizations are independent; each derives its RNG from (seed, index)
//! so the tally is identical whether they run sequentially or in parallel.

use rand::Rng;

use crate::families::condense::SuperNodeGraph;
use crate::par::indexed_fold;
use crate::seeding;

/// How many realizations to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Exhaustive when the realization count fits in 2^16, otherwise
    /// Monte-Carlo at the given sample count.
    Auto(u64),
    MonteCarlo(u64),
    Exhaustive,
}

const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

/// Estimated `p_keep` per ambiguous edge.
#[derive(Debug, Clone)]
pub struct CutProbabilities {
    /// Indexed like `SuperNodeGraph::ambiguous_edges`.
    pub p_keep: Vec<f64>,
    pub realizations: u64,
    pub exhaustive: bool,
}

#[derive(Clone)]
struct Tally {
    /// per ambiguous edge: (times removed, times removed while still connected)
    counts: Vec<(u64, u64)>,
}

impl Tally {
    fn new(edges: usize) -> Self {
        Tally {
            counts: vec![(0, 0); edges],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            a.0 += b.0;
            a.1 += b.1;
        }
        self
    }
}

/// Scratch union-find over the super-nodes incident to ambiguous edges.
struct Scratch {
    /// dense id per touched super-node
    dense: Vec<u32>,
    parent: Vec<u32>,
    /// per site: dense endpoint ids of each candidate (mentor side), plus
    /// the student-side dense id
    sites: Vec<(u32, Vec<(u32, u32)>)>,
}

impl Scratch {
    fn build(sng: &SuperNodeGraph) -> Self {
        let mut dense_of = std::collections::HashMap::new();
        let mut dense = Vec::new();
        let mut intern = |sn: u32| -> u32 {
            *dense_of.entry(sn).or_insert_with(|| {
                dense.push(sn);
                (dense.len() - 1) as u32
            })
        };
        let edges = sng.ambiguous_edges();
        let mut sites = Vec::with_capacity(sng.sites.len());
        for site in &sng.sites {
            let student_sn = sng
                .supernode_of(site.student)
                .expect("ambiguous node is not isolated");
            let student_dense = intern(student_sn);
            let candidates = site
                .candidates
                .iter()
                .map(|&edge_idx| {
                    let (mentor, _) = edges[edge_idx as usize];
                    let mentor_sn = sng.supernode_of(mentor).expect("mentor is not isolated");
                    (edge_idx, intern(mentor_sn))
                })
                .collect();
            sites.push((student_dense, candidates));
        }
        let parent = (0..dense.len() as u32).collect();
        Scratch {
            dense,
            parent,
            sites,
        }
    }

    fn reset(&mut self) {
        for (i, slot) in self.parent.iter_mut().enumerate() {
            *slot = i as u32;
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb as usize] = ra;
        }
    }

    /// Runs one realization given the kept-candidate index per site and
    /// tallies every removed link.
    fn run(&mut self, kept: &[usize], tally: &mut Tally) {
        self.reset();
        // first pass: apply the kept links
        for i in 0..self.sites.len() {
            let student = self.sites[i].0;
            let (_, mentor_dense) = self.sites[i].1[kept[i]];
            self.union(mentor_dense, student);
        }
        // second pass: score the removed links
        for i in 0..self.sites.len() {
            let student = self.sites[i].0;
            for c in 0..self.sites[i].1.len() {
                if c == kept[i] {
                    continue;
                }
                let (edge_idx, mentor_dense) = self.sites[i].1[c];
                let connected = self.find(mentor_dense) == self.find(student);
                let slot = &mut tally.counts[edge_idx as usize];
                slot.0 += 1;
                slot.1 += connected as u64;
            }
        }
    }
}

/// Estimates `p_keep` for every ambiguous edge. Deterministic for a fixed
/// seed regardless of thread count. Links that were never removed (possible
/// only in tiny Monte-Carlo runs) report `p_keep = 0`.
pub fn sample_cut_probabilities(
    sng: &SuperNodeGraph,
    mode: SamplingMode,
    seed: u64,
) -> CutProbabilities {
    let edge_count = sng.ambiguous_edges().len();
    let space = sng.realization_count();
    let (exhaustive, realizations) = match mode {
        SamplingMode::Exhaustive => (true, space.min(EXHAUSTIVE_LIMIT) as u64),
        SamplingMode::MonteCarlo(samples) => (false, samples.max(1)),
        SamplingMode::Auto(samples) => {
            if space <= EXHAUSTIVE_LIMIT {
                (true, space as u64)
            } else {
                (false, samples.max(1))
            }
        }
    };

    let radices: Vec<usize> = sng.sites.iter().map(|s| s.candidates.len()).collect();
    let tally = indexed_fold(
        realizations as usize,
        || {
            (
                Scratch::build(sng),
                Tally::new(edge_count),
                vec![0usize; radices.len()],
            )
        },
        |(mut scratch, mut tally, mut choices), index| {
            if exhaustive {
                // mixed-radix digits of `index` select the kept candidates
                let mut rest = index;
                for (slot, &d) in choices.iter_mut().zip(&radices) {
                    *slot = rest % d;
                    rest /= d;
                }
            } else {
                let mut rng = seeding::child_rng(seed, index as u64);
                for (slot, &d) in choices.iter_mut().zip(&radices) {
                    *slot = rng.random_range(0..d);
                }
            }
            scratch.run(&choices, &mut tally);
            (scratch, tally, choices)
        },
        |(scratch, a, choices), (_, b, _)| (scratch, a.merge(b), choices),
    )
    .1;

    let p_keep = tally
        .counts
        .iter()
        .map(|&(removed, connected)| {
            if removed == 0 {
                0.0
            } else {
                connected as f64 / removed as f64
            }
        })
        .collect();
    CutProbabilities {
        p_keep,
        realizations,
        exhaustive,
    }
}

// Expose the scratch universe size for the benches.
impl SuperNodeGraph {
    /// Super-nodes touched by at least one ambiguous edge.
    pub fn active_supernode_count(&self) -> usize {
        Scratch::build(self).dense.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::condense::condense;
    use crate::graph::{GenealogyGraph, GraphBuilder};
    use crate::scholar::{Scholar, ScholarId};
    use rand::Rng;

    fn graph_from(n: u64, edges: &[(u64, u64)]) -> GenealogyGraph {
        let mut b = GraphBuilder::new();
        for id in 1..=n {
            b.add_scholar(Scholar::new(ScholarId(id), format!("s{id}")))
                .unwrap();
        }
        for &(m, s) in edges {
            b.add_edge(ScholarId(m), ScholarId(s)).unwrap();
        }
        b.build().unwrap()
    }

    /// Independent oracle: enumerate every realization directly on the
    /// ambiguous edges, deciding connectivity by flood fill over kept
    /// links between super-nodes.
    fn oracle_p_keep(sng: &SuperNodeGraph) -> Vec<f64> {
        let edges = sng.ambiguous_edges();
        let sites: Vec<(u32, Vec<u32>)> = sng
            .sites
            .iter()
            .map(|s| (s.student, s.candidates.clone()))
            .collect();
        let total: usize = sites.iter().map(|(_, c)| c.len()).product();
        let mut removed = vec![0u64; edges.len()];
        let mut connected = vec![0u64; edges.len()];
        for combo in 0..total {
            // decode the combination
            let mut rest = combo;
            let choices: Vec<usize> = sites
                .iter()
                .map(|(_, c)| {
                    let x = rest % c.len();
                    rest /= c.len();
                    x
                })
                .collect();
            // adjacency over super-nodes from kept links
            let k = sng.supernode_count();
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
            for ((student, candidates), &choice) in sites.iter().zip(&choices) {
                let (mentor, _) = edges[candidates[choice] as usize];
                let a = sng.supernode_of(mentor).unwrap() as usize;
                let b = sng.supernode_of(*student).unwrap() as usize;
                adj[a].push(b);
                adj[b].push(a);
            }
            let reachable = |from: usize, to: usize| -> bool {
                let mut seen = vec![false; k];
                let mut stack = vec![from];
                seen[from] = true;
                while let Some(v) = stack.pop() {
                    if v == to {
                        return true;
                    }
                    for &w in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                false
            };
            for ((student, candidates), &choice) in sites.iter().zip(&choices) {
                for (c, &edge_idx) in candidates.iter().enumerate() {
                    if c == choice {
                        continue;
                    }
                    let (mentor, _) = edges[edge_idx as usize];
                    removed[edge_idx as usize] += 1;
                    let a = sng.supernode_of(mentor).unwrap() as usize;
                    let b = sng.supernode_of(*student).unwrap() as usize;
                    if reachable(a, b) {
                        connected[edge_idx as usize] += 1;
                    }
                }
            }
        }
        removed
            .iter()
            .zip(&connected)
            .map(|(&r, &c)| if r == 0 { 0.0 } else { c as f64 / r as f64 })
            .collect()
    }

    #[test]
    fn diamond_probabilities_are_zero() {
        let g = graph_from(3, &[(1, 3), (2, 3)]);
        let sng = condense(&g);
        let probs = sample_cut_probabilities(&sng, SamplingMode::Auto(1000), 1);
        assert!(probs.exhaustive);
        assert_eq!(probs.realizations, 2);
        assert_eq!(probs.p_keep, vec![0.0, 0.0]);
    }

    #[test]
    fn single_parent_students_produce_no_decisions() {
        let g = graph_from(3, &[(1, 2), (2, 3)]);
        let sng = condense(&g);
        assert_eq!(sng.ambiguous_node_count(), 0);
        let probs = sample_cut_probabilities(&sng, SamplingMode::Auto(100), 1);
        assert!(probs.p_keep.is_empty());
    }

    #[test]
    fn redundant_link_scores_high() {
        // B's cut candidates lead to the same tree twice (via 1->2 and the
        // path 1->3), so whichever link is removed the pair stays connected.
        let g = graph_from(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]);
        let sng = condense(&g);
        let probs = sample_cut_probabilities(&sng, SamplingMode::Exhaustive, 1);
        assert_eq!(probs.p_keep, vec![1.0, 1.0]);
    }

    #[test]
    fn monte_carlo_matches_exhaustive_oracle() {
        let mut rng = crate::seeding::rng(77);
        // random DAG: 10 nodes, extra advisors sprinkled in
        for round in 0..5 {
            let n = 10u64;
            let mut edges: Vec<(u64, u64)> = Vec::new();
            for s in 2..=n {
                let parents = 1 + usize::from(rng.random_range(0..3u8) == 0);
                let mut chosen: Vec<u64> = Vec::new();
                while chosen.len() < parents.min(s as usize - 1) {
                    let p = rng.random_range(1..s);
                    if !chosen.contains(&p) {
                        chosen.push(p);
                    }
                }
                for p in chosen {
                    edges.push((p, s));
                }
            }
            let g = graph_from(n, &edges);
            let sng = condense(&g);
            let mc = sample_cut_probabilities(&sng, SamplingMode::MonteCarlo(10_000), round);
            let expected = oracle_p_keep(&sng);
            for (edge, (got, want)) in mc.p_keep.iter().zip(&expected).enumerate() {
                assert!(
                    (got - want).abs() <= 0.05,
                    "round {round} edge {edge}: mc {got} vs oracle {want}"
                );
            }
            // the auto mode picks exhaustive here and matches exactly
            let ex = sample_cut_probabilities(&sng, SamplingMode::Auto(100), 0);
            assert!(ex.exhaustive);
            for (got, want) in ex.p_keep.iter().zip(&expected) {
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_tallies_agree() {
        // determinism across thread counts comes from per-index seeds;
        // run twice and compare
        let g = graph_from(
            9,
            &[(1, 2), (2, 3), (1, 4), (4, 3), (3, 5), (1, 6), (6, 7), (4, 7), (7, 8), (2, 9), (8, 9)],
        );
        let sng = condense(&g);
        let a = sample_cut_probabilities(&sng, SamplingMode::MonteCarlo(5000), 9);
        let b = sample_cut_probabilities(&sng, SamplingMode::MonteCarlo(5000), 9);
        assert_eq!(a.p_keep, b.p_keep);
    }
}
