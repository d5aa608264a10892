//! Cut resolution: one kept parent per scholar, families as the trees of
//! the resulting forest.

use serde::Serialize;

use crate::families::condense::SuperNodeGraph;
use crate::families::montecarlo::CutProbabilities;
use crate::graph::GenealogyGraph;
use crate::scholar::ScholarId;

/// The resolution record of one multi-advisor scholar.
#[derive(Debug, Clone, Serialize)]
pub struct CutDecision {
    pub student: ScholarId,
    pub kept_mentor: ScholarId,
    pub kept_p: f64,
    /// (mentor, p_keep) of every removed link.
    pub removed: Vec<(ScholarId, f64)>,
}

/// Assignment of every non-isolated scholar to exactly one family.
#[derive(Debug, Clone)]
pub struct FamilyPartition {
    /// scholar position -> family id; `u32::MAX` for isolated scholars.
    family_of: Vec<u32>,
    /// family id -> root scholar position (the initiator).
    roots: Vec<u32>,
    /// family id -> member count.
    sizes: Vec<u64>,
    /// kept parent per scholar position, `u32::MAX` at roots and isolates.
    kept_parent: Vec<u32>,
    pub decisions: Vec<CutDecision>,
}

impl FamilyPartition {
    pub fn family_count(&self) -> usize {
        self.roots.len()
    }

    pub fn family_of(&self, pos: u32) -> Option<u32> {
        match self.family_of[pos as usize] {
            u32::MAX => None,
            f => Some(f),
        }
    }

    pub fn root_of(&self, family: u32) -> u32 {
        self.roots[family as usize]
    }

    pub fn size_of(&self, family: u32) -> u64 {
        self.sizes[family as usize]
    }

    pub fn kept_parent(&self, pos: u32) -> Option<u32> {
        match self.kept_parent[pos as usize] {
            u32::MAX => None,
            p => Some(p),
        }
    }

    /// Scholars covered by the partition (the non-isolated ones).
    pub fn covered(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Families ranked by size (largest first, ties by smaller root
    /// position) with relative sizes and the cumulative coverage curve.
    pub fn ranked_sizes(&self, graph: &GenealogyGraph) -> FamilySizes {
        let total = self.covered();
        let mut order: Vec<u32> = (0..self.roots.len() as u32).collect();
        order.sort_by(|&a, &b| {
            self.sizes[b as usize]
                .cmp(&self.sizes[a as usize])
                .then_with(|| self.roots[a as usize].cmp(&self.roots[b as usize]))
        });
        let mut rows = Vec::with_capacity(order.len());
        let mut acc = 0u64;
        for family in order {
            let size = self.sizes[family as usize];
            acc += size;
            let root = graph.scholar(self.roots[family as usize] as usize);
            rows.push(FamilySizeRow {
                family,
                root_id: root.id,
                root_name: root.name.clone(),
                size,
                relative_size: size as f64 / total as f64,
                cumulative_coverage: acc as f64 / total as f64,
            });
        }
        FamilySizes { rows, total }
    }
}

/// One row of the ranked family-size table.
#[derive(Debug, Clone, Serialize)]
pub struct FamilySizeRow {
    pub family: u32,
    pub root_id: ScholarId,
    pub root_name: String,
    pub size: u64,
    pub relative_size: f64,
    pub cumulative_coverage: f64,
}

/// Families ranked by size.
#[derive(Debug, Clone, Serialize)]
pub struct FamilySizes {
    pub rows: Vec<FamilySizeRow>,
    pub total: u64,
}

impl FamilySizes {
    /// Fraction of scholars covered by the `k` largest families.
    pub fn coverage_of_top(&self, k: usize) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows[k.min(self.rows.len()) - 1].cumulative_coverage
    }
}

/// Resolves every cut site: the link with the lowest `p_keep` is retained
/// (its removal would most likely disconnect mentor and student), all
/// others are cut. Ties go to the mentor with the higher out-degree, then
/// the lower id. The kept-edge graph is a forest; its trees are the
/// families and each root is an initiator.
pub fn resolve_families(
    graph: &GenealogyGraph,
    sng: &SuperNodeGraph,
    probs: &CutProbabilities,
) -> FamilyPartition {
    let n = graph.len();
    let edges = sng.ambiguous_edges();
    assert_eq!(edges.len(), probs.p_keep.len(), "probabilities per edge");

    // kept parent: the unique parent for single-advisor scholars, the
    // lowest-p_keep candidate for multi-advisor ones
    let mut kept_parent = vec![u32::MAX; n];
    for &(mentor, student) in graph.edges() {
        if graph.parents_of(student as usize).len() < 2 {
            kept_parent[student as usize] = mentor;
        }
    }
    let mut decisions = Vec::with_capacity(sng.sites.len());
    for site in &sng.sites {
        let best = site
            .candidates
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let (pa, pb) = (probs.p_keep[a as usize], probs.p_keep[b as usize]);
                let (ma, _) = edges[a as usize];
                let (mb, _) = edges[b as usize];
                pa.partial_cmp(&pb)
                    .unwrap()
                    .then_with(|| {
                        graph
                            .children_of(mb as usize)
                            .len()
                            .cmp(&graph.children_of(ma as usize).len())
                    })
                    .then_with(|| {
                        graph
                            .scholar(ma as usize)
                            .id
                            .cmp(&graph.scholar(mb as usize).id)
                    })
            })
            .expect("cut site has candidates");
        let (kept_mentor, student) = edges[best as usize];
        kept_parent[student as usize] = kept_mentor;
        decisions.push(CutDecision {
            student: graph.scholar(student as usize).id,
            kept_mentor: graph.scholar(kept_mentor as usize).id,
            kept_p: probs.p_keep[best as usize],
            removed: site
                .candidates
                .iter()
                .copied()
                .filter(|&c| c != best)
                .map(|c| {
                    let (mentor, _) = edges[c as usize];
                    (graph.scholar(mentor as usize).id, probs.p_keep[c as usize])
                })
                .collect(),
        });
    }

    // families: walk kept parents up to the root, memoized
    let mut family_of = vec![u32::MAX; n];
    let mut roots: Vec<u32> = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    let mut trail: Vec<u32> = Vec::new();
    for start in 0..n as u32 {
        if graph.is_isolated(start as usize) || family_of[start as usize] != u32::MAX {
            continue;
        }
        trail.clear();
        let mut at = start;
        let family = loop {
            if family_of[at as usize] != u32::MAX {
                break family_of[at as usize];
            }
            trail.push(at);
            match kept_parent[at as usize] {
                u32::MAX => {
                    let id = roots.len() as u32;
                    roots.push(at);
                    sizes.push(0);
                    break id;
                }
                parent => at = parent,
            }
        };
        for &pos in &trail {
            family_of[pos as usize] = family;
            sizes[family as usize] += 1;
        }
    }

    FamilyPartition {
        family_of,
        roots,
        sizes,
        kept_parent,
        decisions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::condense::condense;
    use crate::families::montecarlo::{sample_cut_probabilities, SamplingMode};
    use crate::graph::GraphBuilder;
    use crate::scholar::Scholar;

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

    fn resolve(graph: &GenealogyGraph) -> FamilyPartition {
        let sng = condense(graph);
        let probs = sample_cut_probabilities(&sng, SamplingMode::Auto(10_000), 17);
        resolve_families(graph, &sng, &probs)
    }

    #[test]
    fn diamond_resolves_into_two_families() {
        // both p_keep are 0: the tie-break keeps the smaller mentor id
        let g = graph_from(3, &[(1, 3), (2, 3)]);
        let p = resolve(&g);
        assert_eq!(p.family_count(), 2);
        let f1 = p.family_of(g.position(ScholarId(1)).unwrap() as u32);
        let f3 = p.family_of(g.position(ScholarId(3)).unwrap() as u32);
        assert_eq!(f1, f3, "tie kept the smaller mentor id");
        assert_eq!(p.decisions.len(), 1);
        assert_eq!(p.decisions[0].kept_mentor, ScholarId(1));
    }

    #[test]
    fn pure_tree_is_one_family_rooted_at_source() {
        let g = graph_from(5, &[(1, 2), (1, 3), (3, 4), (3, 5)]);
        let p = resolve(&g);
        assert_eq!(p.family_count(), 1);
        assert_eq!(p.root_of(0), g.position(ScholarId(1)).unwrap() as u32);
        assert_eq!(p.covered(), 5);
    }

    #[test]
    fn every_non_isolated_scholar_gets_exactly_one_family() {
        let g = graph_from(
            10,
            &[(1, 2), (2, 3), (4, 5), (5, 6), (1, 6), (3, 7), (6, 7), (4, 8), (2, 8)],
        );
        let p = resolve(&g);
        let mut covered = 0u64;
        for pos in 0..g.len() as u32 {
            if g.is_isolated(pos as usize) {
                assert_eq!(p.family_of(pos), None);
            } else {
                assert!(p.family_of(pos).is_some());
                covered += 1;
            }
        }
        assert_eq!(p.covered(), covered);
        // kept-edge graph is a forest: at most one parent each, and the
        // family count equals the root count
        let roots = (0..g.len() as u32)
            .filter(|&pos| !g.is_isolated(pos as usize) && p.kept_parent(pos).is_none())
            .count();
        assert_eq!(roots, p.family_count());
    }

    #[test]
    fn tie_break_prefers_larger_lineage() {
        // mentor 1 has two children, mentor 2 has one; both links to 4
        // carry p_keep 0, so 1 wins the tie on out-degree.
        let g = graph_from(4, &[(1, 3), (1, 4), (2, 4)]);
        let p = resolve(&g);
        assert_eq!(p.decisions[0].kept_mentor, ScholarId(1));
    }

    #[test]
    fn ranked_sizes_and_coverage() {
        let g = graph_from(6, &[(1, 2), (1, 3), (4, 5)]); // sizes 3 + 2, node 6 isolated
        let p = resolve(&g);
        let sizes = p.ranked_sizes(&g);
        assert_eq!(sizes.rows.len(), 2);
        assert_eq!(sizes.rows[0].size, 3);
        assert!((sizes.rows[0].relative_size - 0.6).abs() < 1e-12);
        assert!((sizes.rows[1].relative_size - 0.4).abs() < 1e-12);
        assert!((sizes.coverage_of_top(1) - 0.6).abs() < 1e-12);
        assert!((sizes.coverage_of_top(2) - 1.0).abs() < 1e-12);
        assert_eq!(sizes.rows[0].root_name, "s1");
    }

    #[test]
    fn single_family_coverage_is_total() {
        let g = graph_from(4, &[(1, 2), (2, 3), (3, 4)]);
        let p = resolve(&g);
        let sizes = p.ranked_sizes(&g);
        assert_eq!(sizes.coverage_of_top(1), 1.0);
    }
}
