//! Super-node condensation of the genealogy.
//!
//! Removing every in-edge of every multi-advisor scholar leaves a forest;
//! its connected components are the super-nodes (each induces a tree where
//! every node has at most one parent). The removed edges become weighted
//! links between super-nodes and are the only places where a cut decision
//! is ever needed, which shrinks the Monte-Carlo state from the scholar
//! graph to the much smaller super-node graph.

use std::collections::HashMap;

use crate::graph::GenealogyGraph;

/// One multi-advisor scholar and its candidate parent links.
#[derive(Debug, Clone)]
pub(crate) struct CutSite {
    /// Scholar position of the student.
    pub student: u32,
    /// Indices into `SuperNodeGraph::ambiguous_edges`, one per advisor.
    pub candidates: Vec<u32>,
}

/// The condensed graph: super-nodes plus the removed (ambiguous) edges.
#[derive(Debug, Clone)]
pub struct SuperNodeGraph {
    /// Super-node id -> member scholar positions, sorted.
    supernodes: Vec<Vec<u32>>,
    /// Scholar position -> super-node id; `u32::MAX` for isolated scholars.
    supernode_of: Vec<u32>,
    /// In-edges of multi-advisor scholars, as (mentor pos, student pos).
    ambiguous_edges: Vec<(u32, u32)>,
    /// (from super-node, to super-node) -> number of ambiguous edges.
    links: HashMap<(u32, u32), u64>,
    /// One per multi-advisor scholar, candidates listed in parent order.
    pub(crate) sites: Vec<CutSite>,
}

impl SuperNodeGraph {
    pub fn supernode_count(&self) -> usize {
        self.supernodes.len()
    }

    pub fn members(&self, supernode: u32) -> &[u32] {
        &self.supernodes[supernode as usize]
    }

    /// Super-node of a scholar position, `None` when isolated.
    pub fn supernode_of(&self, pos: u32) -> Option<u32> {
        match self.supernode_of[pos as usize] {
            u32::MAX => None,
            sn => Some(sn),
        }
    }

    pub fn ambiguous_edges(&self) -> &[(u32, u32)] {
        &self.ambiguous_edges
    }

    pub fn links(&self) -> &HashMap<(u32, u32), u64> {
        &self.links
    }

    /// Multi-advisor scholars, i.e. the places where a cut must be chosen.
    pub fn ambiguous_node_count(&self) -> usize {
        self.sites.len()
    }

    /// Number of distinct single-parent realizations, saturating.
    pub fn realization_count(&self) -> u128 {
        self.sites
            .iter()
            .fold(1u128, |acc, site| {
                acc.saturating_mul(site.candidates.len() as u128)
            })
    }
}

/// Condenses the graph: every in-edge of every scholar with two or more
/// advisors is removed, the remaining forest's components become
/// super-nodes, and the removed edges become weighted super-node links.
/// Isolated scholars take no part.
pub fn condense(graph: &GenealogyGraph) -> SuperNodeGraph {
    let n = graph.len();

    // union-find over scholar positions, joining along kept edges
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }

    let mut ambiguous_edges: Vec<(u32, u32)> = Vec::new();
    for &(mentor, student) in graph.edges() {
        if graph.parents_of(student as usize).len() >= 2 {
            ambiguous_edges.push((mentor, student));
        } else {
            let (rm, rs) = (find(&mut parent, mentor), find(&mut parent, student));
            if rm != rs {
                parent[rs as usize] = rm;
            }
        }
    }

    // dense super-node ids in first-seen scholar-position order
    let mut supernode_of = vec![u32::MAX; n];
    let mut supernodes: Vec<Vec<u32>> = Vec::new();
    let mut id_of_root: HashMap<u32, u32> = HashMap::new();
    for pos in 0..n as u32 {
        if graph.is_isolated(pos as usize) {
            continue;
        }
        let root = find(&mut parent, pos);
        let id = *id_of_root.entry(root).or_insert_with(|| {
            supernodes.push(Vec::new());
            (supernodes.len() - 1) as u32
        });
        supernode_of[pos as usize] = id;
        supernodes[id as usize].push(pos);
    }

    let mut links: HashMap<(u32, u32), u64> = HashMap::new();
    let mut by_student: HashMap<u32, Vec<u32>> = HashMap::new();
    for (idx, &(mentor, student)) in ambiguous_edges.iter().enumerate() {
        let from = supernode_of[mentor as usize];
        let to = supernode_of[student as usize];
        *links.entry((from, to)).or_insert(0) += 1;
        by_student.entry(student).or_default().push(idx as u32);
    }
    let mut sites: Vec<CutSite> = by_student
        .into_iter()
        .map(|(student, candidates)| CutSite {
            student,
            candidates,
        })
        .collect();
    sites.sort_by_key(|site| site.student);

    SuperNodeGraph {
        supernodes,
        supernode_of,
        ambiguous_edges,
        links,
        sites,
    }
}
