//! Seeded Louvain modularity maximization.
//!
//! Directed transition networks are symmetrized as `(W + W^T) / 2` with
//! self-loops kept, then the usual two-phase Louvain loop runs: greedy
//! local moves in a seeded-shuffled node order until no move improves
//! modularity, then aggregation of communities into super-nodes, repeated
//! until a level makes no move. Fixed seed, fixed result.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::meso::network::MesoNetwork;
use crate::seeding;
use crate::{Error, Result};

/// A community assignment over attribute labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// label -> community id; ids are dense, 0-based, ordered by first
    /// appearance over the sorted label list.
    pub communities: BTreeMap<String, usize>,
    pub modularity: f64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.communities.values().copied().max().map_or(0, |m| m + 1)
    }
}

/// Symmetrized weighted graph in the modularity convention: off-diagonal
/// entries `(w_ij + w_ji) / 2`, diagonal entries `2 * w_ii`.
struct UndirectedGraph {
    /// adjacency without the diagonal, sorted by neighbour.
    adj: Vec<Vec<(usize, f64)>>,
    /// diagonal entries.
    diag: Vec<f64>,
    /// weighted degree including the diagonal.
    degree: Vec<f64>,
    /// half the total degree.
    two_m: f64,
}

impl UndirectedGraph {
    fn from_meso(net: &MesoNetwork) -> Self {
        let n = net.node_count();
        let mut sym: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut diag = vec![0.0; n];
        for (&(f, t), &w) in &net.weights {
            let (f, t) = (f as usize, t as usize);
            if f == t {
                diag[f] += 2.0 * w as f64;
            } else {
                *sym.entry((f.min(t), f.max(t))).or_insert(0.0) += w as f64 / 2.0;
            }
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(a, b), &w) in &sym {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let degree: Vec<f64> = (0..n)
            .map(|i| adj[i].iter().map(|&(_, w)| w).sum::<f64>() + diag[i])
            .collect();
        let two_m = degree.iter().sum();
        UndirectedGraph {
            adj,
            diag,
            degree,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// One level of local moving. Returns the node -> community map and
    /// whether anything moved.
    fn local_move(&self, rng: &mut impl rand::Rng) -> (Vec<usize>, bool) {
        use rand::seq::SliceRandom;

        let n = self.len();
        let mut community: Vec<usize> = (0..n).collect();
        let mut tot: Vec<f64> = self.degree.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut moved_any = false;
        loop {
            let mut moved = false;
            for &node in &order {
                let current = community[node];
                tot[current] -= self.degree[node];

                // weight from node to each adjacent community
                let mut link: BTreeMap<usize, f64> = BTreeMap::new();
                link.insert(current, 0.0);
                for &(nb, w) in &self.adj[node] {
                    *link.entry(community[nb]).or_insert(0.0) += w;
                }
                let gain = |comm: usize, w: f64| w - tot[comm] * self.degree[node] / self.two_m;
                let mut best = current;
                let mut best_gain = gain(current, link[&current]);
                for (&comm, &w) in &link {
                    let g = gain(comm, w);
                    if g > best_gain + 1e-12 {
                        best = comm;
                        best_gain = g;
                    }
                }
                tot[best] += self.degree[node];
                if best != current {
                    community[node] = best;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        (community, moved_any)
    }

    /// Aggregates communities into super-nodes.
    fn aggregate(&self, community: &[usize]) -> (UndirectedGraph, Vec<usize>) {
        let mut ids: Vec<usize> = community.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let dense: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let k = ids.len();

        let mut sym: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut diag = vec![0.0; k];
        for node in 0..self.len() {
            let a = dense[&community[node]];
            diag[a] += self.diag[node];
            for &(nb, w) in &self.adj[node] {
                let b = dense[&community[nb]];
                if a == b {
                    diag[a] += w; // both directions visit this pair once each
                } else if node < nb {
                    *sym.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
                }
            }
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
        for (&(a, b), &w) in &sym {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let degree: Vec<f64> = (0..k)
            .map(|i| adj[i].iter().map(|&(_, w)| w).sum::<f64>() + diag[i])
            .collect();
        let graph = UndirectedGraph {
            adj,
            diag,
            degree,
            two_m: self.two_m,
        };
        let mapping: Vec<usize> = community.iter().map(|c| dense[c]).collect();
        (graph, mapping)
    }

    fn modularity(&self, community: &[usize]) -> f64 {
        let k = community.iter().copied().max().map_or(0, |m| m + 1);
        let mut intra = vec![0.0; k];
        let mut tot = vec![0.0; k];
        for node in 0..self.len() {
            let c = community[node];
            tot[c] += self.degree[node];
            intra[c] += self.diag[node];
            for &(nb, w) in &self.adj[node] {
                if community[nb] == c {
                    intra[c] += w; // each intra pair counted twice, as needed
                }
            }
        }
        (0..k)
            .map(|c| intra[c] / self.two_m - (tot[c] / self.two_m).powi(2))
            .sum()
    }
}

/// Louvain partition of the symmetrized network. Deterministic for a fixed
/// seed; errors on a network with no edges.
pub fn detect_communities(net: &MesoNetwork, seed: u64) -> Result<Partition> {
    if net.weights.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let mut rng = seeding::rng(seed);
    let base = UndirectedGraph::from_meso(net);
    let n = base.len();

    // node -> community in original index space, refined level by level
    let mut assignment: Vec<usize> = (0..n).collect();
    let mut level = UndirectedGraph::from_meso(net);
    loop {
        let (community, moved) = level.local_move(&mut rng);
        if !moved {
            break;
        }
        let (next, mapping) = level.aggregate(&community);
        for slot in assignment.iter_mut() {
            *slot = mapping[community[*slot]];
        }
        level = next;
        if level.len() <= 1 {
            break;
        }
    }

    // densify ids by first appearance over sorted labels
    let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
    let mut communities: BTreeMap<String, usize> = BTreeMap::new();
    for (node, label) in net.labels.iter().enumerate() {
        let next_id = dense.len();
        let id = *dense.entry(assignment[node]).or_insert(next_id);
        communities.insert(label.clone(), id);
    }
    let modularity = base.modularity(&assignment);
    Ok(Partition {
        communities,
        modularity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::Attribute;
    use std::collections::HashMap;

    fn net(labels: Vec<String>, weights: Vec<(u32, u32, u64)>) -> MesoNetwork {
        MesoNetwork {
            attribute: Attribute::Discipline,
            labels,
            weights: weights.into_iter().map(|(f, t, w)| ((f, t), w)).collect(),
            window: None,
            dropped: 0,
        }
    }

    fn two_cliques() -> MesoNetwork {
        let labels: Vec<String> = (0..8).map(|i| format!("d{i}")).collect();
        let mut weights = Vec::new();
        for block in 0..2u32 {
            let base = block * 4;
            for i in 0..4u32 {
                for j in 0..4u32 {
                    if i != j {
                        weights.push((base + i, base + j, 5));
                    }
                }
            }
        }
        weights.push((0, 4, 1)); // single bridge
        net(labels, weights)
    }

    #[test]
    fn two_cliques_split_into_two_communities() {
        let p = detect_communities(&two_cliques(), 42).unwrap();
        assert_eq!(p.community_count(), 2);
        for i in 0..4 {
            assert_eq!(p.communities[&format!("d{i}")], p.communities["d0"]);
            assert_eq!(p.communities[&format!("d{}", i + 4)], p.communities["d4"]);
        }
        assert!(p.modularity > 0.3, "Q = {}", p.modularity);
    }

    #[test]
    fn single_clique_stays_together() {
        let labels: Vec<String> = (0..4).map(|i| format!("d{i}")).collect();
        let mut weights = Vec::new();
        for i in 0..4u32 {
            for j in 0..4u32 {
                if i != j {
                    weights.push((i, j, 3));
                }
            }
        }
        let p = detect_communities(&net(labels, weights), 7).unwrap();
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let n = two_cliques();
        let a = detect_communities(&n, 99).unwrap();
        let b = detect_communities(&n, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_network_is_an_error() {
        let n = net(vec!["a".into()], vec![]);
        assert!(matches!(detect_communities(&n, 1), Err(Error::EmptyNetwork)));
    }

    #[test]
    fn planted_four_blocks_recovered() {
        // 24 labels in 4 blocks; dense inside, sparse across.
        use rand::Rng;
        let mut rng = crate::seeding::rng(1234);
        let labels: Vec<String> = (0..24).map(|i| format!("d{i:02}")).collect();
        let mut weights = Vec::new();
        for i in 0..24u32 {
            for j in 0..24u32 {
                if i == j {
                    continue;
                }
                let same = i / 6 == j / 6;
                let w = if same {
                    rng.random_range(8..=12)
                } else if rng.random_range(0..10) == 0 {
                    1
                } else {
                    0
                };
                if w > 0 {
                    weights.push((i, j, w));
                }
            }
        }
        let p = detect_communities(&net(labels.clone(), weights), 5).unwrap();

        let truth: HashMap<String, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i / 6))
            .collect();
        let found: Vec<usize> = labels.iter().map(|l| p.communities[l]).collect();
        let expected: Vec<usize> = labels.iter().map(|l| truth[l]).collect();
        let nmi = crate::meso::nmi::nmi_of_assignments(&found, &expected);
        assert!(nmi >= 0.9, "NMI = {nmi}");
    }
}
