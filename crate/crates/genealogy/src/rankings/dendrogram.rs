//! Agglomerative clustering of profiles over their pairwise KS distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::indexed_map;
use crate::rankings::profile::{ks_distance, Profile};

/// Linkage criterion for merging clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Average,
    Complete,
    Single,
}

impl std::str::FromStr for Linkage {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "average" => Ok(Linkage::Average),
            "complete" => Ok(Linkage::Complete),
            "single" => Ok(Linkage::Single),
            other => Err(format!("unknown linkage `{other}`")),
        }
    }
}

/// One merge step. Cluster ids 0..n-1 are the leaves in input order; merge
/// `i` creates cluster `n + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// Stepwise dendrogram over profile labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
}

/// Mean profile and min/max envelope of one cluster at a cut.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub members: Vec<String>,
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Dendrogram {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf sets of the `k` clusters obtained by undoing the last `k - 1`
    /// merges. Clusters are ordered by their smallest leaf index.
    pub fn cut(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.leaf_count();
        let k = k.clamp(1, n.max(1));
        let kept = n.saturating_sub(k); // merges that stay applied
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut alive: Vec<bool> = vec![true; n + kept];
        members.reserve(kept);
        for merge in &self.merges[..kept] {
            let mut joined = members[merge.left].clone();
            joined.extend_from_slice(&members[merge.right]);
            joined.sort_unstable();
            alive[merge.left] = false;
            alive[merge.right] = false;
            members.push(joined);
        }
        let mut clusters: Vec<Vec<usize>> = members
            .into_iter()
            .enumerate()
            .filter(|(i, _)| alive[*i])
            .map(|(_, m)| m)
            .collect();
        clusters.sort_by_key(|c| c[0]);
        clusters
    }

    /// Per-cluster mean profile and min/max envelopes at a `k`-cluster cut.
    pub fn summarize_cut(&self, k: usize, profiles: &[Profile]) -> Vec<ClusterSummary> {
        assert_eq!(profiles.len(), self.leaf_count());
        self.cut(k)
            .into_iter()
            .map(|cluster| {
                let bins = profiles[cluster[0]].normalized.len();
                let mut mean = vec![0.0; bins];
                let mut lower = vec![f64::INFINITY; bins];
                let mut upper = vec![f64::NEG_INFINITY; bins];
                for &i in &cluster {
                    for (t, &v) in profiles[i].normalized.iter().enumerate() {
                        mean[t] += v;
                        lower[t] = lower[t].min(v);
                        upper[t] = upper[t].max(v);
                    }
                }
                for m in &mut mean {
                    *m /= cluster.len() as f64;
                }
                ClusterSummary {
                    members: cluster.iter().map(|&i| self.leaves[i].clone()).collect(),
                    mean,
                    lower,
                    upper,
                }
            })
            .collect()
    }

    /// Newick serialization with ultrametric branch lengths: two leaves
    /// merging at height `h` end up at cophenetic distance `h`.
    pub fn to_newick(&self) -> String {
        let n = self.leaf_count();
        if n == 0 {
            return ";".into();
        }
        // height of each cluster node (leaves at 0)
        let mut height = vec![0.0; n + self.merges.len()];
        for (i, m) in self.merges.iter().enumerate() {
            height[n + i] = m.height;
        }
        fn escape(label: &str) -> String {
            if label
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
            {
                label.to_string()
            } else {
                format!("'{}'", label.replace('\'', "''"))
            }
        }
        fn render(
            node: usize,
            parent_height: f64,
            n: usize,
            dendro: &Dendrogram,
            height: &[f64],
            out: &mut String,
        ) {
            let branch = (parent_height - height[node]) / 2.0;
            if node < n {
                out.push_str(&escape(&dendro.leaves[node]));
            } else {
                let m = &dendro.merges[node - n];
                out.push('(');
                render(m.left, height[node], n, dendro, height, out);
                out.push(',');
                render(m.right, height[node], n, dendro, height, out);
                out.push(')');
            }
            out.push_str(&format!(":{branch}"));
        }
        let root = n + self.merges.len() - 1;
        let mut out = String::new();
        if self.merges.is_empty() {
            out.push_str(&escape(&self.leaves[0]));
        } else {
            render(root, height[root], n, self, &height, &mut out);
        }
        out.push(';');
        out
    }
}

/// Agglomerative hierarchy over the pairwise KS-distance matrix, with
/// Lance-Williams updates for the chosen linkage. Merge heights are
/// non-decreasing for all three supported linkages. Ties are broken by the
/// smallest cluster pair, so the result is deterministic.
pub fn cluster_profiles(profiles: &[Profile], linkage: Linkage) -> Result<Dendrogram> {
    let n = profiles.len();
    if n < 2 {
        return Err(Error::NotEnoughProfiles(n));
    }
    // condensed pairwise distances, parallel over rows
    let rows: Vec<Vec<f64>> =
        indexed_map(n, |i| (0..n).map(|j| ks_distance(&profiles[i], &profiles[j])).collect());

    // active clusters: id in the stepwise numbering, size, distance row
    let mut ids: Vec<usize> = (0..n).collect();
    let mut sizes: Vec<usize> = vec![1; n];
    let mut dist = rows;
    let mut active: Vec<bool> = vec![true; n];
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..dist.len() {
            if !active[i] {
                continue;
            }
            for j in i + 1..dist.len() {
                if !active[j] {
                    continue;
                }
                let d = dist[i][j];
                if best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        let (a, b, height) = best.expect("at least two active clusters");
        // Lance-Williams update written into row a; b retires.
        let (sa, sb) = (sizes[a] as f64, sizes[b] as f64);
        for k in 0..dist.len() {
            if !active[k] || k == a || k == b {
                continue;
            }
            let dak = dist[a][k];
            let dbk = dist[b][k];
            let updated = match linkage {
                Linkage::Average => (sa * dak + sb * dbk) / (sa + sb),
                Linkage::Complete => dak.max(dbk),
                Linkage::Single => dak.min(dbk),
            };
            dist[a][k] = updated;
            dist[k][a] = updated;
        }
        active[b] = false;
        merges.push(Merge {
            left: ids[a],
            right: ids[b],
            height,
            size: sizes[a] + sizes[b],
        });
        sizes[a] += sizes[b];
        ids[a] = n + step;
    }

    Ok(Dendrogram {
        leaves: profiles.iter().map(|p| p.label.clone()).collect(),
        merges,
    })
}
