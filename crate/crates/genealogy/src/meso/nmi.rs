//! Normalized mutual information between community partitions, and its
//! series across consecutive time windows.

use serde::{Deserialize, Serialize};

use crate::graph::GenealogyGraph;
use crate::meso::louvain::{detect_communities, Partition};
use crate::meso::network::windowed_meso;
use crate::par::indexed_map;
use crate::seeding;
use crate::window::{Attribute, TimeWindowing};

/// NMI of two assignment vectors over the same items:
/// `2 I(X;Y) / (H(X) + H(Y))`, natural logs (the value is base-invariant).
/// Two trivial single-cluster partitions are identical, hence 1; if only
/// one side is trivial the mutual information is 0 and so is the NMI.
pub(crate) fn nmi_of_assignments(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let ka = a.iter().copied().max().unwrap() + 1;
    let kb = b.iter().copied().max().unwrap() + 1;
    let mut joint = vec![vec![0u64; kb]; ka];
    let mut ca = vec![0u64; ka];
    let mut cb = vec![0u64; kb];
    for (&x, &y) in a.iter().zip(b) {
        joint[x][y] += 1;
        ca[x] += 1;
        cb[y] += 1;
    }
    let nf = n as f64;
    let entropy = |counts: &[u64]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / nf;
                -p * p.ln()
            })
            .sum()
    };
    let ha = entropy(&ca);
    let hb = entropy(&cb);
    if ha + hb == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for (x, row) in joint.iter().enumerate() {
        for (y, &c) in row.iter().enumerate() {
            if c > 0 {
                let pxy = c as f64 / nf;
                let px = ca[x] as f64 / nf;
                let py = cb[y] as f64 / nf;
                mi += pxy * (pxy / (px * py)).ln();
            }
        }
    }
    (2.0 * mi.max(0.0) / (ha + hb)).clamp(0.0, 1.0)
}

/// NMI between two label partitions, computed on the intersection of their
/// label sets. Disjoint label sets share no information: 0.
pub fn partition_nmi(p1: &Partition, p2: &Partition) -> f64 {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (label, &ca) in &p1.communities {
        if let Some(&cb) = p2.communities.get(label) {
            a.push(ca);
            b.push(cb);
        }
    }
    if a.is_empty() {
        return 0.0;
    }
    // densify ids so max+1 bounds the contingency table
    let dense = |v: &[usize]| -> Vec<usize> {
        let mut ids: Vec<usize> = v.to_vec();
        ids.sort_unstable();
        ids.dedup();
        v.iter()
            .map(|x| ids.binary_search(x).expect("own id"))
            .collect()
    };
    nmi_of_assignments(&dense(&a), &dense(&b))
}

/// One consecutive-window NMI comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NmiPoint {
    pub from_window: usize,
    pub to_window: usize,
    pub nmi: f64,
    /// Set when either window holds under 5% of the mean transition count;
    /// dips here are starved of data rather than meaningful.
    pub low_data: bool,
}

/// Community structure drift of the windowed transition network: one NMI
/// value per consecutive window pair. Per-window community detection is
/// seeded independently (derived from `seed`) and runs in parallel. A dip
/// flags a reorganization of the knowledge flows; low-data windows are
/// marked rather than dropped.
pub fn nmi_series(
    graph: &GenealogyGraph,
    attribute: Attribute,
    windowing: TimeWindowing,
    seed: u64,
) -> Vec<NmiPoint> {
    let nets = windowed_meso(graph, attribute, windowing);
    let partitions: Vec<Option<Partition>> = indexed_map(nets.len(), |bin| {
        detect_communities(&nets[bin], seeding::child_seed(seed, bin as u64)).ok()
    });
    let weights: Vec<u64> = nets.iter().map(|n| n.total_weight()).collect();
    let mean = weights.iter().sum::<u64>() as f64 / weights.len().max(1) as f64;
    let low = |bin: usize| (weights[bin] as f64) < 0.05 * mean;

    (1..nets.len())
        .map(|bin| {
            let nmi = match (&partitions[bin - 1], &partitions[bin]) {
                (Some(a), Some(b)) => partition_nmi(a, b),
                _ => 0.0,
            };
            NmiPoint {
                from_window: bin - 1,
                to_window: bin,
                nmi,
                low_data: low(bin - 1) || low(bin),
            }
        })
        .collect()
}

/// Index of the smallest NMI in a series, ties to the earliest.
pub fn dip_index(series: &[NmiPoint]) -> Option<usize> {
    series
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.nmi.partial_cmp(&b.nmi).unwrap().then(ia.cmp(ib)))
        .map(|(i, _)| i)
}
