//! Rank comparison for top-k lists whose membership changes over time.
//!
//! A ranking of length `L` expands into a multiset where the rank-`r` label
//! appears `L - r + 1` times; two rankings are compared by the Jaccard index
//! of their expansions (sum of per-label minimum multiplicities over sum of
//! maxima). Unlike Kendall-style indices this stays defined when the two
//! lists contain different labels, and a permutation near the top moves the
//! index more than the same permutation near the bottom.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered top-k list of attribute labels for one window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedList {
    window: usize,
    labels: Vec<String>,
}

impl RankedList {
    /// `labels[0]` holds rank 1. Labels must be distinct.
    pub fn new(window: usize, labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidRanking(format!(
                    "label `{label}` appears twice"
                )));
            }
        }
        Ok(RankedList { window, labels })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `(rank, label)` pairs, ranks starting at 1.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &str)> + '_ {
        self.labels.iter().enumerate().map(|(i, l)| (i + 1, l.as_str()))
    }

    pub fn truncated(&self, k: usize) -> RankedList {
        RankedList {
            window: self.window,
            labels: self.labels.iter().take(k).cloned().collect(),
        }
    }
}

/// Expansion of a ranking: rank `r` out of `L` contributes `L - r + 1`
/// copies of its label, for a total of `L (L + 1) / 2` elements.
pub fn extended_multiset(ranking: &RankedList) -> BTreeMap<&str, u64> {
    let len = ranking.len() as u64;
    ranking
        .entries()
        .map(|(rank, label)| (label, len - rank as u64 + 1))
        .collect()
}

/// Jaccard similarity of two rankings together with its distance form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSimilarity {
    pub jaccard: f64,
    pub distance: f64,
}

/// Multiset Jaccard of the two expansions. Equals 1 for identical rankings
/// and 0 for rankings over disjoint label sets; two empty rankings are
/// treated as equivalent.
pub fn extended_jaccard(a: &RankedList, b: &RankedList) -> RankSimilarity {
    let ma = extended_multiset(a);
    let mb = extended_multiset(b);
    let mut intersection = 0u64;
    let mut union = 0u64;
    for (label, &ca) in &ma {
        let cb = mb.get(label).copied().unwrap_or(0);
        intersection += ca.min(cb);
        union += ca.max(cb);
    }
    for (label, &cb) in &mb {
        if !ma.contains_key(label) {
            union += cb;
        }
    }
    let jaccard = if union == 0 {
        1.0
    } else {
        intersection as f64 / union as f64
    };
    RankSimilarity {
        jaccard,
        distance: 1.0 - jaccard,
    }
}

/// One consecutive-window comparison in a drift series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftPoint {
    pub from_window: usize,
    pub to_window: usize,
    pub jaccard: f64,
    pub distance: f64,
}

/// Distance between each pair of consecutive rankings, truncated to the
/// top `k`. A spike marks a reshaping of the ranking.
pub fn drift_series(rankings: &[RankedList], k: usize) -> Vec<DriftPoint> {
    rankings
        .windows(2)
        .map(|pair| {
            let sim = extended_jaccard(&pair[0].truncated(k), &pair[1].truncated(k));
            DriftPoint {
                from_window: pair[0].window,
                to_window: pair[1].window,
                jaccard: sim.jaccard,
                distance: sim.distance,
            }
        })
        .collect()
}

/// Index of the largest distance in a drift series, ties to the earliest.
pub fn peak_index(series: &[DriftPoint]) -> Option<usize> {
    series
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.distance
                .partial_cmp(&b.distance)
                .unwrap()
                .then(ib.cmp(ia))
        })
        .map(|(i, _)| i)
}
