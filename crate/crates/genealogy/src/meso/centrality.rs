//! Strength and betweenness centralities of a mesoscale network.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::meso::network::MesoNetwork;
use crate::par::indexed_map;

/// Centrality row of one attribute value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityRow {
    pub label: String,
    /// Off-diagonal weighted in-degree.
    pub in_strength: u64,
    /// Off-diagonal weighted out-degree.
    pub out_strength: u64,
    pub self_loop: u64,
    pub betweenness: f64,
}

/// Distances within `EPS` (relative) count as equal shortest paths.
const EPS: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= EPS * a.abs().max(b.abs()).max(1.0)
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties by node id for determinism
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Strengths plus Brandes betweenness on the directed network with edge
/// length `1 / weight` (strong flows are short paths). Self-loops are
/// excluded from path finding; scores are raw pair-dependency sums. Rows
/// come back sorted by label.
pub fn centralities(net: &MesoNetwork) -> Vec<CentralityRow> {
    let n = net.node_count();
    // adjacency without self-loops, deterministic neighbour order
    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for (&(f, t), &w) in &net.weights {
        if f != t && w > 0 {
            adj[f as usize].push((t, 1.0 / w as f64));
        }
    }
    for row in &mut adj {
        row.sort_by(|a, b| a.0.cmp(&b.0));
    }

    // One Dijkstra/Brandes pass per source, summed over sources.
    let partials: Vec<Vec<f64>> = indexed_map(n, |s| {
        let mut dist = vec![f64::INFINITY; n];
        let mut sigma = vec![0.0f64; n];
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut settled: Vec<u32> = Vec::with_capacity(n);
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[s] = 0.0;
        sigma[s] = 1.0;
        heap.push(HeapEntry {
            dist: 0.0,
            node: s as u32,
        });
        while let Some(HeapEntry { node, .. }) = heap.pop() {
            let v = node as usize;
            if done[v] {
                continue;
            }
            done[v] = true;
            settled.push(node);
            for &(t, len) in &adj[v] {
                let u = t as usize;
                let alt = dist[v] + len;
                if alt < dist[u] && !close(alt, dist[u]) {
                    dist[u] = alt;
                    sigma[u] = sigma[v];
                    preds[u].clear();
                    preds[u].push(node);
                    heap.push(HeapEntry { dist: alt, node: t });
                } else if close(alt, dist[u]) && !done[u] {
                    if !preds[u].contains(&node) {
                        sigma[u] += sigma[v];
                        preds[u].push(node);
                    }
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        let mut score = vec![0.0f64; n];
        for &node in settled.iter().rev() {
            let w = node as usize;
            for &p in &preds[w] {
                let p = p as usize;
                delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
        score
    });

    let mut betweenness = vec![0.0f64; n];
    for partial in partials {
        for (b, p) in betweenness.iter_mut().zip(partial) {
            *b += p;
        }
    }

    (0..n)
        .map(|i| CentralityRow {
            label: net.labels[i].clone(),
            in_strength: net.in_strength(i as u32),
            out_strength: net.out_strength(i as u32),
            self_loop: net.self_loop(i as u32),
            betweenness: betweenness[i],
        })
        .collect()
}
