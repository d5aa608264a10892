//! Construction of attribute-transition networks, flow decompositions and
//! hierarchy (elite) curves.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::GenealogyGraph;
use crate::par::indexed_map;
use crate::window::{Attribute, TimeWindowing};

/// Weighted directed network over attribute values, self-loops allowed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MesoNetwork {
    pub attribute: Attribute,
    /// Sorted attribute values; node ids are positions in this list.
    pub labels: Vec<String>,
    /// `(from, to) -> weight`, only nonzero entries.
    pub weights: HashMap<(u32, u32), u64>,
    /// Window bin this network covers, `None` for the time aggregate.
    pub window: Option<usize>,
    /// Advisor edges skipped: missing endpoint attribute, or (windowed)
    /// missing or out-of-range student year.
    pub dropped: u64,
}

impl MesoNetwork {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label_id(&self, label: &str) -> Option<u32> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
            .map(|i| i as u32)
    }

    pub fn weight(&self, from: &str, to: &str) -> u64 {
        match (self.label_id(from), self.label_id(to)) {
            (Some(f), Some(t)) => self.weights.get(&(f, t)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn self_loop(&self, node: u32) -> u64 {
        self.weights.get(&(node, node)).copied().unwrap_or(0)
    }

    /// Off-diagonal out-strength of `node`.
    pub fn out_strength(&self, node: u32) -> u64 {
        self.weights
            .iter()
            .filter(|(&(f, t), _)| f == node && t != node)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Off-diagonal in-strength of `node`.
    pub fn in_strength(&self, node: u32) -> u64 {
        self.weights
            .iter()
            .filter(|(&(f, t), _)| t == node && f != node)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Edges sorted by (from, to); the stable export order.
    pub fn sorted_edges(&self) -> Vec<(u32, u32, u64)> {
        let mut edges: Vec<(u32, u32, u64)> = self
            .weights
            .iter()
            .map(|(&(f, t), &w)| (f, t, w))
            .collect();
        edges.sort_unstable();
        edges
    }
}

/// Builds the transition network for one attribute. Each advisor edge whose
/// endpoints both carry the attribute adds one unit of weight; with a
/// windowing, the edge belongs to the window of the student's year and
/// edges with no datable student are dropped.
pub fn build_meso(
    graph: &GenealogyGraph,
    attribute: Attribute,
    window: Option<(TimeWindowing, usize)>,
) -> MesoNetwork {
    let mut labels: Vec<String> = graph
        .scholars()
        .iter()
        .filter_map(|s| attribute.of(s))
        .map(str::to_owned)
        .collect();
    labels.sort_unstable();
    labels.dedup();

    let id_of = |label: &str| -> u32 {
        labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .expect("label collected above") as u32
    };

    let mut weights: HashMap<(u32, u32), u64> = HashMap::new();
    let mut dropped = 0u64;
    for (mentor, student) in graph.edge_endpoints() {
        if let Some((windowing, bin)) = window {
            match student.year.and_then(|y| windowing.bin_of(y)) {
                Some(b) if b == bin => {}
                _ => {
                    dropped += 1;
                    continue;
                }
            }
        }
        match (attribute.of(mentor), attribute.of(student)) {
            (Some(from), Some(to)) => {
                *weights.entry((id_of(from), id_of(to))).or_insert(0) += 1;
            }
            _ => dropped += 1,
        }
    }

    MesoNetwork {
        attribute,
        labels,
        weights,
        window: window.map(|(_, bin)| bin),
        dropped,
    }
}

/// One network per window bin, built in parallel.
pub fn windowed_meso(
    graph: &GenealogyGraph,
    attribute: Attribute,
    windowing: TimeWindowing,
) -> Vec<MesoNetwork> {
    indexed_map(windowing.bin_count(), |bin| {
        build_meso(graph, attribute, Some((windowing, bin)))
    })
}

/// Normalized stay/export/import decomposition of one label's flows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTriple {
    pub label: String,
    /// Formed here, stayed: self-loop share.
    pub stay: f64,
    /// Formed here, left: off-diagonal outflow share.
    pub export: f64,
    /// Formed elsewhere, absorbed: off-diagonal inflow share.
    pub import: f64,
    /// The denominator: self-loop + outflow + inflow weight.
    pub total: u64,
}

/// Splits each label's incident weight into stay/export/import fractions
/// summing to one. Labels with no incident weight are omitted.
pub fn flow_triples(net: &MesoNetwork) -> Vec<FlowTriple> {
    let n = net.node_count();
    let mut self_w = vec![0u64; n];
    let mut out_w = vec![0u64; n];
    let mut in_w = vec![0u64; n];
    for (&(f, t), &w) in &net.weights {
        if f == t {
            self_w[f as usize] += w;
        } else {
            out_w[f as usize] += w;
            in_w[t as usize] += w;
        }
    }
    (0..n)
        .filter_map(|i| {
            let total = self_w[i] + out_w[i] + in_w[i];
            if total == 0 {
                return None;
            }
            let d = total as f64;
            Some(FlowTriple {
                label: net.labels[i].clone(),
                stay: self_w[i] as f64 / d,
                export: out_w[i] as f64 / d,
                import: in_w[i] as f64 / d,
                total,
            })
        })
        .collect()
}

/// Whether a hierarchy curve ranks producers (out-strength) or absorbers
/// (in-strength) of migrant scholars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowDirection {
    Production,
    Absorption,
}

impl std::str::FromStr for FlowDirection {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "production" => Ok(FlowDirection::Production),
            "absorption" => Ok(FlowDirection::Absorption),
            other => Err(format!("unknown flow direction `{other}`")),
        }
    }
}

/// One rank step of a hierarchy curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyPoint {
    pub rank: usize,
    pub label: String,
    pub weight: u64,
    pub cumulative_fraction: f64,
}

/// Cumulative concentration of flow over ranked labels, with the minimal
/// prefix ("elite") covering the threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HierarchyCurve {
    pub direction: FlowDirection,
    pub threshold: f64,
    pub points: Vec<HierarchyPoint>,
    pub elite: Vec<String>,
}

impl HierarchyCurve {
    pub fn elite_size(&self) -> usize {
        self.elite.len()
    }
}

/// Ranks labels by migrant flow (off-diagonal strength by default; set
/// `include_self_loops` to count stay-at-home weight too) and returns the
/// cumulative-fraction curve plus the minimal prefix reaching `threshold`.
/// Ties rank lexicographically.
pub fn hierarchy_curve(
    net: &MesoNetwork,
    direction: FlowDirection,
    threshold: f64,
    include_self_loops: bool,
) -> HierarchyCurve {
    let n = net.node_count();
    let mut strength = vec![0u64; n];
    for (&(f, t), &w) in &net.weights {
        if f == t {
            if include_self_loops {
                strength[f as usize] += w;
            }
            continue;
        }
        match direction {
            FlowDirection::Production => strength[f as usize] += w,
            FlowDirection::Absorption => strength[t as usize] += w,
        }
    }
    let total: u64 = strength.iter().sum();
    let mut ranked: Vec<(usize, u64)> = (0..n).map(|i| (i, strength[i])).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| net.labels[a.0].cmp(&net.labels[b.0])));

    let mut points = Vec::with_capacity(n);
    let mut elite = Vec::new();
    let mut cumulative = 0u64;
    let mut reached = total == 0;
    for (rank, (i, w)) in ranked.into_iter().enumerate() {
        cumulative += w;
        let fraction = if total == 0 {
            0.0
        } else {
            cumulative as f64 / total as f64
        };
        if !reached {
            elite.push(net.labels[i].clone());
            if fraction >= threshold {
                reached = true;
            }
        }
        points.push(HierarchyPoint {
            rank: rank + 1,
            label: net.labels[i].clone(),
            weight: w,
            cumulative_fraction: fraction,
        });
    }
    HierarchyCurve {
        direction,
        threshold,
        points,
        elite,
    }
}

/// Elite sizes per window: the time evolution of how concentrated the
/// production (or absorption) of migrant scholars is.
pub fn hierarchy_series(
    graph: &GenealogyGraph,
    attribute: Attribute,
    windowing: TimeWindowing,
    direction: FlowDirection,
    threshold: f64,
) -> Vec<(usize, usize, usize)> {
    windowed_meso(graph, attribute, windowing)
        .iter()
        .enumerate()
        .map(|(bin, net)| {
            let curve = hierarchy_curve(net, direction, threshold, false);
            let active = curve.points.iter().filter(|p| p.weight > 0).count();
            (bin, curve.elite_size(), active)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::scholar::{Scholar, ScholarId};

    fn graph(records: Vec<(u64, Option<&str>, Option<i32>)>, edges: Vec<(u64, u64)>) -> GenealogyGraph {
        let mut b = GraphBuilder::new();
        for (id, country, year) in records {
            let mut s = Scholar::new(ScholarId(id), format!("s{id}"));
            if let Some(c) = country {
                s = s.with_country(c);
            }
            s.year = year;
            b.add_scholar(s).unwrap();
        }
        for (m, st) in edges {
            b.add_edge(ScholarId(m), ScholarId(st)).unwrap();
        }
        b.build().unwrap()
    }

    /// Network with weights set directly; labels must be sorted.
    fn net(labels: &[&str], weights: &[(&str, &str, u64)]) -> MesoNetwork {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let id = |l: &str| labels.iter().position(|x| x == l).unwrap() as u32;
        MesoNetwork {
            attribute: Attribute::Country,
            labels: labels.clone(),
            weights: weights
                .iter()
                .map(|&(f, t, w)| ((id(f), id(t)), w))
                .collect(),
            window: None,
            dropped: 0,
        }
    }

    #[test]
    fn cross_and_self_transitions_count() {
        let g = graph(
            vec![
                (1, Some("DE"), Some(1900)),
                (2, Some("US"), Some(1910)),
                (3, Some("DE"), Some(1912)),
            ],
            vec![(1, 2), (1, 3)],
        );
        let n = build_meso(&g, Attribute::Country, None);
        assert_eq!(n.weight("de", "us"), 1);
        assert_eq!(n.weight("de", "de"), 1);
        assert_eq!(n.dropped, 0);
    }

    #[test]
    fn missing_attribute_drops_edge() {
        let g = graph(
            vec![(1, Some("DE"), None), (2, None, None), (3, Some("FR"), None)],
            vec![(1, 2), (1, 3)],
        );
        let n = build_meso(&g, Attribute::Country, None);
        assert_eq!(n.total_weight(), 1);
        assert_eq!(n.dropped, 1);
    }

    #[test]
    fn three_edge_recount_oracle() {
        let edges = vec![(1, 2), (2, 3), (1, 4)];
        let records = vec![
            (1, Some("DE"), Some(1900)),
            (2, Some("US"), Some(1910)),
            (3, None, Some(1920)),
            (4, Some("DE"), Some(1915)),
        ];
        let g = graph(records.clone(), edges.clone());
        let n = build_meso(&g, Attribute::Country, None);
        // oracle: recount pairs with both countries present
        let country = |id: u64| records.iter().find(|r| r.0 == id).unwrap().1;
        let expected = edges
            .iter()
            .filter(|&&(m, s)| country(m).is_some() && country(s).is_some())
            .count() as u64;
        assert_eq!(n.total_weight(), expected);
        assert_eq!(n.total_weight() + n.dropped, edges.len() as u64);
    }

    #[test]
    fn windowed_edges_follow_student_year() {
        let g = graph(
            vec![
                (1, Some("DE"), Some(1890)),
                (2, Some("US"), Some(1905)),
                (3, Some("FR"), Some(1915)),
            ],
            vec![(1, 2), (2, 3)],
        );
        let w = TimeWindowing::new(1900, 1919, 10).unwrap();
        let nets = windowed_meso(&g, Attribute::Country, w);
        assert_eq!(nets[0].weight("de", "us"), 1);
        assert_eq!(nets[0].total_weight(), 1);
        assert_eq!(nets[1].weight("us", "fr"), 1);
        // conservation across windows
        let aggregate = build_meso(&g, Attribute::Country, None);
        let windowed_total: u64 = nets.iter().map(|n| n.total_weight()).sum();
        assert_eq!(windowed_total, aggregate.total_weight());
    }

    #[test]
    fn pure_self_loop_label_is_fully_selfish() {
        let n = net(&["i"], &[("i", "i", 5)]);
        let triples = flow_triples(&n);
        assert_eq!(triples.len(), 1);
        assert_eq!(
            (triples[0].stay, triples[0].export, triples[0].import),
            (1.0, 0.0, 0.0)
        );
    }

    #[test]
    fn flow_triple_hand_case() {
        // w(I,J)=2, w(J,I)=1, w(I,I)=1 -> I: D=4, (0.25, 0.5, 0.25).
        let n = net(&["i", "j"], &[("i", "j", 2), ("j", "i", 1), ("i", "i", 1)]);
        let triples = flow_triples(&n);
        let i = triples.iter().find(|t| t.label == "i").unwrap();
        assert_eq!((i.stay, i.export, i.import), (0.25, 0.5, 0.25));
    }

    #[test]
    fn triples_sum_to_one() {
        let n = net(
            &["a", "b", "c"],
            &[("a", "b", 3), ("b", "c", 2), ("c", "a", 7), ("b", "b", 4)],
        );
        for t in flow_triples(&n) {
            assert!((t.stay + t.export + t.import - 1.0).abs() < 1e-9, "{t:?}");
        }
    }

    #[test]
    fn sole_producer_has_elite_of_one() {
        let n = net(&["a", "b", "c"], &[("a", "b", 5), ("a", "c", 3)]);
        let c = hierarchy_curve(&n, FlowDirection::Production, 0.8, false);
        assert_eq!(c.elite, vec!["a".to_string()]);
    }

    #[test]
    fn uniform_ten_labels_need_eight_for_eighty_percent() {
        let labels: Vec<String> = (0..10).map(|i| format!("l{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let weights: Vec<(&str, &str, u64)> = (0..10)
            .map(|i| (refs[i], refs[(i + 1) % 10], 1))
            .collect();
        let n = net(&refs, &weights);
        let c = hierarchy_curve(&n, FlowDirection::Production, 0.8, false);
        assert_eq!(c.elite_size(), 8);
        let absorb = hierarchy_curve(&n, FlowDirection::Absorption, 0.8, false);
        assert_eq!(absorb.elite_size(), 8);
    }

    #[test]
    fn zipf_elite_matches_exhaustive_cumsum() {
        // 20 labels with off-diagonal out-weights ~ 1/rank (s = 1).
        let labels: Vec<String> = (0..21).map(|i| format!("l{i:02}")).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let weights: Vec<(&str, &str, u64)> = (0..20)
            .map(|i| (refs[i], refs[20], (1000 / (i + 1)) as u64))
            .collect();
        let n = net(&refs, &weights);
        let c = hierarchy_curve(&n, FlowDirection::Production, 0.8, false);

        // brute-force oracle over the same weights
        let mut ws: Vec<u64> = (0..20).map(|i| (1000 / (i + 1)) as u64).collect();
        ws.sort_unstable_by(|a, b| b.cmp(a));
        let total: u64 = ws.iter().sum();
        let mut acc = 0u64;
        let mut expected = 0usize;
        for w in ws {
            acc += w;
            expected += 1;
            if acc as f64 / total as f64 >= 0.8 {
                break;
            }
        }
        assert_eq!(c.elite_size(), expected);
    }

    #[test]
    fn curve_is_monotone_and_reaches_one() {
        let n = net(
            &["a", "b", "c"],
            &[("a", "b", 3), ("b", "a", 1), ("c", "a", 2), ("a", "a", 9)],
        );
        let c = hierarchy_curve(&n, FlowDirection::Production, 0.8, false);
        let fractions: Vec<f64> = c.points.iter().map(|p| p.cumulative_fraction).collect();
        assert!(fractions.windows(2).all(|p| p[0] <= p[1] + 1e-12));
        assert!((fractions.last().unwrap() - 1.0).abs() < 1e-12);
    }
}
