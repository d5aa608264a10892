//! Kinship-style indicators of the family aggregate network, their
//! multinomial null model, and family-by-attribute incidence matrices.

use std::collections::HashMap;

use serde::Serialize;

use crate::families::resolve::FamilyPartition;
use crate::graph::GenealogyGraph;
use crate::par::indexed_map;
use crate::seeding;
use crate::window::Attribute;

/// Topological indicators of the aggregate family network `W(F, G)` =
/// number of original advisor edges from family F to family G. All
/// original edges count, including the ones cut during resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinshipIndicators {
    /// Fraction of edges staying inside one family.
    pub endogamy: f64,
    /// Herfindahl concentration of the link weights over ordered family
    /// pairs: 1 when a single pair carries everything, 1/n^2 when weight
    /// spreads evenly over all n^2 pairs.
    pub concentration: f64,
    /// Balance of reciprocal inter-family fluxes: 1 under perfect
    /// symmetry, 0 under total unbalance. Degenerate (no inter-family
    /// weight) networks count as vacuously symmetric.
    pub symmetry: f64,
    pub families: usize,
}

/// Aggregate family network as a sparse ordered-pair -> weight map.
fn family_weights(graph: &GenealogyGraph, partition: &FamilyPartition) -> HashMap<(u32, u32), u64> {
    let mut weights: HashMap<(u32, u32), u64> = HashMap::new();
    for &(mentor, student) in graph.edges() {
        let f = partition.family_of(mentor).expect("edge endpoint has a family");
        let g = partition.family_of(student).expect("edge endpoint has a family");
        *weights.entry((f, g)).or_insert(0) += 1;
    }
    weights
}

fn indicators_of(weights: &HashMap<(u32, u32), u64>, families: usize, exclude_diagonal: bool) -> KinshipIndicators {
    let total: u64 = weights.values().sum();
    let diagonal: u64 = weights
        .iter()
        .filter(|(&(f, g), _)| f == g)
        .map(|(_, &w)| w)
        .sum();
    let endogamy = if total == 0 {
        0.0
    } else {
        diagonal as f64 / total as f64
    };

    let concentration = {
        let denom = if exclude_diagonal { total - diagonal } else { total };
        if denom == 0 {
            0.0
        } else {
            weights
                .iter()
                .filter(|(&(f, g), _)| !(exclude_diagonal && f == g))
                .map(|(_, &w)| (w as f64 / denom as f64).powi(2))
                .sum()
        }
    };

    // reciprocal balance over unordered inter-family pairs
    let mut matched = 0u64; // sum of 2 * min(w_fg, w_gf)
    let mut flux = 0u64; // sum of w_fg + w_gf
    for (&(f, g), &w) in weights {
        if f >= g {
            continue;
        }
        let back = weights.get(&(g, f)).copied().unwrap_or(0);
        matched += 2 * w.min(back);
        flux += w + back;
    }
    // one-way pairs whose reverse entry exists but forward does not are
    // already covered above only when f < g held; catch the rest
    for (&(f, g), &w) in weights {
        if f <= g {
            continue;
        }
        if !weights.contains_key(&(g, f)) {
            flux += w;
        }
    }
    let symmetry = if flux == 0 {
        1.0
    } else {
        matched as f64 / flux as f64
    };

    KinshipIndicators {
        endogamy,
        concentration,
        symmetry,
        families,
    }
}

/// Computes the kinship indicators of the resolved partition over all
/// original advisor edges. `exclude_diagonal` restricts the concentration
/// index to inter-family pairs (normalized by inter-family weight).
pub fn kinship_indicators(
    graph: &GenealogyGraph,
    partition: &FamilyPartition,
    exclude_diagonal: bool,
) -> KinshipIndicators {
    let weights = family_weights(graph, partition);
    indicators_of(&weights, partition.family_count(), exclude_diagonal)
}

/// Observed indicators against the multinomial reshuffle distribution.
#[derive(Debug, Clone, Serialize)]
pub struct NullModelReport {
    pub observed: KinshipIndicators,
    pub null_mean: KinshipIndicators,
    pub null_std: KinshipIndicators,
    pub replicates: usize,
}

impl NullModelReport {
    /// How many null standard deviations the observed value sits above the
    /// null mean.
    pub fn endogamy_excess(&self) -> f64 {
        (self.observed.endogamy - self.null_mean.endogamy) / self.null_std.endogamy
    }

    pub fn symmetry_gap(&self) -> f64 {
        (self.observed.symmetry - self.null_mean.symmetry).abs() / self.null_std.symmetry
    }
}

/// Multinomial null model: the total edge count is redistributed over
/// ordered family pairs with probability proportional to
/// `out-marginal(F) * in-marginal(G)`. Sampling draws each edge's source
/// and target family independently from the marginals, which is exactly
/// that product multinomial. Deterministic for fixed seed; replicates run
/// in parallel.
pub fn null_model(
    graph: &GenealogyGraph,
    partition: &FamilyPartition,
    replicates: usize,
    seed: u64,
    exclude_diagonal: bool,
) -> NullModelReport {
    use rand::Rng;

    let weights = family_weights(graph, partition);
    let families = partition.family_count();
    let observed = indicators_of(&weights, families, exclude_diagonal);
    let total: u64 = weights.values().sum();

    // cumulative marginals for binary-search sampling
    let mut out_m = vec![0u64; families];
    let mut in_m = vec![0u64; families];
    for (&(f, g), &w) in &weights {
        out_m[f as usize] += w;
        in_m[g as usize] += w;
    }
    let cumulate = |m: &[u64]| -> Vec<u64> {
        let mut acc = 0u64;
        m.iter()
            .map(|&w| {
                acc += w;
                acc
            })
            .collect()
    };
    let out_cdf = cumulate(&out_m);
    let in_cdf = cumulate(&in_m);
    let draw = |cdf: &[u64], u: u64| -> u32 { cdf.partition_point(|&acc| acc <= u) as u32 };

    let samples: Vec<KinshipIndicators> = indexed_map(replicates, |rep| {
        let mut rng = seeding::child_rng(seed, rep as u64);
        let mut reshuffled: HashMap<(u32, u32), u64> = HashMap::new();
        for _ in 0..total {
            let f = draw(&out_cdf, rng.random_range(0..total));
            let g = draw(&in_cdf, rng.random_range(0..total));
            *reshuffled.entry((f, g)).or_insert(0) += 1;
        }
        indicators_of(&reshuffled, families, exclude_diagonal)
    });

    let n = samples.len().max(1) as f64;
    let mean = |f: fn(&KinshipIndicators) -> f64| samples.iter().map(f).sum::<f64>() / n;
    let std = |f: fn(&KinshipIndicators) -> f64, mu: f64| {
        (samples.iter().map(|s| (f(s) - mu).powi(2)).sum::<f64>() / n).sqrt()
    };
    let (me, mc, ms) = (
        mean(|s| s.endogamy),
        mean(|s| s.concentration),
        mean(|s| s.symmetry),
    );
    NullModelReport {
        observed,
        null_mean: KinshipIndicators {
            endogamy: me,
            concentration: mc,
            symmetry: ms,
            families,
        },
        null_std: KinshipIndicators {
            endogamy: std(|s| s.endogamy, me),
            concentration: std(|s| s.concentration, mc),
            symmetry: std(|s| s.symmetry, ms),
            families,
        },
        replicates,
    }
}

/// Binary presence matrix of attribute values across families.
#[derive(Debug, Clone, Serialize)]
pub struct IncidenceMatrix {
    pub attribute: Attribute,
    /// Families ranked by size, largest first.
    pub family_roots: Vec<String>,
    /// Attribute values ranked by corpus abundance, most common first.
    pub values: Vec<String>,
    /// `cells[family_rank][value_rank]`.
    pub cells: Vec<Vec<bool>>,
    /// Values present per family.
    pub row_marginals: Vec<u32>,
    /// Families containing each value.
    pub column_marginals: Vec<u32>,
}

/// Marks which attribute values occur in which families. Families are
/// ranked by size, values by global abundance (ties lexicographic).
pub fn incidence_matrix(
    graph: &GenealogyGraph,
    partition: &FamilyPartition,
    attribute: Attribute,
) -> IncidenceMatrix {
    let sizes = partition.ranked_sizes(graph);
    let family_rank: HashMap<u32, usize> = sizes
        .rows
        .iter()
        .enumerate()
        .map(|(rank, row)| (row.family, rank))
        .collect();

    let mut abundance: HashMap<&str, u64> = HashMap::new();
    for scholar in graph.scholars() {
        if let Some(value) = attribute.of(scholar) {
            *abundance.entry(value).or_insert(0) += 1;
        }
    }
    let mut values: Vec<(&str, u64)> = abundance.into_iter().collect();
    values.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let value_rank: HashMap<&str, usize> = values
        .iter()
        .enumerate()
        .map(|(rank, &(v, _))| (v, rank))
        .collect();

    let mut cells = vec![vec![false; values.len()]; sizes.rows.len()];
    for (pos, scholar) in graph.scholars().iter().enumerate() {
        let (Some(family), Some(value)) =
            (partition.family_of(pos as u32), attribute.of(scholar))
        else {
            continue;
        };
        cells[family_rank[&family]][value_rank[value]] = true;
    }

    let row_marginals = cells
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count() as u32)
        .collect();
    let column_marginals = (0..values.len())
        .map(|v| cells.iter().filter(|row| row[v]).count() as u32)
        .collect();

    IncidenceMatrix {
        attribute,
        family_roots: sizes.rows.iter().map(|r| r.root_name.clone()).collect(),
        values: values.into_iter().map(|(v, _)| v.to_string()).collect(),
        cells,
        row_marginals,
        column_marginals,
    }
}
