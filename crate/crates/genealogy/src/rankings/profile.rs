//! Time prevalence profiles and the Kolmogorov-Smirnov distance between
//! their volume-normalized forms.

use serde::{Deserialize, Serialize};

use crate::window::AbundanceTable;

/// Per-label activity over the window grid.
///
/// `raw[t]` is the share of the window's attributed scholars carrying this
/// label; `normalized[t]` rescales the raw profile to unit volume so that
/// labels of very different total production become comparable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub label: String,
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
}

/// Builds one profile per label. Labels whose profile is identically zero
/// (possible when every occurrence falls outside the windowing) cannot be
/// normalized and are dropped with a warning.
pub fn build_profiles(table: &AbundanceTable) -> Vec<Profile> {
    let bins = table.windows.bin_count();
    let mut profiles = Vec::with_capacity(table.labels.len());
    for (label, row) in table.labels.iter().zip(&table.counts) {
        let raw: Vec<f64> = (0..bins)
            .map(|t| {
                let total = table.attributed_totals[t];
                if total == 0 {
                    0.0
                } else {
                    row[t] as f64 / total as f64
                }
            })
            .collect();
        let volume: f64 = raw.iter().sum();
        if volume <= 0.0 {
            log::warn!("label `{label}` has an all-zero profile; excluded from clustering");
            continue;
        }
        let normalized = raw.iter().map(|v| v / volume).collect();
        profiles.push(Profile {
            label: label.clone(),
            raw,
            normalized,
        });
    }
    profiles
}

/// Kolmogorov-Smirnov distance between two normalized profiles on the same
/// window grid: the maximum absolute gap between their running sums.
pub fn ks_distance(a: &Profile, b: &Profile) -> f64 {
    assert_eq!(
        a.normalized.len(),
        b.normalized.len(),
        "profiles must share a window grid"
    );
    let mut cdf_a = 0.0;
    let mut cdf_b = 0.0;
    let mut max_gap = 0.0f64;
    for (&fa, &fb) in a.normalized.iter().zip(&b.normalized) {
        cdf_a += fa;
        cdf_b += fb;
        max_gap = max_gap.max((cdf_a - cdf_b).abs());
    }
    max_gap.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::{Attribute, TimeWindowing};

    fn profile(label: &str, normalized: &[f64]) -> Profile {
        Profile {
            label: label.into(),
            raw: normalized.to_vec(),
            normalized: normalized.to_vec(),
        }
    }

    fn table(labels: &[&str], counts: &[&[u64]], totals: &[u64]) -> AbundanceTable {
        AbundanceTable {
            attribute: Attribute::Country,
            windows: TimeWindowing::new(1900, 1900 + 10 * totals.len() as i32 - 1, 10).unwrap(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            counts: counts.iter().map(|r| r.to_vec()).collect(),
            attributed_totals: totals.to_vec(),
            dated_totals: totals.to_vec(),
            excluded: 0,
        }
    }

    #[test]
    fn uniform_profile() {
        let t = table(&["i"], &[&[2, 2]], &[4, 4]);
        let p = build_profiles(&t);
        assert_eq!(p[0].raw, vec![0.5, 0.5]);
        assert_eq!(p[0].normalized, vec![0.5, 0.5]);
    }

    #[test]
    fn normalization_matches_hand_computation() {
        let t = table(&["i"], &[&[1, 0, 3]], &[10, 10, 10]);
        let p = build_profiles(&t);
        assert_eq!(p[0].raw, vec![0.1, 0.0, 0.3]);
        let expected = [0.25, 0.0, 0.75];
        for (got, want) in p[0].normalized.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn all_zero_label_is_excluded() {
        let t = table(&["dead", "live"], &[&[0, 0], &[1, 1]], &[5, 5]);
        let p = build_profiles(&t);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].label, "live");
    }

    #[test]
    fn ks_of_identical_profiles_is_zero() {
        let a = profile("a", &[0.3, 0.3, 0.4]);
        assert_eq!(ks_distance(&a, &a), 0.0);
    }

    #[test]
    fn ks_of_disjoint_mass_is_one() {
        let a = profile("a", &[1.0, 0.0]);
        let b = profile("b", &[0.0, 1.0]);
        assert_eq!(ks_distance(&a, &b), 1.0);
    }

    #[test]
    fn ks_half_case() {
        let a = profile("a", &[0.5, 0.5]);
        let b = profile("b", &[0.0, 1.0]);
        assert!((ks_distance(&a, &b) - 0.5).abs() < 1e-12);
    }
}
