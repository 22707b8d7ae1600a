//! Exhaustive scans of the size relations inside D¹ and D².
//!
//! The comparabilities "|k₁| ∼ |k₂| ∼ |k₃| ∼ |k|" on D¹ and "m_med ≳ max|kᵢ|"
//! on D² come without constants; these scans measure the worst case on a box.

use serde::Serialize;

use super::d1_triples;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct D1Structure {
    pub triples: u64,
    /// max over D¹ of max|kᵢ| / min|kᵢ|.
    pub spread: f64,
    /// max over D¹ of |k| / (largest pair sum).
    pub k_over_pair: f64,
    /// max over D¹ of max|kᵢ| / |k|.
    pub entry_over_k: f64,
}

/// Scan D¹ ∩ [−bound, bound]³ through the pair-sum enumeration.
pub fn d1_structure(bound: i64) -> D1Structure {
    let mut r = D1Structure { triples: 0, spread: 0.0, k_over_pair: 0.0, entry_over_k: 0.0 };
    for k in -3 * bound..=3 * bound {
        for t in d1_triples(k, bound) {
            let a = t.map(i64::unsigned_abs);
            let (lo, hi) = (*a.iter().min().unwrap(), *a.iter().max().unwrap());
            let pair = [t[1] + t[2], t[0] + t[2], t[0] + t[1]].map(i64::unsigned_abs);
            let kk = k.unsigned_abs() as f64;
            r.triples += 1;
            r.spread = r.spread.max(hi as f64 / lo as f64);
            r.k_over_pair = r.k_over_pair.max(kk / *pair.iter().max().unwrap() as f64);
            r.entry_over_k = r.entry_over_k.max(hi as f64 / kk);
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct D2Structure {
    /// Scanned representatives (one per orbit under permutations and k ↦ −k).
    pub representatives: u64,
    /// max over D² of max|kᵢ| / m_med.
    pub entry_over_median: f64,
    pub witness: [i64; 3],
}

/// Scan D² ∩ [−bound, bound]³. The relation is invariant under permuting
/// and negating the triple, so only k₁ = max|kᵢ| ≥ 0 is visited.
pub fn d2_structure(bound: i64) -> D2Structure {
    let mut r = D2Structure { representatives: 0, entry_over_median: 0.0, witness: [0; 3] };
    // best as a fraction hi/med kept in integers to avoid per-triple division
    let (mut num, mut den) = (0u64, 1u64);
    for k1 in 1..=bound {
        for k2 in -k1..=k1 {
            let m3 = (k1 + k2).unsigned_abs();
            if m3 == 0 {
                continue;
            }
            for k3 in -k1..=k1 {
                let (m1, m2) = ((k2 + k3).unsigned_abs(), (k1 + k3).unsigned_abs());
                if m1 == 0 || m2 == 0 {
                    continue;
                }
                let med = m1.max(m2).min(m1.max(m3)).min(m2.max(m3));
                let k = (k1 + k2 + k3).unsigned_abs();
                if med << super::D1_SHIFT <= k {
                    continue;
                }
                r.representatives += 1;
                let hi = k1 as u64;
                if hi * den > num * med {
                    (num, den) = (hi, med);
                    r.witness = [k1, k2, k3];
                }
            }
        }
    }
    r.entry_over_median = num as f64 / den as f64;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::{classify, DClass};

    fn brute_d2(bound: i64) -> f64 {
        let mut worst = 0.0f64;
        for a in -bound..=bound {
            for b in -bound..=bound {
                for c in -bound..=bound {
                    let t = classify(a, b, c);
                    if t.d_class == DClass::D2 {
                        let hi = a.abs().max(b.abs()).max(c.abs()) as f64;
                        worst = worst.max(hi / t.m_med as f64);
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn d2_matches_brute_force() {
        for bound in [3, 10, 25] {
            assert_eq!(d2_structure(bound).entry_over_median, brute_d2(bound));
        }
        let w = d2_structure(25).witness;
        assert_eq!(classify(w[0], w[1], w[2]).d_class, DClass::D2);
    }

    #[test]
    fn d1_empty_below_threshold() {
        // |k| < 512 leaves no room for m_med ≤ |k|/512 with nonzero pair sums
        assert_eq!(d1_structure(170).triples, 0);
        let r = d1_structure(600);
        assert!(r.triples > 0);
        assert!(r.spread >= 1.0);
    }
}
