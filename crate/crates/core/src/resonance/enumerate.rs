//! Bounded, lazy enumeration of Γ₃(k) = {k₁+k₂+k₃ = k} and its D-subsets.
//!
//! The fast D¹ routine works in pair-sum coordinates pᵢ = k − kᵢ (so p₁ = k₂+k₃
//! etc., p₁+p₂+p₃ = 2k), which is a bijection of Γ₃(k) onto {Σpᵢ = 2k}. For
//! k ≠ 0 a D¹ triple has exactly two pair sums with |p| ≤ |k|/2^9; the third is
//! then forced, so D¹(k) has at most 3·(2L)² points, L = ⌊|k|/2^9⌋.

use super::{classify, d_class, DClass, TripleClass, D1_SHIFT};
use crate::error::{Error, Result};
use crate::fourier_core::cutoff::{check_dyadic, dyadic_floor};

/// All triples in Γ₃(k) with |kᵢ| ≤ bound, lexicographic in (k₁, k₂).
pub fn enumerate_gamma3(k: i64, bound: i64) -> Result<impl Iterator<Item = TripleClass>> {
    if bound < 0 {
        return Err(Error::InvalidInput(format!("negative bound {bound}")));
    }
    Ok((-bound..=bound).flat_map(move |k1| {
        let rest = k - k1;
        let lo = (-bound).max(rest - bound);
        let hi = bound.min(rest + bound);
        (lo..=hi).map(move |k2| classify(k1, k2, rest - k2))
    }))
}

/// #Γ₃(k) ∩ [−bound, bound]³ by counting k₁ slices.
pub fn gamma3_count(k: i64, bound: i64) -> u64 {
    (-bound..=bound)
        .map(|k1| {
            let rest = k - k1;
            let lo = (-bound).max(rest - bound);
            let hi = bound.min(rest + bound);
            (hi - lo + 1).max(0) as u64
        })
        .sum()
}

/// D¹_M(k): D¹ triples with M ≤ m_min < 2M (M = 0 selects m_min = 0, empty in D).
pub fn enumerate_d1_m(
    k: i64,
    m: u64,
    bound: i64,
) -> Result<impl Iterator<Item = TripleClass>> {
    check_dyadic(m)?;
    Ok(enumerate_gamma3(k, bound)?
        .filter(move |c| c.d_class == DClass::D1 && dyadic_floor(c.m_min) == m))
}

/// D²(k) filtered by an extra predicate, e.g. k_med < k^{2/3}.
pub fn enumerate_d2<P>(k: i64, bound: i64, predicate: P) -> Result<impl Iterator<Item = TripleClass>>
where
    P: Fn(&TripleClass) -> bool,
{
    Ok(enumerate_gamma3(k, bound)?.filter(move |c| c.d_class == DClass::D2 && predicate(c)))
}

/// D¹(k) ∩ [−bound, bound]³ in lexicographic order, via pair sums.
pub fn d1_triples(k: i64, bound: i64) -> Vec<[i64; 3]> {
    let l = (k.unsigned_abs() >> D1_SHIFT) as i64;
    let mut out = Vec::new();
    if l == 0 {
        return out;
    }
    for big in 0..3 {
        for pa in -l..=l {
            if pa == 0 {
                continue;
            }
            for pb in -l..=l {
                if pb == 0 {
                    continue;
                }
                let pbig = 2 * k - pa - pb;
                let mut p = [0i64; 3];
                let (a, b) = match big {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                p[big] = pbig;
                p[a] = pa;
                p[b] = pb;
                let t = [k - p[0], k - p[1], k - p[2]];
                if t.iter().all(|x| x.abs() <= bound) {
                    debug_assert_eq!(d_class(t[0], t[1], t[2]), DClass::D1);
                    out.push(t);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// D¹_M(k) via pair sums.
pub fn d1_triples_in_bucket(k: i64, m: u64, bound: i64) -> Vec<[i64; 3]> {
    d1_triples(k, bound)
        .into_iter()
        .filter(|t| {
            let mm = [(t[1] + t[2]).unsigned_abs(), (t[0] + t[2]).unsigned_abs(), (t[0] + t[1]).unsigned_abs()];
            dyadic_floor(*mm.iter().min().unwrap()) == m
        })
        .collect()
}

/// D² triples of Γ₃(k) ∩ [−bound, bound]³ whose median |kᵢ| is below `cutoff`.
///
/// Median below the cutoff means at least two |kᵢ| are below it, so the scan
/// runs over pairs of small entries; each triple is attributed to the first
/// qualifying pair of positions.
pub fn d2_triples_with_small_median(k: i64, bound: i64, cutoff: f64) -> Vec<[i64; 3]> {
    if cutoff <= 0.0 {
        return Vec::new();
    }
    // largest integer strictly below the cutoff
    let c = (cutoff.ceil() as i64 - 1).min(bound);
    let mut out = Vec::new();
    for (i, j, other) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
        for a in -c..=c {
            for b in -c..=c {
                let third = k - a - b;
                if third.abs() > bound {
                    continue;
                }
                let mut t = [0i64; 3];
                t[i] = a;
                t[j] = b;
                t[other] = third;
                // avoid double counting triples with more than two small entries
                let skip = match (i, j) {
                    (0, 2) => t[1].abs() <= c,
                    (1, 2) => t[0].abs() <= c,
                    _ => false,
                };
                if !skip && d_class(t[0], t[1], t[2]) == DClass::D2 {
                    out.push(t);
                }
            }
        }
    }
    out.sort_unstable();
    out
}
