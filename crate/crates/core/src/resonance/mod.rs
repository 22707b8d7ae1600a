//! Exact resonance arithmetic and classification of frequency triples.
//!
//! For a triple (k₁,k₂,k₃) with k = k₁+k₂+k₃ the pair sums are
//! m₁ = |k₂+k₃|, m₂ = |k₁+k₃|, m₃ = |k₁+k₂| and
//! Ω₃ = k₁³+k₂³+k₃³−k³ = −3(k₁+k₂)(k₁+k₃)(k₂+k₃).

mod enumerate;
mod structure;

pub use enumerate::{
    d1_triples, d1_triples_in_bucket, d2_triples_with_small_median, enumerate_d1_m,
    enumerate_d2, enumerate_gamma3, gamma3_count,
};
pub use structure::{d1_structure, d2_structure, D1Structure, D2Structure};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier_core::cutoff::dyadic_floor;

/// D¹ cut: m_med ≤ |k| / 2^9.
pub const D1_SHIFT: u32 = 9;

/// Ω₃ from the factored form. Exact for |kᵢ| ≤ 2^40.
#[inline]
pub fn omega3(k1: i64, k2: i64, k3: i64) -> i128 {
    let (a, b, c) = (k1 as i128, k2 as i128, k3 as i128);
    -3 * (a + b) * (a + c) * (b + c)
}

/// Ω₃ from the sum of cubes. Exact for |kᵢ| ≤ 2^40.
#[inline]
pub fn omega3_poly(k1: i64, k2: i64, k3: i64) -> i128 {
    let (a, b, c) = (k1 as i128, k2 as i128, k3 as i128);
    let k = a + b + c;
    a * a * a + b * b * b + c * c * c - k * k * k
}

/// Overflow-checked Ω₃ for arbitrary i64 input.
pub fn checked_omega3(k1: i64, k2: i64, k3: i64) -> Option<i128> {
    let (a, b, c) = (k1 as i128, k2 as i128, k3 as i128);
    (a + b)
        .checked_mul(a + c)?
        .checked_mul(b + c)?
        .checked_mul(-3)
}

fn sum_of_cubes(k: &[i64]) -> Result<i128> {
    let s: i128 = k.iter().map(|&x| x as i128).sum();
    if s != 0 {
        return Err(Error::Domain(format!("frequencies sum to {s}, not 0")));
    }
    Ok(k.iter().map(|&x| (x as i128).pow(3)).sum())
}

/// Ω₅ = Σ kᵢ³ on Γ⁵(0) = {k₁+…+k₆ = 0}.
pub fn omega5(k: &[i64; 6]) -> Result<i128> {
    sum_of_cubes(k)
}

/// Ω₇ = Σ kᵢ³ on Γ⁷(0) = {k₁+…+k₈ = 0}.
pub fn omega7(k: &[i64; 8]) -> Result<i128> {
    sum_of_cubes(k)
}

/// Membership in the nonresonant set D and its split D = D¹ ⊔ D².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DClass {
    /// Some pair sum vanishes.
    None,
    /// All pair sums nonzero and m_med ≤ 2^{−9}|k|.
    D1,
    /// The rest of D.
    D2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleClass {
    pub triple: [i64; 3],
    pub k: i64,
    /// (|k₂+k₃|, |k₁+k₃|, |k₁+k₂|)
    pub m: [u64; 3],
    pub m_min: u64,
    pub m_med: u64,
    pub omega3: i128,
    /// j ∈ {1,2,3} with χ_{A_j} = 1.
    pub a_class: u8,
    pub d_class: DClass,
}

impl TripleClass {
    /// Dyadic M with M ≤ m_min < 2M (0 when m_min = 0).
    pub fn m_bucket(&self) -> u64 {
        dyadic_floor(self.m_min)
    }

    /// Median of |k₁|, |k₂|, |k₃|.
    pub fn k_med(&self) -> u64 {
        median(self.triple.map(i64::unsigned_abs))
    }

    pub fn m_max(&self) -> u64 {
        self.m[0].max(self.m[1]).max(self.m[2])
    }
}

fn median(mut v: [u64; 3]) -> u64 {
    v.sort_unstable();
    v[1]
}

/// χ_{A_j}: A₁ if m₁ is minimal, else A₂ if m₂ is minimal, else A₃.
#[inline]
pub fn a_class(k1: i64, k2: i64, k3: i64) -> u8 {
    let m1 = (k2 + k3).unsigned_abs();
    let m2 = (k1 + k3).unsigned_abs();
    let m3 = (k1 + k2).unsigned_abs();
    if m1 <= m2 && m1 <= m3 {
        1
    } else if m2 <= m3 {
        2
    } else {
        3
    }
}

#[inline]
pub fn d_class(k1: i64, k2: i64, k3: i64) -> DClass {
    let p = [(k2 + k3).unsigned_abs(), (k1 + k3).unsigned_abs(), (k1 + k2).unsigned_abs()];
    if p.contains(&0) {
        return DClass::None;
    }
    let k = (k1 + k2 + k3).unsigned_abs();
    if median(p) << D1_SHIFT <= k {
        DClass::D1
    } else {
        DClass::D2
    }
}

pub fn classify(k1: i64, k2: i64, k3: i64) -> TripleClass {
    let m = [(k2 + k3).unsigned_abs(), (k1 + k3).unsigned_abs(), (k1 + k2).unsigned_abs()];
    let mut s = m;
    s.sort_unstable();
    TripleClass {
        triple: [k1, k2, k3],
        k: k1 + k2 + k3,
        m,
        m_min: s[0],
        m_med: s[1],
        omega3: omega3(k1, k2, k3),
        a_class: a_class(k1, k2, k3),
        d_class: d_class(k1, k2, k3),
    }
}
