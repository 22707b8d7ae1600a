//! Littlewood–Paley cutoffs on the integer lattice.
//!
//! χ(x) = 1 on |x| ≤ 1, cos²(π(|x|−1)/2) on 1 < |x| < 2, 0 beyond.
//! φ(x) = χ(x) − χ(2x), φ_N(k) = φ(k/N) for N ≥ 1 and φ₀(k) = χ(2k).
//! The nonhomogeneous family {φ₀, φ₁, φ₂, φ₄, …} telescopes to 1.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Sup of |φ′|: φ′ = χ′(x) − 2χ′(2x) with disjoint supports and sup|χ′| = π/2.
pub const PHI_LIPSCHITZ: f64 = PI;

pub fn chi(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        1.0
    } else if a < 2.0 {
        let c = (0.5 * PI * (a - 1.0)).cos();
        c * c
    } else {
        0.0
    }
}

pub fn phi(x: f64) -> f64 {
    chi(x) - chi(2.0 * x)
}

/// φ_N(k); `n` must be dyadic (checked in debug builds).
#[inline]
pub fn phi_n(n: u64, k: i64) -> f64 {
    debug_assert!(is_dyadic(n));
    if n == 0 {
        chi(2.0 * k as f64)
    } else {
        phi(k as f64 / n as f64)
    }
}

/// Σ_{M ≤ N} φ_M(k) = χ(k/N), and χ(2k) for N = 0.
#[inline]
pub fn phi_leq(n: u64, k: i64) -> f64 {
    if n == 0 {
        chi(2.0 * k as f64)
    } else {
        chi(k as f64 / n as f64)
    }
}

/// Closed support of φ_N on the integers, as |k| ∈ [lo, hi].
pub fn support(n: u64) -> (u64, u64) {
    if n == 0 {
        (0, 0)
    } else {
        // φ(x) > 0 exactly for 1/2 < |x| < 2.
        (n / 2 + 1, 2 * n - 1)
    }
}

pub fn is_dyadic(n: u64) -> bool {
    n == 0 || n.is_power_of_two()
}

pub fn check_dyadic(n: u64) -> Result<()> {
    if is_dyadic(n) {
        Ok(())
    } else {
        Err(Error::NotDyadic(n))
    }
}

/// Nonhomogeneous dyadic numbers 0, 1, 2, 4, …, up to and including `max`.
pub fn dyadics_upto(max: u64) -> Vec<u64> {
    let mut out = vec![0];
    let mut n = 1u64;
    while n <= max {
        out.push(n);
        n *= 2;
    }
    out
}

/// The dyadic N ≥ 1 with N ≤ m < 2N, or 0 for m = 0.
pub fn dyadic_floor(m: u64) -> u64 {
    if m == 0 {
        0
    } else {
        1u64 << (63 - m.leading_zeros())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_profile() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(-1.0), 1.0);
        assert!((chi(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(chi(2.0), 0.0);
        assert_eq!(chi(-7.0), 0.0);
    }

    #[test]
    fn phi_on_integers() {
        assert_eq!(phi_n(0, 0), 1.0);
        assert_eq!(phi_n(0, 1), 0.0);
        assert_eq!(phi_n(1, 1), 1.0);
        assert_eq!(phi_n(1, 0), 0.0);
        assert_eq!(phi_n(4, 16), 0.0);
    }

    #[test]
    fn support_is_tight() {
        for n in [1u64, 2, 4, 8, 64] {
            let (lo, hi) = support(n);
            for k in 0..(4 * n as i64 + 2) {
                let inside = (k as u64) >= lo && (k as u64) <= hi;
                assert_eq!(phi_n(n, k) != 0.0, inside, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn partition_small() {
        for k in -300i64..=300 {
            let s: f64 = dyadics_upto(1 << 10).iter().map(|&n| phi_n(n, k)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dyadic_helpers() {
        assert!(is_dyadic(0) && is_dyadic(1) && is_dyadic(64));
        assert!(!is_dyadic(3) && !is_dyadic(12));
        assert_eq!(dyadic_floor(0), 0);
        assert_eq!(dyadic_floor(1), 1);
        assert_eq!(dyadic_floor(7), 4);
        assert_eq!(dyadic_floor(8), 8);
        assert_eq!(dyadics_upto(8), vec![0, 1, 2, 4, 8]);
    }

    #[test]
    fn lipschitz_constant() {
        let h = 1e-6;
        let mut max: f64 = 0.0;
        for i in 0..40000 {
            let x = 0.25 + i as f64 * 1e-4;
            max = max.max(((phi(x + h) - phi(x - h)) / (2.0 * h)).abs());
        }
        assert!(max <= PHI_LIPSCHITZ + 1e-6 && max > PHI_LIPSCHITZ - 1e-3);
    }
}
