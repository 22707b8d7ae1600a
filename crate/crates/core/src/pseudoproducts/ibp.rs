//! Integration by parts for the quadrilinear form
//!
//! ```text
//! T_{M,N}(f₁,f₂,g) = ∫ P_N Π³_{1,M}(f₁,f₂,g) · P_N ∂ₓg
//! ```
//!
//! Writing k = (k₁+k₂) + k₃ and symmetrising k₃ ↔ −k (which swaps m₁ and m₂,
//! so preserves χ_{A₃}) gives, with ⟨F,G⟩ = ∫ F G,
//!
//! ```text
//! T = −2πi·M·[⟨Π³_{η̃₁+η̃₂,M}(f₁,f₂,P_{∼N}g), P_N g⟩ + ⟨Π³_{η₂,M}(f₁,f₂,P_N g), P_N g⟩]
//! ```
//!
//! where P_{∼N} = Σ_{N/4 ≤ N₃ ≤ 4N} P_{N₃} equals 1 on every k₃ with
//! |k₃ − k| < 2M ≤ N/8 and k ∈ supp φ_N.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{pseudoproduct_restricted, SymbolFn};
use crate::error::{Error, Result};
use crate::fourier_core::cutoff::{check_dyadic, phi_n, support};
use crate::fourier_core::{deriv, FourierField};

/// η̃₁, η̃₂, η₂ and η₃ = η̃₁ + η̃₂ + η₂ for a given (M, N).
#[derive(Clone, Debug)]
pub struct IbpSymbols {
    pub eta1_tilde: SymbolFn,
    pub eta2_tilde: SymbolFn,
    pub eta2: SymbolFn,
    pub eta3: SymbolFn,
}

fn in_support(m: u64, s: i64) -> bool {
    let (lo, hi) = support(m);
    let a = s.unsigned_abs();
    a >= lo && a <= hi
}

/// The symbols of the integration-by-parts identity.
///
/// Declared bounds (uniform in M, N with 16M ≤ N):
/// |η̃₁| ≤ 2 since |k₁+k₂| < 2M; |η₂| ≤ 1;
/// |η̃₂| ≤ 2·sup_ξ |φ′(ξ)|(|ξ| + 1/8) < 6 by the mean value theorem;
/// |η₃| ≤ |η̃₁ + η₂| + |η̃₂| ≤ 1 + 6.
pub fn ibp_symbols(m: u64, n: u64) -> Result<IbpSymbols> {
    check_scales(m, n)?;
    let mf = m as f64;
    let e1 = SymbolFn::real(2.0, move |k1, k2, k3| {
        let s = k1 + k2;
        if in_support(m, s) {
            phi_n(n, s + k3) * s as f64 / mf
        } else {
            0.0
        }
    });
    let e2t = SymbolFn::real(6.0, move |k1, k2, k3| {
        let s = k1 + k2;
        if in_support(m, s) {
            (phi_n(n, s + k3) - phi_n(n, k3)) * k3 as f64 / mf
        } else {
            0.0
        }
    });
    let e2 = SymbolFn::real(1.0, move |k1, k2, _| {
        let s = k1 + k2;
        if in_support(m, s) {
            -0.5 * s as f64 / mf
        } else {
            0.0
        }
    });
    let e3 = SymbolFn::real(7.0, {
        let (a, b, c) = (e1.clone(), e2t.clone(), e2.clone());
        move |k1, k2, k3| (a.eval(k1, k2, k3) + b.eval(k1, k2, k3) + c.eval(k1, k2, k3)).re
    });
    Ok(IbpSymbols {
        eta1_tilde: e1,
        eta2_tilde: e2t,
        eta2: e2,
        eta3: e3,
    })
}

fn check_scales(m: u64, n: u64) -> Result<()> {
    check_dyadic(m)?;
    check_dyadic(n)?;
    if m == 0 {
        return Err(Error::InvalidInput("M must be at least 1".into()));
    }
    if 16 * m > n {
        return Err(Error::InvalidInput(format!("need 16M ≤ N, got M={m}, N={n}")));
    }
    Ok(())
}

fn check_real(fields: &[&FourierField]) -> Result<()> {
    if fields.iter().any(|f| !f.is_hermitian()) {
        return Err(Error::NonHermitian);
    }
    Ok(())
}

/// T_{M,N}(f₁,f₂,g) = Σ_k φ_N(k)² DERIV(−k) 𝓕[Π³_{1,M}(f₁,f₂,g)](k) ĝ(−k).
pub fn t_functional(
    m: u64,
    n: u64,
    f1: &FourierField,
    f2: &FourierField,
    g: &FourierField,
) -> Result<f64> {
    check_dyadic(m)?;
    check_dyadic(n)?;
    if n < 4 {
        return Err(Error::InvalidInput(format!("need N ≥ 4, got {n}")));
    }
    check_real(&[f1, f2, g])?;
    let p = pseudoproduct_restricted(&SymbolFn::one(), 3, m, f1, f2, g)?;
    let v: Complex64 = p
        .modes()
        .map(|(k, c)| {
            let w = phi_n(n, k);
            c * w * w * deriv(-k) * g.get(-k)
        })
        .sum();
    Ok(v.re)
}

/// Both sides of the identity, computed independently.
#[derive(Clone, Copy, Debug)]
pub struct IbpSides {
    pub lhs: f64,
    pub rhs: Complex64,
}

impl IbpSides {
    pub fn residual(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.norm()).max(f64::MIN_POSITIVE);
        (Complex64::new(self.lhs, 0.0) - self.rhs).norm() / scale
    }
}

pub fn ibp_sides(
    m: u64,
    n: u64,
    f1: &FourierField,
    f2: &FourierField,
    g: &FourierField,
) -> Result<IbpSides> {
    check_scales(m, n)?;
    check_real(&[f1, f2, g])?;
    let lhs = t_functional(m, n, f1, f2, g)?;

    let sym = ibp_symbols(m, n)?;
    let png = g.apply_multiplier(|k| phi_n(n, k));
    // Σ_{N/4 ≤ N₃ ≤ 4N} φ_{N₃}
    let near = g.apply_multiplier(|k| {
        let mut s = 0.0;
        let mut n3 = n / 4;
        while n3 <= 4 * n {
            s += phi_n(n3, k);
            n3 *= 2;
        }
        s
    });
    let a = pseudoproduct_restricted(&sym.eta1_tilde.sum(&sym.eta2_tilde), 3, m, f1, f2, &near)?;
    let b = pseudoproduct_restricted(&sym.eta2, 3, m, f1, f2, &png)?;
    let bracket = a.pairing(&png)? + b.pairing(&png)?;
    let rhs = Complex64::new(0.0, -TAU) * m as f64 * bracket;
    Ok(IbpSides { lhs, rhs })
}

/// |LHS − RHS| / max(|LHS|, |RHS|) for the integration-by-parts identity.
pub fn verify_ibp(
    m: u64,
    n: u64,
    f1: &FourierField,
    f2: &FourierField,
    g: &FourierField,
) -> Result<f64> {
    Ok(ibp_sides(m, n, f1, f2, g)?.residual())
}
