use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

type Eval = dyn Fn(i64, i64, i64) -> Complex64 + Send + Sync;

/// A bounded multiplier η(k₁,k₂,k₃) together with its declared sup norm.
#[derive(Clone)]
pub struct SymbolFn {
    eval: Arc<Eval>,
    sup_bound: f64,
}

impl fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolFn").field("sup_bound", &self.sup_bound).finish()
    }
}

impl SymbolFn {
    pub fn new<F>(sup_bound: f64, f: F) -> Self
    where
        F: Fn(i64, i64, i64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            sup_bound,
        }
    }

    pub fn real<F>(sup_bound: f64, f: F) -> Self
    where
        F: Fn(i64, i64, i64) -> f64 + Send + Sync + 'static,
    {
        Self::new(sup_bound, move |a, b, c| Complex64::new(f(a, b, c), 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(c.norm(), move |_, _, _| c)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    #[inline]
    pub fn eval(&self, k1: i64, k2: i64, k3: i64) -> Complex64 {
        (self.eval)(k1, k2, k3)
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    /// Pointwise sum; the declared bound is the sum of the bounds.
    pub fn sum(&self, other: &Self) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self {
            eval: Arc::new(move |k1, k2, k3| a(k1, k2, k3) + b(k1, k2, k3)),
            sup_bound: self.sup_bound + other.sup_bound,
        }
    }

    /// Largest |η| over the box [−r, r]³ (no constraint on k₁+k₂+k₃).
    pub fn sampled_sup(&self, r: i64) -> f64 {
        let mut max: f64 = 0.0;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    max = max.max(self.eval(a, b, c).norm());
                }
            }
        }
        max
    }
}
