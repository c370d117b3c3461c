//! The reduced scalar equation `g(x) = 0` for the cotangent potential.
//!
//! With `α = sign sin x` and `β = sign sin(x − a)`,
//!
//! ```text
//! g = αβ sin²x sin²(x−a) (ν₁ sin 2x + ν₂ sin 2(x−a))
//!   − sin²a (α sin²x sin 2x − β sin²(x−a) sin 2(x−a))
//!   − sin²a sin 2a (ν₂ α sin²x + ν₁ β sin²(x−a))
//! ```
//!
//! is a regular multiple of the cross-multiplied rotator condition. Its zeros
//! at the region boundaries are spurious.

use super::{pair_quantities, Region, Shape};
use crate::dynamics::MassTriple;
use crate::potential::PairPotential;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GFunctionParams {
    pub a: f64,
    pub nu1: f64,
    pub nu2: f64,
    /// Sign of `sin x` in the region of interest.
    pub alpha: f64,
    /// Sign of `sin(x − a)` in the region of interest.
    pub beta: f64,
}

impl GFunctionParams {
    pub fn for_region(a: f64, nu1: f64, nu2: f64, region: Region) -> Self {
        let (alpha, beta) = region.signs();
        GFunctionParams {
            a,
            nu1,
            nu2,
            alpha,
            beta,
        }
    }
}

/// `g(x)` with the sign functions taken from `params`.
pub fn g_function(x: f64, params: &GFunctionParams) -> f64 {
    let GFunctionParams {
        a,
        nu1,
        nu2,
        alpha,
        beta,
    } = *params;
    let sx2 = x.sin().powi(2);
    let sxa2 = (x - a).sin().powi(2);
    let s2x = (2.0 * x).sin();
    let s2xa = (2.0 * (x - a)).sin();
    let sa2 = a.sin().powi(2);
    let s2a = (2.0 * a).sin();
    alpha * beta * sx2 * sxa2 * (nu1 * s2x + nu2 * s2xa)
        - sa2 * (alpha * sx2 * s2x - beta * sxa2 * s2xa)
        - sa2 * s2a * (nu2 * alpha * sx2 + nu1 * beta * sxa2)
}

/// `g` with the signs read off `x` itself, set up for repeated evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ReducedG {
    sa: f64,
    ca: f64,
    sa2: f64,
    s2a: f64,
    nu1: f64,
    nu2: f64,
}

impl ReducedG {
    pub(crate) fn new(a: f64, nu1: f64, nu2: f64) -> Self {
        let (sa, ca) = a.sin_cos();
        ReducedG {
            sa,
            ca,
            sa2: sa * sa,
            s2a: 2.0 * sa * ca,
            nu1,
            nu2,
        }
    }

    /// `(g(x), Σ|terms|)`.
    #[inline]
    pub(crate) fn eval(&self, x: f64) -> (f64, f64) {
        let (sx, cx) = x.sin_cos();
        let sxa = sx * self.ca - cx * self.sa;
        let cxa = cx * self.ca + sx * self.sa;
        let s2x = 2.0 * sx * cx;
        let s2xa = 2.0 * sxa * cxa;
        // α sin²x and β sin²(x−a)
        let p = sx * sx.abs();
        let q = sxa * sxa.abs();
        let t1 = p * q * (self.nu1 * s2x + self.nu2 * s2xa);
        let t2 = self.sa2 * (p * s2x - q * s2xa);
        let t3 = self.sa2 * self.s2a * (self.nu2 * p + self.nu1 * q);
        (t1 - t2 - t3, t1.abs() + t2.abs() + t3.abs())
    }
}

/// Normalised cross-multiplied rotator condition for any potential:
/// `h / (1 + |h₁| + |h₂|)` with `h = h₁ − h₂`, together with its rounding
/// scale. `None` on a singular shape.
pub(crate) fn generic_mismatch<P: PairPotential + ?Sized>(
    masses: &MassTriple,
    a: f64,
    x: f64,
    pot: &P,
) -> Option<(f64, f64)> {
    let pq = pair_quantities(masses, &Shape { a, x }, pot).ok()?;
    let (h, size) = pq.cross_mismatch();
    let norm = 1.0 + size;
    Some((h / norm, size / norm))
}
