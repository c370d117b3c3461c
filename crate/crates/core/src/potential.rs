//! Pair potentials `U(D²)` expressed in the squared chord length.
//!
//! The total force function is `V = Σ_{i<j} mᵢmⱼ U(D²ᵢⱼ)` and enters the
//! Lagrangian as `L = K + V`, so an attractive potential has `U′(D²) < 0`.

use std::fmt;

use thiserror::Error;

use crate::dynamics::MassTriple;
use crate::geometry::{chord_squared, SpherePoint, SphereRadius};

/// Which end of the regular domain `0 < D² < 4R²` was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    /// `D² → 0`: two bodies coincide.
    Collision,
    /// `D² → 4R²`: two bodies are antipodal.
    Antipodal,
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityKind::Collision => f.write_str("collision"),
            SingularityKind::Antipodal => f.write_str("antipodal"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum PotentialError {
    #[error("{kind} singularity at D² = {d2}")]
    Singular { kind: SingularityKind, d2: f64 },
    #[error("{kind} singularity between bodies {i} and {j} (D² = {d2})")]
    SingularPair {
        kind: SingularityKind,
        i: usize,
        j: usize,
        d2: f64,
    },
}

impl PotentialError {
    pub fn kind(&self) -> SingularityKind {
        match *self {
            PotentialError::Singular { kind, .. } | PotentialError::SingularPair { kind, .. } => {
                kind
            }
        }
    }

    /// Attach the (1-based) pair indices to a bare singularity.
    pub(crate) fn at_pair(self, i: usize, j: usize) -> Self {
        match self {
            PotentialError::Singular { kind, d2 } => {
                PotentialError::SingularPair { kind, i, j, d2 }
            }
            other => other,
        }
    }
}

/// A pair potential and its derivative with respect to `D²`.
///
/// Implementations must be attractive (`u_prime < 0`) on their regular domain
/// unless they are explicitly a repulsive wrapper.
pub trait PairPotential: Send + Sync {
    fn radius(&self) -> SphereRadius;

    fn u(&self, d2: f64) -> Result<f64, PotentialError>;

    fn u_prime(&self, d2: f64) -> Result<f64, PotentialError>;

    /// `Some(±1)` when this is (plus or minus) the cotangent potential, which
    /// lets the meridian solver use its closed-form reduced equation.
    fn cotangent_sign(&self) -> Option<f64> {
        None
    }
}

impl<P: PairPotential + ?Sized> PairPotential for &P {
    fn radius(&self) -> SphereRadius {
        (**self).radius()
    }
    fn u(&self, d2: f64) -> Result<f64, PotentialError> {
        (**self).u(d2)
    }
    fn u_prime(&self, d2: f64) -> Result<f64, PotentialError> {
        (**self).u_prime(d2)
    }
    fn cotangent_sign(&self) -> Option<f64> {
        (**self).cotangent_sign()
    }
}

/// Relative distance from the domain ends below which `D²` counts as singular.
const DOMAIN_EDGE: f64 = 1e-15;

/// The cotangent potential `U = cot(σ)/R`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cotangent {
    pub radius: SphereRadius,
}

impl Cotangent {
    pub fn new(radius: SphereRadius) -> Self {
        Cotangent { radius }
    }

    fn check(&self, d2: f64) -> Result<(), PotentialError> {
        let full = 4.0 * self.radius.get() * self.radius.get();
        if d2.is_nan() || d2 <= DOMAIN_EDGE * full {
            Err(PotentialError::Singular {
                kind: SingularityKind::Collision,
                d2,
            })
        } else if d2 >= full * (1.0 - DOMAIN_EDGE) {
            Err(PotentialError::Singular {
                kind: SingularityKind::Antipodal,
                d2,
            })
        } else {
            Ok(())
        }
    }
}

impl PairPotential for Cotangent {
    fn radius(&self) -> SphereRadius {
        self.radius
    }

    /// `(1 − 2ε²D²) / √(D²(1 − ε²D²))`
    fn u(&self, d2: f64) -> Result<f64, PotentialError> {
        self.check(d2)?;
        let e2 = self.radius.epsilon().powi(2);
        Ok((1.0 - 2.0 * e2 * d2) / (d2 * (1.0 - e2 * d2)).sqrt())
    }

    /// `−1 / (2R³ sin³σ)` with `R sin σ = √(D²(1 − ε²D²))`.
    fn u_prime(&self, d2: f64) -> Result<f64, PotentialError> {
        self.check(d2)?;
        let e2 = self.radius.epsilon().powi(2);
        let r_sin = (d2 * (1.0 - e2 * d2)).sqrt();
        Ok(-0.5 / r_sin.powi(3))
    }

    fn cotangent_sign(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// `−U` for any potential `U`. Turns an attractive force into a repulsive one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Repulsive<P>(pub P);

impl<P: PairPotential> PairPotential for Repulsive<P> {
    fn radius(&self) -> SphereRadius {
        self.0.radius()
    }
    fn u(&self, d2: f64) -> Result<f64, PotentialError> {
        self.0.u(d2).map(|v| -v)
    }
    fn u_prime(&self, d2: f64) -> Result<f64, PotentialError> {
        self.0.u_prime(d2).map(|v| -v)
    }
    fn cotangent_sign(&self) -> Option<f64> {
        self.0.cotangent_sign().map(|s| -s)
    }
}

/// Pair order used throughout: (1,2), (2,3), (3,1), zero-based.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// `V = Σ_{i<j} mᵢmⱼ U(D²ᵢⱼ)`.
pub fn total_potential<P: PairPotential + ?Sized>(
    points: &[SpherePoint; 3],
    masses: &MassTriple,
    pot: &P,
) -> Result<f64, PotentialError> {
    let r = pot.radius();
    let m = masses.as_array();
    PAIRS.iter().try_fold(0.0, |acc, &(i, j)| {
        let d2 = chord_squared(points[i], points[j], r);
        let u = pot.u(d2).map_err(|e| e.at_pair(i + 1, j + 1))?;
        Ok(acc + m[i] * m[j] * u)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chord_from_arc;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn d2_of(sigma: f64, r: SphereRadius) -> f64 {
        chord_from_arc(sigma, r).unwrap().powi(2)
    }

    #[test]
    fn cotangent_u_examples() {
        let pot = Cotangent::default();
        assert!(pot.u(2.0).unwrap().abs() < 1e-15);
        let inv_sqrt3 = 1.0 / 3f64.sqrt();
        assert!((pot.u(1.0).unwrap() - inv_sqrt3).abs() < 1e-15);
        assert!((pot.u(3.0).unwrap() + inv_sqrt3).abs() < 1e-15);
        // closed form in σ
        assert!((pot.u(1.0).unwrap() - 1.0 / (PI / 3.0).tan()).abs() < 1e-14);
    }

    #[test]
    fn cotangent_u_prime_examples() {
        let pot = Cotangent::default();
        assert!((pot.u_prime(2.0).unwrap() + 0.5).abs() < 1e-15);
        let d2 = d2_of(PI / 6.0, SphereRadius::UNIT);
        assert!((pot.u_prime(d2).unwrap() + 4.0).abs() < 1e-12);
        let expected = -4.0 / (3.0 * 3f64.sqrt());
        assert!((pot.u_prime(3.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn singularities_are_distinguished() {
        let pot = Cotangent::default();
        assert_eq!(pot.u(0.0).unwrap_err().kind(), SingularityKind::Collision);
        assert_eq!(
            pot.u_prime(4.0).unwrap_err().kind(),
            SingularityKind::Antipodal
        );
        let r = SphereRadius::new(2.0).unwrap();
        assert_eq!(
            Cotangent::new(r).u(16.0).unwrap_err().kind(),
            SingularityKind::Antipodal
        );
    }

    #[test]
    fn total_potential_equilateral_equator() {
        let pts = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0].map(|p| SpherePoint::new(PI / 2.0, p));
        let v = total_potential(&pts, &MassTriple::equal(), &Cotangent::default()).unwrap();
        assert!((v + 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn total_potential_reports_pair() {
        let pts = [
            SpherePoint::new(PI / 2.0, 0.0),
            SpherePoint::new(PI / 2.0, 1.0),
            SpherePoint::new(PI / 2.0, 1.0),
        ];
        let err = total_potential(&pts, &MassTriple::equal(), &Cotangent::default()).unwrap_err();
        assert!(matches!(
            err,
            PotentialError::SingularPair {
                kind: SingularityKind::Collision,
                i: 2,
                j: 3,
                ..
            }
        ));
    }

    #[test]
    fn repulsive_wrapper_flips_sign() {
        let att = Cotangent::default();
        let rep = Repulsive(att);
        assert!(rep.u_prime(1.5).unwrap() > 0.0);
        assert_eq!(rep.u(1.5).unwrap(), -att.u(1.5).unwrap());
        assert_eq!(rep.cotangent_sign(), Some(-1.0));
    }

    proptest! {
        #[test]
        fn u_prime_matches_finite_difference(sigma in 0.1f64..(PI - 0.1), r in 0.5f64..3.0) {
            let r = SphereRadius::new(r).unwrap();
            let pot = Cotangent::new(r);
            let d2 = d2_of(sigma, r);
            let h = 1e-6 * d2;
            let fd = (pot.u(d2 + h).unwrap() - pot.u(d2 - h).unwrap()) / (2.0 * h);
            let exact = pot.u_prime(d2).unwrap();
            prop_assert!(exact < 0.0);
            prop_assert!(((exact - fd) / exact).abs() < 1e-6);
        }

        #[test]
        fn u_matches_cotangent_of_arc(sigma in 0.01f64..(PI - 0.01), r in 0.5f64..3.0) {
            let r = SphereRadius::new(r).unwrap();
            let u = Cotangent::new(r).u(d2_of(sigma, r)).unwrap();
            let closed = 1.0 / (r.get() * sigma.tan());
            prop_assert!((u - closed).abs() <= 1e-10 * closed.abs().max(1e-3));
        }
    }
}
