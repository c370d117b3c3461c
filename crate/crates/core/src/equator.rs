//! Relative equilibria with all three bodies on the equator under the
//! cotangent potential.
//!
//! On the equator the longitude equations reduce to a sine rule for a
//! triangle whose sides are `μₖ = √(mᵢmⱼ)` and whose exterior angles are the
//! longitude differences. The solution, when it exists, is unique and does not
//! depend on ω, so it is also a fixed point.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::dynamics::{MassTriple, ReCandidate};
use crate::geometry::{SpherePoint, SphereRadius};

/// Relative tolerance on `μₖ` versus `μᵢ + μⱼ`.
pub const TRIANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquatorRegion {
    /// All strict triangle inequalities hold: exactly one solution.
    Interior,
    /// One inequality holds with equality: no solution.
    Boundary,
    /// One inequality is violated: no solution.
    Exterior,
}

impl fmt::Display for EquatorRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquatorRegion::Interior => "interior",
            EquatorRegion::Boundary => "boundary",
            EquatorRegion::Exterior => "exterior",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Existence {
    pub region: EquatorRegion,
    /// 1-based `k` of the failing inequality `μₖ < μᵢ + μⱼ`.
    pub violated: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EquatorError {
    #[error("no equator solution: masses are on the {region} side of μ{violated} < μi + μj")]
    NoSolution {
        region: EquatorRegion,
        violated: usize,
    },
    #[error("mass path leaves the interior region at t = {t}")]
    PathLeftInterior { t: f64 },
    #[error("limit scan needs at least one step")]
    NoSteps,
}

pub fn existence_check(masses: &MassTriple) -> Existence {
    let mu = masses.mu();
    let mut boundary = None;
    for k in 0..3 {
        let others = mu[(k + 1) % 3] + mu[(k + 2) % 3];
        let gap = mu[k] - others;
        if gap > TRIANGLE_TOL * others {
            return Existence {
                region: EquatorRegion::Exterior,
                violated: Some(k + 1),
            };
        }
        if gap.abs() <= TRIANGLE_TOL * others {
            boundary = Some(k + 1);
        }
    }
    match boundary {
        Some(k) => Existence {
            region: EquatorRegion::Boundary,
            violated: Some(k),
        },
        None => Existence {
            region: EquatorRegion::Interior,
            violated: None,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquatorSolution {
    /// `φ₁−φ₂`, `φ₂−φ₃`, `φ₃−φ₁`, each in `(0, π)`, summing to `2π`.
    pub dphi: [f64; 3],
    /// Common ratio `sin(φᵢ−φⱼ)/μₖ`.
    pub rho: f64,
    pub neg_potential_energy: f64,
    pub exists: bool,
    pub radius: SphereRadius,
}

impl EquatorSolution {
    /// Configuration with `φ₁ = 0`.
    pub fn points(&self) -> [SpherePoint; 3] {
        let phi2 = -self.dphi[0];
        let phi3 = phi2 - self.dphi[1];
        [0.0, phi2, phi3].map(|p| SpherePoint::new(PI / 2.0, p))
    }

    pub fn candidate(&self, omega: f64) -> ReCandidate {
        ReCandidate {
            points: self.points(),
            omega,
        }
    }
}

/// `(μ₁+μ₂+μ₃)(μ₁+μ₂−μ₃)(μ₂+μ₃−μ₁)(μ₃+μ₁−μ₂)`
fn heron(mu: [f64; 3]) -> f64 {
    let [a, b, c] = mu;
    (a + b + c) * (a + b - c) * (b + c - a) * (c + a - b)
}

/// Closed form without the existence check; on the boundary this is the
/// limiting (degenerate) configuration.
fn closed_form(masses: &MassTriple, radius: SphereRadius) -> EquatorSolution {
    let mu = masses.mu();
    let root = heron(mu).max(0.0).sqrt();
    let rho = root / (2.0 * mu[0] * mu[1] * mu[2]);
    // pair (1,2) is opposite μ₃, (2,3) opposite μ₁, (3,1) opposite μ₂
    let dphi = [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)].map(|(i, j, k)| {
        let cos = (mu[k] * mu[k] - (mu[i] * mu[i] + mu[j] * mu[j])) / (2.0 * mu[i] * mu[j]);
        (rho * mu[k]).atan2(cos.clamp(-1.0, 1.0))
    });
    EquatorSolution {
        dphi,
        rho,
        neg_potential_energy: root / radius.get(),
        exists: false,
        radius,
    }
}

pub fn solve_equator(
    masses: &MassTriple,
    radius: SphereRadius,
) -> Result<EquatorSolution, EquatorError> {
    let ex = existence_check(masses);
    match ex.region {
        EquatorRegion::Interior => Ok(EquatorSolution {
            exists: true,
            ..closed_form(masses, radius)
        }),
        region => Err(EquatorError::NoSolution {
            region,
            violated: ex.violated.unwrap_or(0),
        }),
    }
}

/// Default path toward `√(m₃/m₁) + √(m₃/m₂) = 1`: `m₁ = m₂ = 3 + t`, `m₃ = 1`.
///
/// It starts at the maximum of `−V` along the `m₁ = m₂` family, so `−V`
/// decreases over the whole path and vanishes at `t = 1`.
pub fn default_limit_path(t: f64) -> MassTriple {
    MassTriple::new(3.0 + t, 3.0 + t, 1.0).expect("positive masses")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitScanRow {
    pub t: f64,
    pub masses: MassTriple,
    pub neg_potential_energy: f64,
    pub dphi: [f64; 3],
}

/// Evaluate the equator solution along `t ∈ [0, 1]` in `steps` equal steps.
/// Every point before `t = 1` must be interior; the terminal point may sit on
/// the boundary, where the degenerate limit configuration is reported.
pub fn antipodal_limit_scan<F>(
    path: F,
    steps: usize,
    radius: SphereRadius,
) -> Result<Vec<LimitScanRow>, EquatorError>
where
    F: Fn(f64) -> MassTriple,
{
    if steps == 0 {
        return Err(EquatorError::NoSteps);
    }
    (0..=steps)
        .map(|n| {
            let t = n as f64 / steps as f64;
            let masses = path(t);
            let region = existence_check(&masses).region;
            let allowed = region == EquatorRegion::Interior
                || (n == steps && region == EquatorRegion::Boundary);
            if !allowed {
                return Err(EquatorError::PathLeftInterior { t });
            }
            let sol = closed_form(&masses, radius);
            Ok(LimitScanRow {
                t,
                masses,
                neg_potential_energy: sol.neg_potential_energy,
                dphi: sol.dphi,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::re_residuals;
    use crate::potential::{total_potential, Cotangent, Repulsive};
    use proptest::prelude::*;

    fn m(a: f64, b: f64, c: f64) -> MassTriple {
        MassTriple::new(a, b, c).unwrap()
    }

    #[test]
    fn existence_examples() {
        assert_eq!(
            existence_check(&m(1.0, 1.0, 1.0)).region,
            EquatorRegion::Interior
        );
        let ex = existence_check(&m(25.0, 25.0, 1.0));
        assert_eq!(ex.region, EquatorRegion::Exterior);
        assert_eq!(ex.violated, Some(3));
        // μ₃ = 4 = μ₁ + μ₂
        assert_eq!(
            existence_check(&m(4.0, 4.0, 1.0)).region,
            EquatorRegion::Boundary
        );
    }

    #[test]
    fn equal_masses() {
        let s = solve_equator(&MassTriple::equal(), SphereRadius::UNIT).unwrap();
        for d in s.dphi {
            assert!((d - 2.0 * PI / 3.0).abs() < 1e-14);
        }
        assert!((s.rho - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((s.neg_potential_energy - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn one_one_four() {
        let r = SphereRadius::new(2.0).unwrap();
        let s = solve_equator(&m(1.0, 1.0, 4.0), r).unwrap();
        assert!((s.dphi[0].cos() + 7.0 / 8.0).abs() < 1e-14);
        assert!((s.rho - 15f64.sqrt() / 8.0).abs() < 1e-15);
        assert!((s.neg_potential_energy - 15f64.sqrt() / 2.0).abs() < 1e-14);
        let v = total_potential(&s.points(), &m(1.0, 1.0, 4.0), &Cotangent::new(r)).unwrap();
        assert!((v + s.neg_potential_energy).abs() < 1e-12);
    }

    #[test]
    fn no_solution_is_typed() {
        let err = solve_equator(&m(25.0, 25.0, 1.0), SphereRadius::UNIT).unwrap_err();
        assert_eq!(
            err,
            EquatorError::NoSolution {
                region: EquatorRegion::Exterior,
                violated: 3
            }
        );
        assert!(matches!(
            solve_equator(&m(4.0, 4.0, 1.0), SphereRadius::UNIT),
            Err(EquatorError::NoSolution {
                region: EquatorRegion::Boundary,
                ..
            })
        ));
    }

    #[test]
    fn solution_is_omega_independent_and_dual() {
        let masses = m(1.0, 2.0, 1.5);
        let s = solve_equator(&masses, SphereRadius::UNIT).unwrap();
        for omega in [0.0, 0.5, 1.0, 2.0] {
            let c = s.candidate(omega);
            assert!(
                re_residuals(&c, &masses, &Cotangent::default())
                    .unwrap()
                    .max_norm()
                    < 1e-12
            );
            let rep = Repulsive(Cotangent::default());
            assert!(re_residuals(&c, &masses, &rep).unwrap().max_norm() < 1e-12);
        }
    }

    #[test]
    fn limit_scan_reaches_antipodes() {
        let rows = antipodal_limit_scan(default_limit_path, 200, SphereRadius::UNIT).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].neg_potential_energy < w[0].neg_potential_energy);
        }
        let last = rows.last().unwrap();
        assert!(last.neg_potential_energy < 1e-8);
        assert!(last.dphi[0].abs() < 1e-6);
        assert!((last.dphi[1] - PI).abs() < 1e-6);
        assert!((last.dphi[2] - PI).abs() < 1e-6);
        let mid = &rows[100];
        let s = solve_equator(&mid.masses, SphereRadius::UNIT).unwrap();
        let res = re_residuals(&s.candidate(1.0), &mid.masses, &Cotangent::default()).unwrap();
        assert!(res.max_norm() < 1e-10);
    }

    #[test]
    fn limit_scan_rejects_exterior_path() {
        let err = antipodal_limit_scan(
            |t| m(3.0 + 2.0 * t, 3.0 + 2.0 * t, 1.0),
            10,
            SphereRadius::UNIT,
        )
        .unwrap_err();
        assert!(matches!(err, EquatorError::PathLeftInterior { .. }));
    }

    fn interior_masses() -> impl Strategy<Value = MassTriple> {
        (0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0)
            .prop_map(|(a, b, c)| m(a, b, c))
            .prop_filter("interior", |m| {
                existence_check(m).region == EquatorRegion::Interior
            })
    }

    proptest! {
        #[test]
        fn interior_invariants(masses in interior_masses()) {
            let s = solve_equator(&masses, SphereRadius::UNIT).unwrap();
            let mu = masses.mu();
            prop_assert!((s.dphi.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-10);
            let k_of = [2usize, 0, 1];
            for p in 0..3 {
                prop_assert!(s.dphi[p] > 0.0 && s.dphi[p] < PI);
                let ratio = s.dphi[p].sin() / mu[k_of[p]];
                prop_assert!((ratio - s.rho).abs() < 1e-10);
                // sin² + cos² with the sine rule value and the cosine rule value
                let (i, j, k) = [(0, 1, 2), (1, 2, 0), (2, 0, 1)][p];
                let cos = (mu[k] * mu[k] - mu[i] * mu[i] - mu[j] * mu[j]) / (2.0 * mu[i] * mu[j]);
                prop_assert!(((s.rho * mu[k]).powi(2) + cos * cos - 1.0).abs() < 1e-10);
            }
            prop_assert!(s.neg_potential_energy > 0.0);
            let res = re_residuals(&s.candidate(1.0), &masses, &Cotangent::default()).unwrap();
            prop_assert!(res.within(1e-12), "{:?}", res);
        }
    }
}
