//! Root scan of the reduced equation over the four regions, and mass sweeps.

use rayon::prelude::*;

use super::families::{exceptional_case_angles, ExceptionalCase};
use super::reduced::{generic_mismatch, ReducedG};
use super::rotator::rotator_from_shape;
use super::{MeridianError, MeridianSolution, Region, Shape};
use crate::dynamics::MassTriple;
use crate::potential::{Cotangent, PairPotential};
use crate::roots::{scan_roots, ScanConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub samples_per_region: usize,
    /// Bisection stops below this bracket width.
    pub root_tol: f64,
    /// Roots this close to a region end are discarded.
    pub boundary_exclusion: f64,
    /// Roots closer than this are merged.
    pub merge_tol: f64,
    /// Residual bound every emitted solution must meet.
    pub residual_tol: f64,
    /// Relative zero test for tangential roots.
    pub zero_rel: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            samples_per_region: 2000,
            root_tol: 1e-15,
            boundary_exclusion: 1e-8,
            merge_tol: 1e-10,
            residual_tol: 1e-9,
            zero_rel: 1e-12,
        }
    }
}

impl ScanOptions {
    fn config(&self) -> ScanConfig {
        ScanConfig {
            samples: self.samples_per_region,
            x_tol: self.root_tol,
            zero_rel: self.zero_rel,
        }
    }
}

/// Zeros of the reduced equation in one region, boundary zeros removed.
fn region_roots<P: PairPotential + ?Sized>(
    a: f64,
    masses: &MassTriple,
    pot: &P,
    region: Region,
    opts: &ScanOptions,
) -> Vec<f64> {
    let (lo, hi) = region.bounds(a);
    let excl = opts.boundary_exclusion;
    let cfg = opts.config();
    let roots = if pot.cotangent_sign().is_some() {
        let g = ReducedG::new(a, masses.nu1(), masses.nu2());
        scan_roots(|x| g.eval(x), lo, hi, &cfg)
    } else {
        // the pair quantities are singular at the region ends
        let f = |x: f64| generic_mismatch(masses, a, x, pot).unwrap_or((f64::NAN, 0.0));
        scan_roots(f, lo + excl, hi - excl, &cfg)
    };
    roots
        .into_iter()
        .map(|r| r.x)
        .filter(|&x| x - lo >= excl && hi - x >= excl)
        .collect()
}

/// Closed-form shapes with a vanishing G-difference whose `a` matches.
fn exceptional_roots(a: f64, masses: &MassTriple) -> Vec<f64> {
    let mut out = Vec::new();
    for (case, nu) in [
        (ExceptionalCase::Case2, masses.nu1()),
        (ExceptionalCase::Case3, masses.nu2()),
    ] {
        for angles in exceptional_case_angles(case, nu) {
            if let Ok(shape) = angles.shape() {
                if (shape.a - a).abs() <= 1e-9 {
                    out.push(shape.x);
                }
            }
        }
    }
    out
}

/// All rigid rotators on a rotating meridian with `θ₂ − θ₁ = a`.
///
/// Zeros of the reduced equation are located region by region, lifted to
/// configurations, given `s` and `ω²`, and kept only if both antipodal lifts
/// pass the equations of motion. Sorted by `x`.
pub fn find_meridian_rotators<P: PairPotential + ?Sized>(
    a: f64,
    masses: &MassTriple,
    pot: &P,
    opts: &ScanOptions,
) -> Result<Vec<MeridianSolution>, MeridianError> {
    if !(a > 0.0 && a < std::f64::consts::PI) {
        return Err(MeridianError::InvalidAngle(a));
    }
    let mut xs: Vec<f64> = Region::ALL
        .iter()
        .flat_map(|&r| region_roots(a, masses, pot, r, opts))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|b, a| (*b - *a).abs() < opts.merge_tol);

    if pot.cotangent_sign().is_some() {
        for x in exceptional_roots(a, masses) {
            match xs.iter_mut().find(|v| (**v - x).abs() < 1e-9) {
                Some(v) => *v = x,
                None => xs.push(x),
            }
        }
        xs.sort_by(f64::total_cmp);
    }

    Ok(xs
        .into_iter()
        .filter_map(|x| rotator_from_shape(masses, &Shape { a, x }, pot, opts.residual_tol).ok())
        .collect())
}

/// Number of rotators found in each region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct RegionCounts(pub [usize; 4]);

impl RegionCounts {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn get(&self, region: Region) -> usize {
        self.0[region.index()]
    }

    pub fn tally(solutions: &[MeridianSolution]) -> Self {
        let mut c = [0; 4];
        for s in solutions {
            c[s.region.index()] += 1;
        }
        RegionCounts(c)
    }
}

/// Rotator counts for the cotangent potential on the unit sphere.
pub fn count_rotators(
    a: f64,
    nu1: f64,
    nu2: f64,
    opts: &ScanOptions,
) -> Result<RegionCounts, MeridianError> {
    let masses = MassTriple::from_ratios(nu1, nu2)?;
    let sols = find_meridian_rotators(a, &masses, &Cotangent::default(), opts)?;
    Ok(RegionCounts::tally(&sols))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub a: f64,
    pub nu1: f64,
    pub nu2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub counts: RegionCounts,
}

/// Counts over a grid, evaluated in parallel. Points with invalid input are
/// skipped.
pub fn sweep_counts(points: &[SweepPoint], opts: &ScanOptions) -> Vec<SweepRow> {
    points
        .par_iter()
        .filter_map(|&p| {
            count_rotators(p.a, p.nu1, p.nu2, opts)
                .ok()
                .map(|counts| SweepRow { point: p, counts })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meridian::{CaseTag, Motion};
    use crate::potential::Repulsive;
    use std::f64::consts::PI;

    fn counts(a: f64, nu1: f64, nu2: f64) -> RegionCounts {
        count_rotators(a, nu1, nu2, &ScanOptions::default()).unwrap()
    }

    #[test]
    fn right_angle_equal_ratios() {
        let m = MassTriple::new(1.0, 1.0, 2.0).unwrap();
        let sols =
            find_meridian_rotators(PI / 2.0, &m, &Cotangent::default(), &ScanOptions::default())
                .unwrap();
        assert_eq!(sols.len(), 2);
        assert!((sols[0].shape.x - PI / 4.0).abs() < 1e-12);
        assert_eq!(sols[0].region, Region::I);
        assert!((sols[1].shape.x - 5.0 * PI / 4.0).abs() < 1e-12);
        assert_eq!(sols[1].region, Region::III);
    }

    #[test]
    fn six_solutions_at_pi_over_6() {
        let c = counts(PI / 6.0, 3.0, 2.0);
        assert_eq!(c, RegionCounts([1, 2, 1, 2]));
        let m = MassTriple::new(3.0, 2.0, 1.0).unwrap();
        let sols =
            find_meridian_rotators(PI / 6.0, &m, &Cotangent::default(), &ScanOptions::default())
                .unwrap();
        let expected = [0.2779, 0.9637, 1.6676, 3.4279, 5.0210, 5.7947];
        for (s, e) in sols.iter().zip(expected) {
            assert!((s.shape.x - e).abs() < 1e-4, "{} vs {e}", s.shape.x);
            assert!(s.residual < 1e-9);
            assert_eq!(s.case, CaseTag::Case1);
        }
    }

    #[test]
    fn two_solutions_at_pi_over_4() {
        assert_eq!(counts(PI / 4.0, 3.0, 2.0).total(), 2);
    }

    #[test]
    fn double_roots_of_the_right_angle_table() {
        assert_eq!(counts(PI / 2.0, 5.0, 1.0), RegionCounts([1, 1, 1, 0]));
        assert_eq!(counts(PI / 2.0, 1.0, 5.0), RegionCounts([1, 0, 1, 1]));
    }

    #[test]
    fn generic_path_agrees_with_reduced_equation() {
        // the repulsive potential is not recognised as cotangent once wrapped twice
        struct Opaque(Cotangent);
        impl PairPotential for Opaque {
            fn radius(&self) -> crate::geometry::SphereRadius {
                self.0.radius()
            }
            fn u(&self, d2: f64) -> Result<f64, crate::potential::PotentialError> {
                self.0.u(d2)
            }
            fn u_prime(&self, d2: f64) -> Result<f64, crate::potential::PotentialError> {
                self.0.u_prime(d2)
            }
        }
        let m = MassTriple::new(3.0, 2.0, 1.0).unwrap();
        let opts = ScanOptions::default();
        let fast = find_meridian_rotators(PI / 6.0, &m, &Cotangent::default(), &opts).unwrap();
        let slow =
            find_meridian_rotators(PI / 6.0, &m, &Opaque(Cotangent::default()), &opts).unwrap();
        assert_eq!(fast.len(), slow.len());
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f.shape.x - s.shape.x).abs() < 1e-9);
            assert_eq!(f.s(), s.s());
        }
    }

    #[test]
    fn repulsive_potential_has_the_same_shapes() {
        let m = MassTriple::new(3.0, 2.0, 1.0).unwrap();
        let opts = ScanOptions::default();
        let att = find_meridian_rotators(PI / 6.0, &m, &Cotangent::default(), &opts).unwrap();
        let rep =
            find_meridian_rotators(PI / 6.0, &m, &Repulsive(Cotangent::default()), &opts).unwrap();
        assert_eq!(att.len(), rep.len());
        for (p, q) in att.iter().zip(&rep) {
            assert_eq!(p.shape, q.shape);
            match (p.motion, q.motion) {
                (
                    Motion::Rotating {
                        s: s1,
                        omega_squared: w1,
                    },
                    Motion::Rotating {
                        s: s2,
                        omega_squared: w2,
                    },
                ) => {
                    assert_eq!(s1.flip(), s2);
                    assert!((w1 - w2).abs() < 1e-12 * w1);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn invalid_angle() {
        let m = MassTriple::equal();
        assert!(
            find_meridian_rotators(0.0, &m, &Cotangent::default(), &ScanOptions::default())
                .is_err()
        );
        assert!(
            find_meridian_rotators(PI, &m, &Cotangent::default(), &ScanOptions::default()).is_err()
        );
    }

    #[test]
    fn sweep_runs_in_parallel() {
        let pts = [
            SweepPoint {
                a: PI / 2.0,
                nu1: 1.0,
                nu2: 1.0,
            },
            SweepPoint {
                a: PI / 2.0,
                nu1: 6.0,
                nu2: 1.0,
            },
        ];
        let rows = sweep_counts(&pts, &ScanOptions::default());
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].counts.total(), 2);
        assert_eq!(rows[1].counts.total(), 4);
    }
}
