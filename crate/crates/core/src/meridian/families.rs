//! Closed-form families: the right-angle count table, equilateral and
//! isosceles rotators, and the shapes with a vanishing G-difference.

use std::f64::consts::PI;

use super::rotator::{classify_case, lift_residual, pair_quantities, rotator_from_shape};
use super::scan::RegionCounts;
use super::translation::amplitude_is_zero;
use super::{
    amplitude_a, shape_to_configurations, Branch, CaseTag, MeridianError, MeridianSolution, Motion,
    Region, Shape,
};
use crate::dynamics::MassTriple;
use crate::geometry::SphereRadius;
use crate::potential::{Cotangent, PairPotential};

/// Rotator counts per region for `a = π/2`, as a function of `ν₁ − ν₂`.
/// The values ±4 carry a double root.
pub fn count_pi_over_2(nu_diff: f64) -> RegionCounts {
    const EDGE_TOL: f64 = 1e-12;
    if (nu_diff + 4.0).abs() <= EDGE_TOL {
        RegionCounts([1, 0, 1, 1])
    } else if (nu_diff - 4.0).abs() <= EDGE_TOL {
        RegionCounts([1, 1, 1, 0])
    } else if nu_diff < -4.0 {
        RegionCounts([1, 0, 1, 2])
    } else if nu_diff > 4.0 {
        RegionCounts([1, 2, 1, 0])
    } else {
        RegionCounts([1, 0, 1, 0])
    }
}

/// Equilateral shape (all separations 2π/3) as a rotator for any masses.
///
/// Uses the closed form `s = −sign U′`, `ω² = 4A|U′(3R²)|`; equal masses give
/// a fixed point.
pub fn equilateral_rotator<P: PairPotential + ?Sized>(
    masses: &MassTriple,
    pot: &P,
) -> Result<MeridianSolution, MeridianError> {
    let shape = Shape::new(2.0 * PI / 3.0, 4.0 * PI / 3.0)?;
    let r = pot.radius().get();
    let up = pot.u_prime(3.0 * r * r)?;
    let amp = amplitude_a(masses, &shape);
    let pq = pair_quantities(masses, &shape, pot)?;
    let (case, translation, motion) = if amplitude_is_zero(masses, amp) {
        (CaseTag::Case4FixedPoint, None, Motion::FixedPoint)
    } else {
        let s = if up < 0.0 {
            Branch::Minus
        } else {
            Branch::Plus
        };
        let tr = shape_to_configurations(masses, &shape, s)?;
        let motion = Motion::Rotating {
            s,
            omega_squared: 4.0 * amp * up.abs(),
        };
        (classify_case(&pq, masses), Some(tr), motion)
    };
    let mut sol = MeridianSolution {
        shape,
        region: Region::III,
        case,
        translation,
        motion,
        residual: 0.0,
    };
    sol.residual = lift_residual(&sol, masses, pot)?.0;
    Ok(sol)
}

/// `a` with `cos a = (√2 − 1)/2`.
pub fn special_isosceles_angle() -> f64 {
    ((2f64.sqrt() - 1.0) / 2.0).acos()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsoscelesAngle {
    Given(f64),
    /// `cos a = (√2 − 1)/2`, where the smaller isosceles rotates for any masses.
    Special,
}

/// Isosceles rotators with body 3 halfway between bodies 1 and 2
/// (`x = a/2`) or opposite that midpoint (`x = a/2 + π`).
///
/// For `m₁ = m₂` both exist at every `a`. Otherwise the smaller one needs the
/// special angle and the larger one `a = 2π/3`.
pub fn isosceles_rotators(
    masses: &MassTriple,
    angle: IsoscelesAngle,
    radius: SphereRadius,
    residual_tol: f64,
) -> Vec<MeridianSolution> {
    const ANGLE_TOL: f64 = 1e-12;
    let special = special_isosceles_angle();
    let a = match angle {
        IsoscelesAngle::Given(a) => a,
        IsoscelesAngle::Special => special,
    };
    let (nu1, nu2) = (masses.nu1(), masses.nu2());
    let mut xs = Vec::new();
    if (nu1 - nu2).abs() <= 1e-12 * nu1.max(nu2) {
        xs.extend([a / 2.0, a / 2.0 + PI]);
    } else {
        if (a - special).abs() <= ANGLE_TOL {
            xs.push(a / 2.0);
        }
        if (a - 2.0 * PI / 3.0).abs() <= ANGLE_TOL {
            xs.push(a / 2.0 + PI);
        }
    }
    let pot = Cotangent::new(radius);
    xs.into_iter()
        .filter_map(|x| rotator_from_shape(masses, &Shape { a, x }, &pot, residual_tol).ok())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExceptionalCase {
    /// `G₁₂ = G₂₃` and `F₁₂ = F₂₃`, governed by `ν₁`.
    Case2,
    /// `G₁₂ = G₃₁` and `F₁₂ = F₃₁`, governed by `ν₂`.
    Case3,
}

/// Closed-form angles of an exceptional shape. `θ₁₂ = θ₁ − θ₂` with
/// `sin θ₁₂ > 0`; the second angle is `θ₂₃ = θ₂ − θ₃` (case 2) or
/// `θ₃₁ = θ₃ − θ₁` (case 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceptionalAngles {
    pub case: ExceptionalCase,
    pub sin_12: f64,
    pub cos_12: f64,
    pub sin_other: f64,
    pub cos_other: f64,
}

impl ExceptionalAngles {
    pub fn theta_12(&self) -> f64 {
        self.sin_12.atan2(self.cos_12)
    }

    pub fn theta_other(&self) -> f64 {
        self.sin_other.atan2(self.cos_other)
    }

    /// The mirror image `θ → −θ`, which turns `θ₁₂` into `a = θ₂ − θ₁ ∈ (0, π)`.
    /// G- and F-equalities are odd in every difference and survive the mirror.
    pub fn shape(&self) -> Result<Shape, MeridianError> {
        let a = self.theta_12();
        let x = match self.case {
            ExceptionalCase::Case2 => a + self.theta_other(),
            ExceptionalCase::Case3 => 2.0 * PI - self.theta_other(),
        };
        Shape::new(a, x)
    }
}

/// Both cosine branches of the exceptional angles for mass ratio `nu`
/// (`ν₁` for case 2, `ν₂` for case 3).
pub fn exceptional_case_angles(case: ExceptionalCase, nu: f64) -> [ExceptionalAngles; 2] {
    let d = (1.0 + nu) * (1.0 + nu * nu);
    let q = 1.0 + nu + nu * nu;
    let sin_12 = (nu * q / d).sqrt();
    let cos_12 = 1.0 / d.sqrt();
    let sin_other = (q / d).sqrt();
    let cos_other = (nu.powi(3) / d).sqrt();
    [1.0, -1.0].map(|sg| ExceptionalAngles {
        case,
        sin_12,
        cos_12: sg * cos_12,
        sin_other,
        cos_other: sg * cos_other,
    })
}

/// The only shape with all three G and all three F equal: equal masses at
/// mutual separations 2π/3.
pub fn case4_fixed_point(masses: &MassTriple) -> Option<Shape> {
    masses
        .is_equal(1e-12)
        .then(|| Shape::new(2.0 * PI / 3.0, 4.0 * PI / 3.0).ok())
        .flatten()
}
