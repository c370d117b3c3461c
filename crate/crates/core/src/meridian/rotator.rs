//! Pair quantities, case analysis and the rotation rate of a meridian shape.

use super::translation::amplitude_is_zero;
use super::{
    amplitude_a, candidate_from, shape_to_configurations, Branch, CaseTag, MeridianError,
    MeridianSolution, Motion, Shape,
};
use crate::dynamics::{re_residuals, MassTriple};
use crate::geometry::meridian_chord_squared;
use crate::potential::{PairPotential, PAIRS};

/// G-differences below this (after scaling by `m₃√(m₁m₂)`) count as zero.
pub const CASE_TOL: f64 = 1e-12;
/// Allowed disagreement between the two rotator equations, relative to the
/// largest `|Fᵢⱼ|`.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// `Fᵢⱼ = −2mᵢmⱼ sin(θⱼ−θᵢ) U′(D²ᵢⱼ)` and `Gᵢⱼ = mᵢmⱼ sin 2(θⱼ−θᵢ)` for the
/// pairs (1,2), (2,3), (3,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairQuantities {
    pub f: [f64; 3],
    pub g: [f64; 3],
}

impl PairQuantities {
    /// `([F₁₂−F₂₃, F₃₁−F₁₂], [G₁₂−G₂₃, G₃₁−G₁₂])`.
    pub fn differences(&self) -> ([f64; 2], [f64; 2]) {
        let [f12, f23, f31] = self.f;
        let [g12, g23, g31] = self.g;
        ([f12 - f23, f31 - f12], [g12 - g23, g31 - g12])
    }

    pub(crate) fn f_scale(&self) -> f64 {
        self.f
            .iter()
            .fold(f64::MIN_POSITIVE, |acc, v| acc.max(v.abs()))
    }

    /// `(F₁₂−F₂₃)(G₃₁−G₁₂) − (F₃₁−F₁₂)(G₁₂−G₂₃)` and the size of its two terms.
    pub(crate) fn cross_mismatch(&self) -> (f64, f64) {
        let (df, dg) = self.differences();
        let p = df[0] * dg[1];
        let q = df[1] * dg[0];
        (p - q, p.abs() + q.abs())
    }
}

pub fn pair_quantities<P: PairPotential + ?Sized>(
    masses: &MassTriple,
    shape: &Shape,
    pot: &P,
) -> Result<PairQuantities, MeridianError> {
    let m = masses.as_array();
    let o = shape.offsets();
    let r = pot.radius();
    let mut f = [0.0; 3];
    let mut g = [0.0; 3];
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        let delta = o[j] - o[i];
        let d2 = meridian_chord_squared(delta, r);
        let up = pot.u_prime(d2).map_err(|e| e.at_pair(i + 1, j + 1))?;
        f[p] = -2.0 * m[i] * m[j] * delta.sin() * up;
        g[p] = m[i] * m[j] * (2.0 * delta).sin();
    }
    Ok(PairQuantities { f, g })
}

/// Which of `G₁₂ − G₂₃` and `G₃₁ − G₁₂` vanish. Never returns
/// [`CaseTag::AZeroFixedPoint`], which depends on `A` rather than on `G`.
pub fn classify_case(pq: &PairQuantities, masses: &MassTriple) -> CaseTag {
    let [m1, m2, m3] = masses.as_array();
    let scale = m3 * (m1 * m2).sqrt();
    let (_, dg) = pq.differences();
    let z1 = dg[0].abs() / scale <= CASE_TOL;
    let z2 = dg[1].abs() / scale <= CASE_TOL;
    match (z1, z2) {
        (false, false) => CaseTag::Case1,
        (true, false) => CaseTag::Case2,
        (false, true) => CaseTag::Case3,
        (true, true) => CaseTag::Case4FixedPoint,
    }
}

/// `s` and `ω²` from `s ω² / (2A) = (F₁₂−F₂₃)/(G₁₂−G₂₃) = (F₃₁−F₁₂)/(G₃₁−G₁₂)`,
/// with `s` chosen so that `ω² ≥ 0`.
///
/// In the generic case the ratio comes from the equation with the larger
/// G-difference and the other one is checked. A vanishing G-difference
/// requires the matching F-difference to vanish too. When both F-differences
/// vanish the shape is a fixed point.
pub fn solve_omega_and_branch(
    pq: &PairQuantities,
    masses: &MassTriple,
    amplitude: f64,
) -> Result<Motion, MeridianError> {
    let (df, dg) = pq.differences();
    let fs = pq.f_scale();
    let case = classify_case(pq, masses);
    let require_zero = |v: f64| {
        let mismatch = v.abs() / fs;
        if mismatch > CONSISTENCY_TOL {
            Err(MeridianError::NotARotator { case, mismatch })
        } else {
            Ok(())
        }
    };
    // equal F's: the centrifugal term has to vanish on its own
    if require_zero(df[0]).is_ok() && require_zero(df[1]).is_ok() {
        return Ok(Motion::FixedPoint);
    }
    let ratio = match case {
        CaseTag::Case1 => {
            let (k, other) = if dg[0].abs() >= dg[1].abs() {
                (0, 1)
            } else {
                (1, 0)
            };
            let r = df[k] / dg[k];
            require_zero(df[other] - r * dg[other])?;
            r
        }
        CaseTag::Case2 => {
            require_zero(df[0])?;
            df[1] / dg[1]
        }
        CaseTag::Case3 => {
            require_zero(df[1])?;
            df[0] / dg[0]
        }
        CaseTag::Case4FixedPoint | CaseTag::AZeroFixedPoint => {
            require_zero(df[0])?;
            require_zero(df[1])?;
            return Ok(Motion::FixedPoint);
        }
    };
    let omega_squared = 2.0 * amplitude * ratio.abs();
    if omega_squared == 0.0 {
        return Ok(Motion::FixedPoint);
    }
    Ok(Motion::Rotating {
        s: Branch::from_sign(ratio),
        omega_squared,
    })
}

/// Full treatment of one shape: rotation rate, colatitudes and a residual
/// check of both antipodal lifts against the equations of motion.
pub fn rotator_from_shape<P: PairPotential + ?Sized>(
    masses: &MassTriple,
    shape: &Shape,
    pot: &P,
    residual_tol: f64,
) -> Result<MeridianSolution, MeridianError> {
    let shape = Shape::new(shape.a, shape.x)?;
    let region = shape.region().ok_or(MeridianError::SingularShape {
        a: shape.a,
        x: shape.x,
    })?;
    let pq = pair_quantities(masses, &shape, pot)?;
    let amp = amplitude_a(masses, &shape);

    let (case, translation, motion) = if amplitude_is_zero(masses, amp) {
        let (df, _) = pq.differences();
        let mismatch = df[0].abs().max(df[1].abs()) / pq.f_scale();
        let case = match classify_case(&pq, masses) {
            CaseTag::Case4FixedPoint => CaseTag::Case4FixedPoint,
            _ => CaseTag::AZeroFixedPoint,
        };
        if mismatch > CONSISTENCY_TOL {
            return Err(MeridianError::NotARotator { case, mismatch });
        }
        (case, None, Motion::FixedPoint)
    } else {
        let motion = solve_omega_and_branch(&pq, masses, amp)?;
        let s = match motion {
            Motion::Rotating { s, .. } => s,
            Motion::FixedPoint => Branch::Plus,
        };
        let tr = shape_to_configurations(masses, &shape, s)?;
        (classify_case(&pq, masses), Some(tr), motion)
    };

    let mut sol = MeridianSolution {
        shape,
        region,
        case,
        translation,
        motion,
        residual: 0.0,
    };
    let (residual, scale) = lift_residual(&sol, masses, pot)?;
    sol.residual = residual;
    if !(residual <= residual_tol * scale.max(1.0)) {
        return Err(MeridianError::ResidualTooLarge(residual));
    }
    Ok(sol)
}

/// Largest residual over both antipodal lifts, with the term scale of the
/// equations (see [`crate::dynamics::Residuals::within`]).
pub(crate) fn lift_residual<P: PairPotential + ?Sized>(
    sol: &MeridianSolution,
    masses: &MassTriple,
    pot: &P,
) -> Result<(f64, f64), MeridianError> {
    let w = sol.omega();
    let a = re_residuals(&candidate_from(sol.theta(), w), masses, pot)?;
    let b = re_residuals(&candidate_from(sol.theta_alt(), w), masses, pot)?;
    Ok((a.max_norm().max(b.max_norm()), a.scale.max(b.scale)))
}
