//! Relative equilibria with the three bodies on one meridian that rotates
//! about the polar axis.
//!
//! A configuration is described by its shape, `a = θ₂ − θ₁ ∈ (0, π)` and
//! `x = θ₃ − θ₁ ∈ (0, 2π)`. The vanishing of the in-plane angular momentum
//! then fixes the colatitudes up to two antipodal lifts
//! ([`shape_to_configurations`]), and the shape itself has to satisfy a single
//! scalar equation ([`find_meridian_rotators`]).
//!
//! The meridian `a` is a colatitude difference `θ₂ − θ₁`; it is unrelated to
//! the longitude differences used by [`crate::equator`].

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::dynamics::{DynamicsError, ReCandidate};
use crate::geometry::SpherePoint;
use crate::potential::PotentialError;

mod euler;
mod families;
mod reduced;
mod rotator;
mod scan;
mod translation;

pub use euler::{
    euler_limit_check, euler_quintic, quintic_positive_root, EulerLimitReport, EulerLimitRow,
};
pub use families::{
    case4_fixed_point, count_pi_over_2, equilateral_rotator, exceptional_case_angles,
    isosceles_rotators, special_isosceles_angle, ExceptionalAngles, ExceptionalCase,
    IsoscelesAngle,
};
pub use reduced::{g_function, GFunctionParams};
pub use rotator::{
    classify_case, pair_quantities, rotator_from_shape, solve_omega_and_branch, PairQuantities,
    CASE_TOL, CONSISTENCY_TOL,
};
pub use scan::{
    count_rotators, find_meridian_rotators, sweep_counts, RegionCounts, ScanOptions, SweepPoint,
    SweepRow,
};
pub use translation::{
    amplitude_a, shape_to_configurations, MeridianTranslation, AMPLITUDE_TOL, LIFT_TOL,
};

/// Distance from the singular points below which a shape is rejected.
pub const SHAPE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeridianError {
    #[error("θ₂ − θ₁ = {0} is outside (0, π)")]
    InvalidAngle(f64),
    #[error("shape a = {a}, x = {x} sits on a collision or antipodal point")]
    SingularShape { a: f64, x: f64 },
    #[error("amplitude A vanishes, the shape does not fix the colatitudes")]
    AmplitudeZero,
    #[error("lifted colatitudes miss the translation formula by {0:e}")]
    InconsistentLift(f64),
    #[error("shape is not a rigid rotator ({case}): the two equations disagree by {mismatch:e}")]
    NotARotator { case: CaseTag, mismatch: f64 },
    #[error("equation-of-motion residual {0:e} is above tolerance")]
    ResidualTooLarge(f64),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// The four open intervals of `x` between the singular points
/// `0, a, π, π + a, 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    I,
    II,
    III,
    IV,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::I, Region::II, Region::III, Region::IV];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Region of `x` (taken modulo 2π); `None` on a boundary.
    pub fn containing(x: f64, a: f64) -> Option<Region> {
        let x = x.rem_euclid(2.0 * PI);
        Region::ALL.into_iter().find(|r| {
            let (lo, hi) = r.bounds(a);
            lo < x && x < hi
        })
    }

    pub fn bounds(self, a: f64) -> (f64, f64) {
        match self {
            Region::I => (0.0, a),
            Region::II => (a, PI),
            Region::III => (PI, PI + a),
            Region::IV => (PI + a, 2.0 * PI),
        }
    }

    /// Signs of `sin x` and `sin(x − a)` inside the region.
    pub fn signs(self) -> (f64, f64) {
        match self {
            Region::I => (1.0, -1.0),
            Region::II => (1.0, 1.0),
            Region::III => (-1.0, 1.0),
            Region::IV => (-1.0, -1.0),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Region {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" => Ok(Region::I),
            "II" => Ok(Region::II),
            "III" => Ok(Region::III),
            "IV" => Ok(Region::IV),
            other => Err(format!("unknown region {other:?}")),
        }
    }
}

/// Colatitude differences `a = θ₂ − θ₁` and `x = θ₃ − θ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub a: f64,
    pub x: f64,
}

impl Shape {
    /// Validated shape with `x` reduced to `[0, 2π)`.
    pub fn new(a: f64, x: f64) -> Result<Self, MeridianError> {
        if !(a > 0.0 && a < PI) {
            return Err(MeridianError::InvalidAngle(a));
        }
        let x = x.rem_euclid(2.0 * PI);
        let near = |p: f64| (x - p).abs() <= SHAPE_EPS;
        if [0.0, a, PI, PI + a, 2.0 * PI].into_iter().any(near) {
            return Err(MeridianError::SingularShape { a, x });
        }
        Ok(Shape { a, x })
    }

    /// `θ₃ − θ₂`.
    pub fn theta32(&self) -> f64 {
        self.x - self.a
    }

    pub fn region(&self) -> Option<Region> {
        Region::containing(self.x, self.a)
    }

    /// Colatitude offsets of the three bodies relative to body 1.
    pub(crate) fn offsets(&self) -> [f64; 3] {
        [0.0, self.a, self.x]
    }
}

/// The sign `s` that picks one of the two colatitude solutions of
/// `Σ mₖ sin 2θₖ = 0`; the two differ by a rotation through π/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn from_sign(v: f64) -> Branch {
        if v < 0.0 {
            Branch::Minus
        } else {
            Branch::Plus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Both G-differences nonzero.
    Case1,
    /// `G₁₂ = G₂₃`.
    Case2,
    /// `G₁₂ = G₃₁`.
    Case3,
    /// All three G equal: a fixed point.
    Case4FixedPoint,
    /// `A = 0`: the shape is a fixed point whose orientation is free.
    AZeroFixedPoint,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Case1 => "case1",
            CaseTag::Case2 => "case2",
            CaseTag::Case3 => "case3",
            CaseTag::Case4FixedPoint => "case4-fixed-point",
            CaseTag::AZeroFixedPoint => "a-zero-fixed-point",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CaseTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            CaseTag::Case1,
            CaseTag::Case2,
            CaseTag::Case3,
            CaseTag::Case4FixedPoint,
            CaseTag::AZeroFixedPoint,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
        .ok_or_else(|| format!("unknown case tag {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    Rotating { s: Branch, omega_squared: f64 },
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeridianSolution {
    pub shape: Shape,
    pub region: Region,
    pub case: CaseTag,
    /// `None` when `A = 0`.
    pub translation: Option<MeridianTranslation>,
    pub motion: Motion,
    /// Largest residual over both antipodal lifts.
    pub residual: f64,
}

impl MeridianSolution {
    pub fn theta(&self) -> [f64; 3] {
        match &self.translation {
            Some(t) => t.theta,
            None => self.shape.offsets(),
        }
    }

    /// The antipodal partner `θₖ + π`.
    pub fn theta_alt(&self) -> [f64; 3] {
        match &self.translation {
            Some(t) => t.theta_alt,
            None => self
                .shape
                .offsets()
                .map(|t| crate::geometry::wrap_pi(t + PI)),
        }
    }

    pub fn omega_squared(&self) -> Option<f64> {
        match self.motion {
            Motion::Rotating { omega_squared, .. } => Some(omega_squared),
            Motion::FixedPoint => None,
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega_squared().map_or(0.0, f64::sqrt)
    }

    pub fn s(&self) -> Option<Branch> {
        match self.motion {
            Motion::Rotating { s, .. } => Some(s),
            Motion::FixedPoint => None,
        }
    }

    pub fn candidate(&self) -> ReCandidate {
        candidate_from(self.theta(), self.omega())
    }

    pub fn candidate_alt(&self) -> ReCandidate {
        candidate_from(self.theta_alt(), self.omega())
    }
}

/// Bodies on the meridian `φ = 0`.
pub fn candidate_from(theta: [f64; 3], omega: f64) -> ReCandidate {
    ReCandidate {
        points: theta.map(|t| SpherePoint::new(t, 0.0)),
        omega,
    }
}
