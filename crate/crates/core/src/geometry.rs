//! Spherical-coordinate kinematics on a sphere of radius `R`.
//!
//! Points are stored as colatitude/longitude pairs. The colatitude is allowed
//! to range over `[-π, π]` so that a whole meridian can be parameterised by a
//! single angle; the embedding formula is valid for that extended range.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("sphere radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("arc angle {0} outside [0, π]")]
    ArcOutOfRange(f64),
}

/// Radius of the sphere. `epsilon = 1/(2R)` is the factor relating chord
/// length and half the arc angle: `ε D = sin(σ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SphereRadius(f64);

impl SphereRadius {
    pub const UNIT: SphereRadius = SphereRadius(1.0);

    pub fn new(r: f64) -> Result<Self, GeometryError> {
        if r.is_finite() && r > 0.0 {
            Ok(SphereRadius(r))
        } else {
            Err(GeometryError::InvalidRadius(r))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn epsilon(self) -> f64 {
        0.5 / self.0
    }
}

impl Default for SphereRadius {
    fn default() -> Self {
        SphereRadius::UNIT
    }
}

/// A point on the sphere in spherical coordinates (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        SpherePoint { theta, phi }
    }

    /// Cartesian embedding `R (sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn embed(self, r: SphereRadius) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        let r = r.get();
        [r * st * cp, r * st * sp, r * ct]
    }

    /// Inverse of [`embed`](Self::embed) with `θ ∈ [0, π]`, `φ ∈ (-π, π]`.
    pub fn from_cartesian(x: [f64; 3]) -> Self {
        let rho = x[0].hypot(x[1]);
        SpherePoint {
            theta: rho.atan2(x[2]),
            phi: x[1].atan2(x[0]),
        }
    }

    /// Same point on the sphere with `θ ∈ [0, π]` and `φ ∈ [0, 2π)`.
    pub fn canonical(self) -> Self {
        let mut theta = wrap_pi(self.theta);
        let mut phi = self.phi;
        if theta < 0.0 {
            theta = -theta;
            phi += PI;
        }
        SpherePoint {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        }
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let w = (angle + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// `sin²(σ/2) = sin²(Δθ/2) + sinθᵢ sinθⱼ sin²(Δφ/2)`, free of the
/// cancellation in `1 − cos σ` for nearby points.
fn haversine(p_i: SpherePoint, p_j: SpherePoint) -> f64 {
    let dt = (0.5 * (p_i.theta - p_j.theta)).sin();
    let dp = (0.5 * (p_i.phi - p_j.phi)).sin();
    (dt * dt + p_i.theta.sin() * p_j.theta.sin() * dp * dp).clamp(0.0, 1.0)
}

/// Squared chord length `2R²(1 − cosθᵢcosθⱼ − sinθᵢsinθⱼcos(φᵢ−φⱼ))`,
/// evaluated in half-angle form.
///
/// Symmetric in its arguments bit for bit, and within `[0, 4R²]`.
pub fn chord_squared(p_i: SpherePoint, p_j: SpherePoint, r: SphereRadius) -> f64 {
    4.0 * r.get() * r.get() * haversine(p_i, p_j)
}

/// Squared chord `4R² sin²(Δ/2)` between two points on one meridian whose
/// colatitudes differ by `Δ`.
pub fn meridian_chord_squared(delta: f64, r: SphereRadius) -> f64 {
    let h = 2.0 * r.get() * (0.5 * delta).sin();
    h * h
}

/// Arc angle between two points as seen from the centre, in `[0, π]`.
pub fn arc_angle(p_i: SpherePoint, p_j: SpherePoint) -> f64 {
    2.0 * haversine(p_i, p_j).sqrt().asin()
}

/// Chord length `2R sin(σ/2)` of an arc angle.
pub fn chord_from_arc(sigma: f64, r: SphereRadius) -> Result<f64, GeometryError> {
    if !(0.0..=PI).contains(&sigma) {
        return Err(GeometryError::ArcOutOfRange(sigma));
    }
    Ok(2.0 * r.get() * (0.5 * sigma).sin())
}

/// Arc angle of a squared chord length; inverse of [`chord_from_arc`].
pub fn arc_from_chord_squared(d2: f64, r: SphereRadius) -> f64 {
    let half = (d2.max(0.0).sqrt() * r.epsilon()).min(1.0);
    2.0 * half.asin()
}

/// Arc angle between two unit-free Cartesian vectors, accurate near 0 and π.
pub(crate) fn arc_between(u: [f64; 3], v: [f64; 3]) -> f64 {
    let c = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let cross = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    cross.atan2(dot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EQ0: SpherePoint = SpherePoint {
        theta: PI / 2.0,
        phi: 0.0,
    };

    fn brute_chord2(p: SpherePoint, q: SpherePoint, r: SphereRadius) -> f64 {
        let a = p.embed(r);
        let b = q.embed(r);
        (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
    }

    #[test]
    fn chord_examples() {
        let r = SphereRadius::UNIT;
        assert_eq!(chord_squared(EQ0, EQ0, r), 0.0);
        let antipode = SpherePoint::new(PI / 2.0, PI);
        assert!((chord_squared(EQ0, antipode, r) - 4.0).abs() < 1e-15);
        let quarter = SpherePoint::new(PI / 2.0, PI / 2.0);
        let oracle = brute_chord2(EQ0, quarter, r);
        assert!((oracle - 2.0).abs() < 1e-15);
        assert!((chord_squared(EQ0, quarter, r) - oracle).abs() < 1e-15);
    }

    #[test]
    fn arc_examples() {
        assert_eq!(arc_angle(EQ0, EQ0), 0.0);
        assert!((arc_angle(EQ0, SpherePoint::new(PI / 2.0, PI)) - PI).abs() < 1e-7);
        let quarter = SpherePoint::new(PI / 2.0, PI / 2.0);
        assert!((arc_angle(EQ0, quarter) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn chord_from_arc_examples() {
        let r = SphereRadius::UNIT;
        assert!((chord_from_arc(PI, r).unwrap() - 2.0).abs() < 1e-15);
        assert!((chord_from_arc(PI / 2.0, r).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((chord_from_arc(PI / 3.0, r).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            chord_from_arc(-0.1, r),
            Err(GeometryError::ArcOutOfRange(_))
        ));
        assert!(chord_from_arc(PI + 1e-9, r).is_err());
    }

    #[test]
    fn radius_validation() {
        assert!(SphereRadius::new(0.0).is_err());
        assert!(SphereRadius::new(f64::NAN).is_err());
        let r = SphereRadius::new(3.5).unwrap();
        assert!((r.epsilon() * 2.0 * r.get() - 1.0).abs() < 1e-16);
    }

    #[test]
    fn canonical_keeps_the_point() {
        let r = SphereRadius::UNIT;
        let p = SpherePoint::new(-2.0, 0.3);
        let c = p.canonical();
        assert!((0.0..=PI).contains(&c.theta));
        let (a, b) = (p.embed(r), c.embed(r));
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() < 1e-15);
        }
    }

    fn point() -> impl Strategy<Value = SpherePoint> {
        (-PI..PI, 0.0..2.0 * PI).prop_map(|(t, p)| SpherePoint::new(t, p))
    }

    proptest! {
        #[test]
        fn embedding_lies_on_sphere(p in point(), r in 0.1f64..100.0) {
            let r = SphereRadius::new(r).unwrap();
            let x = p.embed(r);
            let n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            prop_assert!((n2 / (r.get() * r.get()) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn arc_chord_round_trip(sigma in 0.0..PI, r in 0.1f64..10.0) {
            let r = SphereRadius::new(r).unwrap();
            let d = chord_from_arc(sigma, r).unwrap();
            let back = arc_from_chord_squared(d * d, r);
            prop_assert!((back - sigma).abs() < 1e-10, "{} vs {}", back, sigma);
        }

        #[test]
        fn chord_squared_is_symmetric(p in point(), q in point()) {
            let r = SphereRadius::UNIT;
            prop_assert_eq!(chord_squared(p, q, r), chord_squared(q, p, r));
        }

        #[test]
        fn chord_squared_matches_arc_route(p in point(), q in point(), r in 0.5f64..5.0) {
            let r = SphereRadius::new(r).unwrap();
            let direct = chord_squared(p, q, r);
            let via_arc = chord_from_arc(arc_angle(p, q), r).unwrap().powi(2);
            let scale = direct.max(1e-3 * r.get() * r.get());
            prop_assert!((direct - via_arc).abs() / scale < 1e-10);
            let oracle = brute_chord2(p, q, r);
            prop_assert!((direct - oracle).abs() < 1e-12 * r.get() * r.get() * 4.0);
        }

        #[test]
        fn meridian_chord_matches_general_formula(t1 in -PI..PI, t2 in -PI..PI, r in 0.5f64..5.0) {
            let r = SphereRadius::new(r).unwrap();
            let general = chord_squared(SpherePoint::new(t1, 0.0), SpherePoint::new(t2, 0.0), r);
            let meridian = meridian_chord_squared(t2 - t1, r);
            prop_assert!((general - meridian).abs() < 1e-12 * r.get() * r.get());
        }
    }
}
