//! From a shape to absolute colatitudes via `Σ mₖ sin 2θₖ = 0`.

use std::f64::consts::PI;

use super::{Branch, MeridianError, Shape};
use crate::dynamics::MassTriple;
use crate::geometry::wrap_pi;

/// `A` below this fraction of the total mass counts as zero.
pub const AMPLITUDE_TOL: f64 = 1e-12;
/// Allowed mismatch between the lifted colatitudes and the translation formula.
pub const LIFT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeridianTranslation {
    /// `A = |m₁ + m₂e^{2ia} + m₃e^{2ix}|`.
    pub amplitude: f64,
    /// Phase with `A e^{2iα} = m₁ + m₂e^{2ia} + m₃e^{2ix}`.
    pub alpha: f64,
    pub s: Branch,
    /// Colatitudes in `(-π, π]`.
    pub theta: [f64; 3],
    /// Antipodal lift `θₖ + π`, wrapped.
    pub theta_alt: [f64; 3],
}

/// `(A, A cos 2α, A sin 2α)`.
fn phasor(masses: &MassTriple, shape: &Shape) -> (f64, f64, f64) {
    let [m1, m2, m3] = masses.as_array();
    let (s2a, c2a) = (2.0 * shape.a).sin_cos();
    let (s2x, c2x) = (2.0 * shape.x).sin_cos();
    let re = m1 + m2 * c2a + m3 * c2x;
    let im = m2 * s2a + m3 * s2x;
    (re.hypot(im), re, im)
}

pub fn amplitude_a(masses: &MassTriple, shape: &Shape) -> f64 {
    phasor(masses, shape).0
}

pub(crate) fn amplitude_is_zero(masses: &MassTriple, amplitude: f64) -> bool {
    amplitude <= AMPLITUDE_TOL * masses.total()
}

/// Colatitudes of the configuration with the given shape and branch.
///
/// `2θ₁ = −2α` for `s = +1` and `−2α + π` for `s = −1`; the lift `θ₁ + π`
/// is returned alongside.
pub fn shape_to_configurations(
    masses: &MassTriple,
    shape: &Shape,
    s: Branch,
) -> Result<MeridianTranslation, MeridianError> {
    let (amp, re, im) = phasor(masses, shape);
    if amplitude_is_zero(masses, amp) {
        return Err(MeridianError::AmplitudeZero);
    }
    let sg = s.sign();
    let t1 = 0.5 * (-sg * im).atan2(sg * re);
    let offsets = shape.offsets();
    let theta = offsets.map(|o| wrap_pi(t1 + o));
    let theta_alt = theta.map(|t| wrap_pi(t + PI));

    // e^{2iθₖ} = (s/A) Σⱼ mⱼ e^{2i(θₖ−θⱼ)} must hold for every k
    let m = masses.as_array();
    let mut mismatch = 0.0f64;
    for k in 0..3 {
        let (mut ps, mut pc) = (0.0, 0.0);
        for j in 0..3 {
            let (sn, cs) = (2.0 * (offsets[k] - offsets[j])).sin_cos();
            ps += m[j] * sn;
            pc += m[j] * cs;
        }
        let (sk, ck) = (2.0 * theta[k]).sin_cos();
        mismatch = mismatch
            .max((sk - sg * ps / amp).abs())
            .max((ck - sg * pc / amp).abs());
    }
    if mismatch > LIFT_TOL {
        return Err(MeridianError::InconsistentLift(mismatch));
    }
    Ok(MeridianTranslation {
        amplitude: amp,
        alpha: 0.5 * im.atan2(re),
        s,
        theta,
        theta_alt,
    })
}
