//! Equations of motion for three bodies on the sphere and the relative
//! equilibrium residuals evaluated directly from them.
//!
//! Everything here works in raw coordinates. The solvers in
//! [`crate::equator`] and [`crate::meridian`] reduce these equations
//! algebraically; the residuals below never reuse that algebra, so a solver
//! output checked here is checked independently.

use thiserror::Error;

use crate::geometry::{arc_between, chord_squared, SpherePoint, SphereRadius};
use crate::potential::{PairPotential, PotentialError, PAIRS};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DynamicsError {
    #[error("masses must be positive and finite, got ({0}, {1}, {2})")]
    InvalidMasses(f64, f64, f64),
    #[error(transparent)]
    Singular(#[from] PotentialError),
    #[error("body {0} sits on a pole where the longitude equation is singular")]
    PolarChart(usize),
    #[error("step size and end time must be positive and finite")]
    InvalidStep,
}

/// Three strictly positive masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassTriple([f64; 3]);

impl MassTriple {
    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self, DynamicsError> {
        let ok = |m: f64| m.is_finite() && m > 0.0;
        if ok(m1) && ok(m2) && ok(m3) {
            Ok(MassTriple([m1, m2, m3]))
        } else {
            Err(DynamicsError::InvalidMasses(m1, m2, m3))
        }
    }

    pub fn equal() -> Self {
        MassTriple([1.0; 3])
    }

    /// `(ν₁, ν₂, 1)`.
    pub fn from_ratios(nu1: f64, nu2: f64) -> Result<Self, DynamicsError> {
        Self::new(nu1, nu2, 1.0)
    }

    #[inline]
    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `m₁/m₃`
    pub fn nu1(&self) -> f64 {
        self.0[0] / self.0[2]
    }

    /// `m₂/m₃`
    pub fn nu2(&self) -> f64 {
        self.0[1] / self.0[2]
    }

    /// `μₖ = √(mᵢmⱼ)` with `(i, j, k)` cyclic.
    pub fn mu(&self) -> [f64; 3] {
        let [m1, m2, m3] = self.0;
        [(m2 * m3).sqrt(), (m3 * m1).sqrt(), (m1 * m2).sqrt()]
    }

    /// All three masses agree to `rel_tol`.
    pub fn is_equal(&self, rel_tol: f64) -> bool {
        let [m1, m2, m3] = self.0;
        let scale = m1.max(m2).max(m3);
        (m1 - m2).abs() <= rel_tol * scale && (m2 - m3).abs() <= rel_tol * scale
    }
}

/// Positions and angular velocities of the three bodies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalState {
    pub points: [SpherePoint; 3],
    pub theta_dot: [f64; 3],
    pub phi_dot: [f64; 3],
    pub radius: SphereRadius,
}

impl SphericalState {
    /// Uniform rotation about the z-axis: `θ̇ = 0`, `φ̇ = ω`.
    pub fn rigid_rotation(points: [SpherePoint; 3], omega: f64, radius: SphereRadius) -> Self {
        SphericalState {
            points,
            theta_dot: [0.0; 3],
            phi_dot: [omega; 3],
            radius,
        }
    }

    pub fn kinetic_energy(&self, masses: &MassTriple) -> f64 {
        let r2 = self.radius.get().powi(2);
        let m = masses.as_array();
        (0..3)
            .map(|k| {
                let s = self.points[k].theta.sin();
                0.5 * m[k] * (self.theta_dot[k].powi(2) + s * s * self.phi_dot[k].powi(2))
            })
            .sum::<f64>()
            * r2
    }

    fn cartesian(&self) -> Cartesian {
        let r = self.radius.get();
        let mut x = [[0.0; 3]; 3];
        let mut v = [[0.0; 3]; 3];
        for k in 0..3 {
            let (st, ct) = self.points[k].theta.sin_cos();
            let (sp, cp) = self.points[k].phi.sin_cos();
            let (td, pd) = (self.theta_dot[k], self.phi_dot[k]);
            x[k] = [r * st * cp, r * st * sp, r * ct];
            v[k] = [
                r * (ct * cp * td - st * sp * pd),
                r * (ct * sp * td + st * cp * pd),
                -r * st * td,
            ];
        }
        Cartesian { x, v }
    }
}

/// Angular momentum `c = Σ mₖ xₖ × ẋₖ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AngularMomentum {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl AngularMomentum {
    pub fn norm(&self) -> f64 {
        (self.cx * self.cx + self.cy * self.cy + self.cz * self.cz).sqrt()
    }

    fn sub(&self, o: &AngularMomentum) -> AngularMomentum {
        AngularMomentum {
            cx: self.cx - o.cx,
            cy: self.cy - o.cy,
            cz: self.cz - o.cz,
        }
    }
}

/// The three components in spherical coordinates.
pub fn angular_momentum(state: &SphericalState, masses: &MassTriple) -> AngularMomentum {
    let r2 = state.radius.get().powi(2);
    let m = masses.as_array();
    let mut c = AngularMomentum::default();
    for k in 0..3 {
        let (st, ct) = state.points[k].theta.sin_cos();
        let (sp, cp) = state.points[k].phi.sin_cos();
        let (td, pd) = (state.theta_dot[k], state.phi_dot[k]);
        c.cx += m[k] * (-sp * td - st * ct * cp * pd);
        c.cy += m[k] * (cp * td - st * ct * sp * pd);
        c.cz += m[k] * st * st * pd;
    }
    c.cx *= r2;
    c.cy *= r2;
    c.cz *= r2;
    c
}

/// Time derivative of a [`SphericalState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub theta_dot: [f64; 3],
    pub phi_dot: [f64; 3],
    pub theta_ddot: [f64; 3],
    pub phi_ddot: [f64; 3],
}

/// `U′(D²)` for every pair, in [`PAIRS`] order.
fn pair_derivatives<P: PairPotential + ?Sized>(
    points: &[SpherePoint; 3],
    pot: &P,
) -> Result<[f64; 3], PotentialError> {
    let r = pot.radius();
    let mut out = [0.0; 3];
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        let d2 = chord_squared(points[i], points[j], r);
        out[p] = pot.u_prime(d2).map_err(|e| e.at_pair(i + 1, j + 1))?;
    }
    Ok(out)
}

fn pair_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (1, 2) => 1,
        _ => 2,
    }
}

/// Euler–Lagrange equations for `θₖ` and `φₖ` solved for the accelerations.
///
/// The longitude equation divides by `sin²θₖ`; a body on a pole is reported as
/// [`DynamicsError::PolarChart`]. Use [`integrate`] for such states.
pub fn eom_rhs<P: PairPotential + ?Sized>(
    state: &SphericalState,
    masses: &MassTriple,
    pot: &P,
) -> Result<StateDerivative, DynamicsError> {
    let up = pair_derivatives(&state.points, pot)?;
    let m = masses.as_array();
    let pts = &state.points;
    let mut theta_ddot = [0.0; 3];
    let mut phi_ddot = [0.0; 3];
    for k in 0..3 {
        let (sk, ck) = pts[k].theta.sin_cos();
        let mut gen_theta = 0.0;
        let mut gen_phi = 0.0;
        for i in (0..3).filter(|&i| i != k) {
            let (si, ci) = pts[i].theta.sin_cos();
            let dphi = pts[k].phi - pts[i].phi;
            let u = up[pair_index(i, k)];
            gen_theta += 2.0 * m[i] * u * (sk * ci - ck * si * dphi.cos());
            gen_phi += 2.0 * m[i] * u * si * sk * dphi.sin();
        }
        let (td, pd) = (state.theta_dot[k], state.phi_dot[k]);
        theta_ddot[k] = sk * ck * pd * pd + gen_theta;
        if sk.abs() < 1e-12 {
            return Err(DynamicsError::PolarChart(k + 1));
        }
        phi_ddot[k] = (gen_phi - 2.0 * sk * ck * td * pd) / (sk * sk);
    }
    Ok(StateDerivative {
        theta_dot: state.theta_dot,
        phi_dot: state.phi_dot,
        theta_ddot,
        phi_ddot,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cartesian {
    x: [[f64; 3]; 3],
    v: [[f64; 3]; 3],
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl Cartesian {
    /// Constrained accelerations: tangential part of the pair forces plus the
    /// centripetal term that keeps each body on the sphere.
    fn accel<P: PairPotential + ?Sized>(
        &self,
        masses: &[f64; 3],
        pot: &P,
        r: f64,
    ) -> Result<[[f64; 3]; 3], PotentialError> {
        let mut acc = [[0.0; 3]; 3];
        for &(i, j) in PAIRS.iter() {
            let d = [
                self.x[i][0] - self.x[j][0],
                self.x[i][1] - self.x[j][1],
                self.x[i][2] - self.x[j][2],
            ];
            let up = pot
                .u_prime(dot(d, d))
                .map_err(|e| e.at_pair(i + 1, j + 1))?;
            for c in 0..3 {
                acc[i][c] += 2.0 * masses[j] * up * d[c];
                acc[j][c] -= 2.0 * masses[i] * up * d[c];
            }
        }
        let r2 = r * r;
        for k in 0..3 {
            let x = self.x[k];
            let radial = dot(acc[k], x) / r2;
            let centripetal = dot(self.v[k], self.v[k]) / r2;
            for c in 0..3 {
                acc[k][c] -= (radial + centripetal) * x[c];
            }
        }
        Ok(acc)
    }

    fn axpy(&self, h: f64, dx: &[[f64; 3]; 3], dv: &[[f64; 3]; 3]) -> Cartesian {
        let mut out = *self;
        for k in 0..3 {
            for c in 0..3 {
                out.x[k][c] += h * dx[k][c];
                out.v[k][c] += h * dv[k][c];
            }
        }
        out
    }

    fn momentum(&self, m: &[f64; 3]) -> AngularMomentum {
        let mut c = [0.0; 3];
        for k in 0..3 {
            let l = cross(self.x[k], self.v[k]);
            for a in 0..3 {
                c[a] += m[k] * l[a];
            }
        }
        AngularMomentum {
            cx: c[0],
            cy: c[1],
            cz: c[2],
        }
    }

    fn energy<P: PairPotential + ?Sized>(
        &self,
        m: &[f64; 3],
        pot: &P,
    ) -> Result<(f64, f64), PotentialError> {
        let kin: f64 = (0..3).map(|k| 0.5 * m[k] * dot(self.v[k], self.v[k])).sum();
        let mut v = 0.0;
        for &(i, j) in PAIRS.iter() {
            let d = [
                self.x[i][0] - self.x[j][0],
                self.x[i][1] - self.x[j][1],
                self.x[i][2] - self.x[j][2],
            ];
            v += m[i] * m[j] * pot.u(dot(d, d)).map_err(|e| e.at_pair(i + 1, j + 1))?;
        }
        Ok((kin, v))
    }

    fn arcs(&self) -> [f64; 3] {
        PAIRS.map(|(i, j)| arc_between(self.x[i], self.x[j]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub dt: f64,
    /// Keep every n-th step in [`Trajectory::samples`]; the drift statistics
    /// always use every step.
    pub record_every: usize,
}

impl IntegrateOptions {
    /// One period `T` split into `steps` fixed steps.
    pub fn period(t_end: f64, steps: usize) -> Self {
        IntegrateOptions {
            t_end,
            dt: t_end / steps as f64,
            record_every: (steps / 100).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub positions: [[f64; 3]; 3],
    pub velocities: [[f64; 3]; 3],
    /// Arc angles σ₁₂, σ₂₃, σ₃₁.
    pub arcs: [f64; 3],
}

/// Largest deviations from the initial values seen along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DriftReport {
    pub max_arc_drift: f64,
    /// `|E(t) − E(0)| / (|K(0)| + |V(0)|)` with `E = K − V`.
    pub energy_rel_drift: f64,
    pub momentum_abs_drift: f64,
    /// Absolute drift over `|c(0)|`, or the absolute drift when `c(0) = 0`.
    pub momentum_rel_drift: f64,
    pub initial_momentum: AngularMomentum,
    pub max_radius_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub drift: DriftReport,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("integration stopped at t = {time}: {source}")]
pub struct IntegrationFailure {
    pub time: f64,
    pub partial: Trajectory,
    #[source]
    pub source: DynamicsError,
}

struct DriftMonitor {
    arcs0: [f64; 3],
    e0: f64,
    e_scale: f64,
    c0: AngularMomentum,
    r: f64,
    report: DriftReport,
}

impl DriftMonitor {
    fn observe(&mut self, s: &Cartesian, m: &[f64; 3], kin: f64, v: f64) {
        let arcs = s.arcs();
        for p in 0..3 {
            self.report.max_arc_drift = self
                .report
                .max_arc_drift
                .max((arcs[p] - self.arcs0[p]).abs());
        }
        let de = ((kin - v) - self.e0).abs() / self.e_scale;
        self.report.energy_rel_drift = self.report.energy_rel_drift.max(de);
        let dc = s.momentum(m).sub(&self.c0).norm();
        self.report.momentum_abs_drift = self.report.momentum_abs_drift.max(dc);
        for k in 0..3 {
            let err = (dot(s.x[k], s.x[k]).sqrt() - self.r).abs() / self.r;
            self.report.max_radius_error = self.report.max_radius_error.max(err);
        }
    }

    fn finish(mut self) -> DriftReport {
        let c0 = self.c0.norm();
        self.report.momentum_rel_drift = if c0 > 0.0 {
            self.report.momentum_abs_drift / c0
        } else {
            self.report.momentum_abs_drift
        };
        self.report.initial_momentum = self.c0;
        self.report
    }
}

fn sample(t: f64, s: &Cartesian) -> TrajectorySample {
    TrajectorySample {
        t,
        positions: s.x,
        velocities: s.v,
        arcs: s.arcs(),
    }
}

/// Fixed-step classical Runge–Kutta integration of the full dynamics.
///
/// The state is advanced in Cartesian coordinates with the sphere constraint
/// built into the accelerations, which stays regular when a body passes a
/// pole. On a singular encounter the samples gathered so far are returned
/// inside the error.
pub fn integrate<P: PairPotential + ?Sized>(
    state: &SphericalState,
    masses: &MassTriple,
    pot: &P,
    opts: IntegrateOptions,
) -> Result<Trajectory, IntegrationFailure> {
    let r = state.radius.get();
    let m = masses.as_array();
    let fail = |time: f64, samples: Vec<TrajectorySample>, drift: DriftReport, source| {
        IntegrationFailure {
            time,
            partial: Trajectory { samples, drift },
            source,
        }
    };
    if !(opts.dt > 0.0 && opts.dt.is_finite() && opts.t_end > 0.0 && opts.t_end.is_finite()) {
        return Err(fail(
            0.0,
            Vec::new(),
            DriftReport::default(),
            DynamicsError::InvalidStep,
        ));
    }
    let mut s = state.cartesian();
    let (k0, v0) = s
        .energy(&m, pot)
        .map_err(|e| fail(0.0, Vec::new(), DriftReport::default(), e.into()))?;
    let mut mon = DriftMonitor {
        arcs0: s.arcs(),
        e0: k0 - v0,
        e_scale: (k0.abs() + v0.abs()).max(f64::MIN_POSITIVE),
        c0: s.momentum(&m),
        r,
        report: DriftReport::default(),
    };
    let mut samples = vec![sample(0.0, &s)];
    let steps = (opts.t_end / opts.dt).round().max(1.0) as usize;
    let h = opts.t_end / steps as f64;
    let every = opts.record_every.max(1);

    for n in 1..=steps {
        let t = (n - 1) as f64 * h;
        let stage = |c: &Cartesian| c.accel(&m, pot, r).map(|a| (c.v, a));
        let step = (|| {
            let (k1x, k1v) = stage(&s)?;
            let (k2x, k2v) = stage(&s.axpy(0.5 * h, &k1x, &k1v))?;
            let (k3x, k3v) = stage(&s.axpy(0.5 * h, &k2x, &k2v))?;
            let (k4x, k4v) = stage(&s.axpy(h, &k3x, &k3v))?;
            let mut next = s;
            for k in 0..3 {
                for c in 0..3 {
                    next.x[k][c] +=
                        h / 6.0 * (k1x[k][c] + 2.0 * k2x[k][c] + 2.0 * k3x[k][c] + k4x[k][c]);
                    next.v[k][c] +=
                        h / 6.0 * (k1v[k][c] + 2.0 * k2v[k][c] + 2.0 * k3v[k][c] + k4v[k][c]);
                }
            }
            let (kin, v) = next.energy(&m, pot)?;
            Ok::<_, PotentialError>((next, kin, v))
        })();
        match step {
            Ok((next, kin, v)) => {
                s = next;
                mon.observe(&s, &m, kin, v);
                if n % every == 0 || n == steps {
                    samples.push(sample(n as f64 * h, &s));
                }
            }
            Err(e) => return Err(fail(t, samples, mon.finish(), e.into())),
        }
    }
    Ok(Trajectory {
        samples,
        drift: mon.finish(),
    })
}

/// A configuration together with a common angular velocity about the z-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReCandidate {
    pub points: [SpherePoint; 3],
    pub omega: f64,
}

impl ReCandidate {
    pub fn state(&self, radius: SphereRadius) -> SphericalState {
        SphericalState::rigid_rotation(self.points, self.omega, radius)
    }
}

/// Left-minus-right values of the relative equilibrium conditions:
/// the two planar components of `Σ mₖ sinθₖ cosθₖ eₖ = 0` (only enforced when
/// `ω ≠ 0`), the two independent differences of the longitude equations, and
/// the three colatitude equations with `θ̈ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub axis: [f64; 2],
    pub longitude: [f64; 2],
    pub colatitude: [f64; 3],
    /// Largest single term entering any of the equations; rounding makes
    /// residuals of order `ε · scale` unavoidable.
    pub scale: f64,
}

impl Residuals {
    pub fn as_array(&self) -> [f64; 7] {
        let [a0, a1] = self.axis;
        let [l0, l1] = self.longitude;
        let [c0, c1, c2] = self.colatitude;
        [a0, a1, l0, l1, c0, c1, c2]
    }

    pub fn max_norm(&self) -> f64 {
        self.as_array()
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// `max_norm ≤ tol · max(1, scale)`: absolute for unit-scale problems,
    /// relative when the individual forces are large.
    pub fn within(&self, tol: f64) -> bool {
        self.max_norm() <= tol * self.scale.max(1.0)
    }
}

pub fn re_residuals<P: PairPotential + ?Sized>(
    candidate: &ReCandidate,
    masses: &MassTriple,
    pot: &P,
) -> Result<Residuals, DynamicsError> {
    let pts = &candidate.points;
    let m = masses.as_array();
    let up = pair_derivatives(pts, pot)?;
    let omega = candidate.omega;

    let mut scale = 0.0f64;
    let mut axis = [0.0; 2];
    if omega != 0.0 {
        for k in 0..3 {
            let (st, ct) = pts[k].theta.sin_cos();
            let (sp, cp) = pts[k].phi.sin_cos();
            axis[0] += m[k] * st * ct * cp;
            axis[1] += m[k] * st * ct * sp;
            scale = scale.max((m[k] * st * ct).abs());
        }
    }

    // mᵢmⱼ U′(D²ᵢⱼ) sinθᵢ sinθⱼ sin(φᵢ − φⱼ) for (1,2), (2,3), (3,1)
    let torque = PAIRS.map(|(i, j)| {
        let u = up[pair_index(i, j)];
        m[i] * m[j] * u * pts[i].theta.sin() * pts[j].theta.sin() * (pts[i].phi - pts[j].phi).sin()
    });
    let longitude = [torque[0] - torque[1], torque[1] - torque[2]];
    scale = torque.iter().fold(scale, |acc, t| acc.max(t.abs()));

    let mut colatitude = [0.0; 3];
    for (k, out) in colatitude.iter_mut().enumerate() {
        let (sk, ck) = pts[k].theta.sin_cos();
        let mut rhs = 0.0;
        for i in (0..3).filter(|&i| i != k) {
            let (si, ci) = pts[i].theta.sin_cos();
            let u = up[pair_index(i, k)];
            let term =
                2.0 * m[k] * m[i] * u * (sk * ci - ck * si * (pts[k].phi - pts[i].phi).cos());
            scale = scale.max(term.abs());
            rhs += term;
        }
        let centrifugal = omega * omega * m[k] * sk * ck;
        scale = scale.max(centrifugal.abs());
        *out = -centrifugal - rhs;
    }

    Ok(Residuals {
        axis,
        longitude,
        colatitude,
        scale,
    })
}
