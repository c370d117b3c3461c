//! Relative equilibria of three point masses on a sphere under the cotangent
//! potential.
//!
//! - [`geometry`]: spherical coordinates, chords and arcs.
//! - [`potential`]: the cotangent pair potential and its singularities.
//! - [`dynamics`]: equations of motion, conserved quantities, an RK4
//!   integrator and the relative-equilibrium residuals.
//! - [`equator`]: closed-form equilibria with all bodies on the equator.
//! - [`meridian`]: rotating and fixed configurations on one meridian.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod equator;
pub mod geometry;
pub mod meridian;
pub mod potential;
pub mod roots;

pub use dynamics::{
    angular_momentum, eom_rhs, integrate, re_residuals, AngularMomentum, DriftReport,
    DynamicsError, IntegrateOptions, IntegrationFailure, MassTriple, ReCandidate, Residuals,
    SphericalState, StateDerivative, Trajectory, TrajectorySample,
};
pub use equator::{
    antipodal_limit_scan, default_limit_path, existence_check, solve_equator, EquatorError,
    EquatorRegion, EquatorSolution, Existence, LimitScanRow,
};
pub use geometry::{
    arc_angle, arc_from_chord_squared, chord_from_arc, chord_squared, meridian_chord_squared,
    wrap_pi, GeometryError, SpherePoint, SphereRadius,
};
pub use meridian::{
    find_meridian_rotators, Branch, CaseTag, MeridianError, MeridianSolution, MeridianTranslation,
    Motion, Region, RegionCounts, ScanOptions, Shape,
};
pub use potential::{
    total_potential, Cotangent, PairPotential, PotentialError, Repulsive, SingularityKind,
};
