//! Flat-space limit: for `a = r₂₁/R → 0` with `x = (1 + λ)a` in region II,
//! `(m₃/2) g / a⁵` tends to Euler's collinear quintic in `λ`.

use super::reduced::ReducedG;
use super::MeridianError;
use crate::dynamics::MassTriple;
use crate::roots::bisect;

/// Euler's quintic, highest degree first:
/// `(m₁+m₂)λ⁵ + (3m₁+2m₂)λ⁴ + (3m₁+m₂)λ³ − (m₂+3m₃)λ² − (2m₂+3m₃)λ − (m₂+m₃)`.
pub fn euler_quintic(masses: &MassTriple) -> [f64; 6] {
    let [m1, m2, m3] = masses.as_array();
    [
        m1 + m2,
        3.0 * m1 + 2.0 * m2,
        3.0 * m1 + m2,
        -(m2 + 3.0 * m3),
        -(2.0 * m2 + 3.0 * m3),
        -(m2 + m3),
    ]
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &v| acc * x + v)
}

/// The quintic has one sign change in its coefficients, hence exactly one
/// positive root.
pub fn quintic_positive_root(masses: &MassTriple) -> f64 {
    let c = euler_quintic(masses);
    let mut hi = 1.0;
    while horner(&c, hi) <= 0.0 {
        hi *= 2.0;
    }
    bisect(|l| horner(&c, l), 0.0, hi, 0.0).expect("sign change")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerLimitRow {
    pub radius: f64,
    pub a: f64,
    /// Degree-5 interpolant of the scaled `g` in `λ`, highest degree first.
    pub coefficients: [f64; 6],
    pub max_coeff_deviation: f64,
    /// Positive zero of the scaled `g`.
    pub root_lambda: f64,
    pub root_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerLimitReport {
    pub quintic: [f64; 6],
    pub positive_root: f64,
    pub rows: Vec<EulerLimitRow>,
    /// Empirical order between consecutive radii, from the coefficient
    /// deviations.
    pub orders: Vec<f64>,
}

impl EulerLimitReport {
    pub fn mean_order(&self) -> Option<f64> {
        (!self.orders.is_empty())
            .then(|| self.orders.iter().sum::<f64>() / self.orders.len() as f64)
    }
}

/// Solve a small dense system by Gaussian elimination with partial pivoting.
fn solve_dense<const N: usize>(mut m: [[f64; N]; N], mut b: [f64; N]) -> [f64; N] {
    for col in 0..N {
        let piv = (col..N)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x
}

const NODES: [f64; 6] = [0.25, 0.6, 0.95, 1.3, 1.65, 2.0];

/// Compare the scaled `g` with the quintic for growing sphere radii at fixed
/// arc `r21` between bodies 1 and 2.
pub fn euler_limit_check(
    masses: &MassTriple,
    r21: f64,
    radii: &[f64],
) -> Result<EulerLimitReport, MeridianError> {
    let quintic = euler_quintic(masses);
    let positive_root = quintic_positive_root(masses);
    let m3 = masses.as_array()[2];
    let mut rows = Vec::with_capacity(radii.len());
    for &radius in radii {
        let a = r21 / radius;
        if !(a > 0.0 && a < 0.5) {
            return Err(MeridianError::InvalidAngle(a));
        }
        let g = ReducedG::new(a, masses.nu1(), masses.nu2());
        let scaled = |lam: f64| 0.5 * m3 * g.eval((1.0 + lam) * a).0 / a.powi(5);

        let mut vander = [[0.0; 6]; 6];
        let mut rhs = [0.0; 6];
        for (i, &l) in NODES.iter().enumerate() {
            for (k, v) in vander[i].iter_mut().enumerate() {
                *v = l.powi(5 - k as i32);
            }
            rhs[i] = scaled(l);
        }
        let coefficients = solve_dense(vander, rhs);
        let max_coeff_deviation = coefficients
            .iter()
            .zip(&quintic)
            .fold(0.0f64, |acc, (c, q)| acc.max((c - q).abs()));

        let (mut lo, mut hi) = (0.5 * positive_root, 2.0 * positive_root);
        while scaled(lo) > 0.0 && lo > 1e-6 {
            lo *= 0.5;
        }
        while scaled(hi) < 0.0 && (1.0 + hi) * a < 3.0 {
            hi *= 2.0;
        }
        let root_lambda = bisect(scaled, lo, hi, 1e-15).unwrap_or(f64::NAN);
        rows.push(EulerLimitRow {
            radius,
            a,
            coefficients,
            max_coeff_deviation,
            root_lambda,
            root_deviation: (root_lambda - positive_root).abs(),
        });
    }
    let orders = rows
        .windows(2)
        .map(|w| {
            (w[0].max_coeff_deviation / w[1].max_coeff_deviation).ln()
                / (w[1].radius / w[0].radius).ln()
        })
        .collect();
    Ok(EulerLimitReport {
        quintic,
        positive_root,
        rows,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphereRadius;
    use crate::meridian::{find_meridian_rotators, Region, ScanOptions};
    use crate::potential::Cotangent;

    #[test]
    fn quintic_examples() {
        let c = euler_quintic(&MassTriple::equal());
        assert_eq!(c, [2.0, 5.0, 4.0, -4.0, -5.0, -2.0]);
        assert_eq!(horner(&c, 1.0), 0.0);
        assert!((quintic_positive_root(&MassTriple::equal()) - 1.0).abs() < 1e-15);
        let c = euler_quintic(&MassTriple::new(3.0, 2.0, 1.0).unwrap());
        assert_eq!(c, [5.0, 13.0, 11.0, -5.0, -7.0, -3.0]);
    }

    #[test]
    fn dense_solver() {
        let x = solve_dense([[2.0, 1.0], [1.0, 3.0]], [3.0, 5.0]);
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn second_order_convergence() {
        for m in [[1.0, 1.0, 1.0], [3.0, 2.0, 1.0], [0.5, 2.0, 4.0]] {
            let m = MassTriple::new(m[0], m[1], m[2]).unwrap();
            let rep = euler_limit_check(&m, 1.0, &[1e2, 1e3, 1e4]).unwrap();
            for o in &rep.orders {
                assert!((o - 2.0).abs() < 0.2, "{:?}", rep);
            }
            let last = rep.rows.last().unwrap();
            assert!(last.max_coeff_deviation < 1e-4);
            assert!(last.root_deviation < 1e-6);
        }
    }

    #[test]
    fn meridian_root_tends_to_euler_root() {
        let radius = 1e3;
        let a = 1.0 / radius;
        let pot = Cotangent::new(SphereRadius::new(radius).unwrap());
        let sols =
            find_meridian_rotators(a, &MassTriple::equal(), &pot, &ScanOptions::default()).unwrap();
        let best = sols
            .iter()
            .filter(|s| s.region == Region::II)
            .map(|s| s.shape.x / a - 1.0)
            .min_by(|p, q| (p - 1.0).abs().total_cmp(&(q - 1.0).abs()))
            .expect("region II root");
        assert!((best - 1.0).abs() < 1e-4, "{best}");
    }
}
