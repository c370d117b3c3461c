//! Bracketing root finding for smooth scalar functions on an interval.
//!
//! [`scan_roots`] samples the function, splits the interval at its local
//! extrema into monotone pieces, and then
//! - counts an extremum whose value is zero (to tolerance) as a tangential
//!   root, and
//! - bisects every monotone piece whose ends have strictly opposite signs.
//!
//! Splitting at extrema lets double roots be counted once instead of being
//! missed (no sign change) or counted twice (rounding splits them).

/// Bisection on `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
/// Stops when the bracket is narrower than `x_tol` or cannot shrink further.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= x_tol {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section search for the maximiser of `f` on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * (lo.abs() + hi.abs()).max(1e-300) {
            break;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    /// Number of sampling intervals.
    pub samples: usize,
    /// Bisection stops below this bracket width.
    pub x_tol: f64,
    /// A value counts as zero when `|f| ≤ zero_rel · scale`, with `scale`
    /// the rounding scale reported alongside the value.
    pub zero_rel: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            samples: 2000,
            x_tol: 1e-13,
            zero_rel: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    /// Sign change inside a monotone piece.
    Crossing,
    /// Zero at a local extremum.
    Tangential,
    /// Zero at one of the interval ends.
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub kind: RootKind,
}

/// All roots of `f` on `[lo, hi]`, sorted. See the module docs.
///
/// `f` returns the value together with the magnitude of the terms it was
/// summed from, so that "zero" means "zero up to rounding".
pub fn scan_roots<F: Fn(f64) -> (f64, f64)>(f: F, lo: f64, hi: f64, cfg: &ScanConfig) -> Vec<Root> {
    let n = cfg.samples.max(2);
    let h = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + i as f64 * h })
        .collect();
    let ys: Vec<(f64, f64)> = xs.iter().map(|&x| f(x)).collect();
    let value = |x: f64| f(x).0;
    let is_zero = |(v, scale): (f64, f64)| v.abs() <= cfg.zero_rel * scale.abs();

    // knots: interval ends plus refined local extrema
    let mut knots: Vec<(f64, (f64, f64), bool)> = vec![(lo, ys[0], false)];
    for i in 1..n {
        let left = ys[i].0 - ys[i - 1].0;
        let right = ys[i + 1].0 - ys[i].0;
        if left == 0.0 || right == 0.0 || left.signum() == right.signum() {
            continue;
        }
        let sign = if left > 0.0 { 1.0 } else { -1.0 };
        let xc = golden_max(|x| sign * value(x), xs[i - 1], xs[i + 1]);
        let yc = f(xc);
        // keep the better of the refined point and the sample itself
        let (xc, yc) = if sign * yc.0 >= sign * ys[i].0 {
            (xc, yc)
        } else {
            (xs[i], ys[i])
        };
        knots.push((xc, yc, true));
    }
    knots.push((hi, ys[n], false));
    knots.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut roots = Vec::new();
    for (idx, &(x, y, critical)) in knots.iter().enumerate() {
        if is_zero(y) {
            let kind = if critical {
                RootKind::Tangential
            } else {
                RootKind::Endpoint
            };
            roots.push(Root { x, kind });
        }
        if let Some(&(xn, yn, _)) = knots.get(idx + 1) {
            if !is_zero(y) && !is_zero(yn) && y.0.signum() != yn.0.signum() {
                if let Some(r) = bisect(value, x, xn, cfg.x_tol) {
                    roots.push(Root {
                        x: r,
                        kind: RootKind::Crossing,
                    });
                }
            }
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    roots
}
