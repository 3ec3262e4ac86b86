//! Bracketing searches: golden-section extremum refinement and bisection.

/// `(3 − √5)/2`, the golden-section interior fraction.
const INV_PHI_SQ: f64 = 0.381_966_011_250_105_1;
const MAX_ITER: usize = 500;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `xtol`. Returns `(x, f(x))`.
pub fn golden_minimize<F>(f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x1 = a + INV_PHI_SQ * (b - a);
    let mut x2 = b - INV_PHI_SQ * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while b - a > xtol && iter < MAX_ITER {
        iter += 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_PHI_SQ * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_PHI_SQ * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn golden_maximize<F>(f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, neg) = golden_minimize(|x| -f(x), lo, hi, xtol);
    (x, -neg)
}

/// Bisection on a predicate that is `true` on a prefix `[lo, x*)` of the
/// interval and `false` after it. Returns the final bracket `(a, b)` with
/// `pred(a)` true, `pred(b)` false and `b − a ≤ xtol`.
pub fn bisect_boundary<P>(pred: P, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64)
where
    P: Fn(f64) -> bool,
{
    let mut iter = 0;
    while hi - lo > xtol && iter < MAX_ITER {
        iter += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Root of `f` on `[lo, hi]` given `f(lo)` and `f(hi)` of opposite sign.
/// Stops when `|f| ≤ ftol` or the bracket reaches `xtol` (or float resolution);
/// returns the endpoint/midpoint with the smallest residual.
pub fn bisect_root<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64, ftol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    let mut best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid.abs() <= ftol && hi - lo <= xtol {
            break;
        }
        if f_mid == 0.0 {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_minimize(|x| (x - 0.2).powi(2), -1.0, 1.0, 1e-9);
        assert!((x - 0.2).abs() < 1e-8);
        assert!(fx < 1e-15);
    }

    #[test]
    fn golden_maximize_cosine() {
        let (x, fx) = golden_maximize(f64::cos, -1.0, 0.5, 1e-10);
        assert!(x.abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn golden_monotone_goes_to_edge() {
        let (x, _) = golden_minimize(|x| x, 0.5, 1.5, 1e-8);
        assert!((x - 0.5).abs() < 1e-7);
    }

    #[test]
    fn bisect_boundary_locates_step() {
        let (a, b) = bisect_boundary(|x| x < 0.3, 0.0, 1.0, 1e-12);
        assert!(a < 0.3 && b >= 0.3 && b - a <= 1e-12);
    }

    #[test]
    fn bisect_root_sqrt2() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 0.0).is_none());
    }
}
