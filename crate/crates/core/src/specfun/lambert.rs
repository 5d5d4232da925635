//! Principal branch of the Lambert W function.

use crate::error::{Error, Result};

const BRANCH_POINT: f64 = -0.367_879_441_171_442_33; // -1/e

/// `W_0(x)`, the solution of `w e^w = x` with `w ≥ -1`.
///
/// Starting point: `x` for small arguments, `ln x - ln ln x` for large ones,
/// the branch-point series in `p = sqrt(2(ex + 1))` near `-1/e` and `ln(1+x)`
/// in between. Refined by Halley's iteration (at most 50 steps), with steps
/// that would cross the branch point halved.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < BRANCH_POINT {
        return Err(Error::domain("lambert_w0", format!("{x} is below -1/e")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if x.abs() < 0.3 {
        x
    } else if x > 3.0 {
        let l1 = x.ln();
        l1 - l1.ln()
    } else if x < -0.25 {
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        x.ln_1p()
    };
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let mut next = w - step;
        if next <= -1.0 {
            next = 0.5 * (w - 1.0);
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs());
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!(lambert_w0(-0.5).is_err());
        assert_eq!(lambert_w0(BRANCH_POINT).unwrap(), -1.0);
    }

    #[test]
    fn matches_bisection() {
        let (mut lo, mut hi) = (0.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let w = lambert_w0(2.0).unwrap();
        assert!((w - lo).abs() < 1e-14);
        assert!((w * w.exp() - 2.0).abs() <= 1e-13);
    }

    #[test]
    fn residual_on_log_grid() {
        // log-spaced offsets from the branch point up to 10
        let lo = BRANCH_POINT + 1e-6;
        let n = 400;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let x = BRANCH_POINT + (1e-6f64).powf(1.0 - t) * (10.0 - BRANCH_POINT).powf(t);
            let x = x.max(lo);
            let w = lambert_w0(x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-12, "x = {x}, w = {w}");
            assert!(w >= -1.0);
        }
    }
}
