//! Bessel functions of the first kind of integer order.
//!
//! The ascending series alternates with terms as large as `e^{|x|}/…` before
//! it converges, so the partial sums are carried in double-double arithmetic;
//! at `|x| = 30` the largest term is about `1e11` and plain `f64` would keep
//! only five correct digits.

#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let (p1, p2) = two_prod(q1, d);
        let (s, e) = two_sum(self.hi, -p1);
        let e = e - p2 + self.lo;
        let q2 = (s + e) / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// `J_n(x)` from `Σ_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`.
///
/// Truncation stops once the terms are decreasing and below `1e-18` of the
/// partial sum. Accurate to about `1e-15` absolute for `|x| ≤ 30`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = x / 2.0;
    let mut term = DoubleDouble::from(1.0);
    for i in 1..=n {
        term = term.mul(DoubleDouble::from(half)).div_f64(i as f64);
    }
    let (sq_hi, sq_lo) = two_prod(half, half);
    let neg_sq = DoubleDouble { hi: sq_hi, lo: sq_lo }.neg();
    let mut sum = term;
    let n = n as f64;
    for k in 1..2000u32 {
        let k = k as f64;
        term = term.mul(neg_sq).div_f64(k * (k + n));
        sum = sum.add(term);
        let decreasing = k * (k + n) > sq_hi;
        if decreasing && (term.hi == 0.0 || term.hi.abs() <= 1e-18 * sum.hi.abs().max(1e-300)) {
            break;
        }
        if decreasing && term.hi.abs() < 1e-40 {
            break;
        }
    }
    sum.hi + sum.lo
}

/// Derivatives `J_0^{(k)}(x)` for `k = 0..=order`, from
/// `J_0^{(k)} = 2^{-k} Σ_j (-1)^j C(k,j) J_{2j-k}`.
pub fn bessel_j0_derivatives(x: f64, order: usize) -> Vec<f64> {
    let signed_j = |m: i64| -> f64 {
        let v = bessel_j(m.unsigned_abs() as u32, x);
        if m < 0 && m % 2 != 0 {
            -v
        } else {
            v
        }
    };
    (0..=order)
        .map(|k| {
            let mut acc = 0.0;
            let mut binom = 1.0;
            for j in 0..=k {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom * signed_j(2 * j as i64 - k as i64);
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
            acc / 2f64.powi(k as i32)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        // Bisection on the series itself locates the root.
        let (mut lo, mut hi) = (2.0f64, 3.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if bessel_j(0, lo) * bessel_j(0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo - 2.404_825_557_695_772_8).abs() < 1e-12);
        assert!(bessel_j(0, 2.404_825_557_695_772_8).abs() < 1e-10);
    }

    #[test]
    fn reference_values() {
        // Reference values from a 30-digit evaluation.
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_55),
            (1, 1.0, 0.440_050_585_744_933_52),
            (2, 10.0, 0.254_630_313_685_120_62),
            (0, 30.0, -0.086_367_983_581_040_211),
            (5, 25.0, -0.066_007_995_398_422_993),
        ];
        for (n, x, want) in cases {
            let got = bessel_j(n, x);
            assert!((got - want).abs() < 1e-13, "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn generating_identity() {
        // J_0 + 2 Σ J_{2k} = 1
        for i in -20..=20 {
            let x = i as f64 * 0.5;
            let s: f64 = bessel_j(0, x) + 2.0 * (1..=40).map(|k| bessel_j(2 * k, x)).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-9, "x = {x}: {s}");
        }
    }

    #[test]
    fn derivative_identity_matches_recurrence() {
        // J_0' = -J_1, J_0'' = (J_2 - J_0)/2
        let x = 3.7;
        let d = bessel_j0_derivatives(x, 2);
        assert!((d[1] + bessel_j(1, x)).abs() < 1e-15);
        assert!((d[2] - 0.5 * (bessel_j(2, x) - bessel_j(0, x))).abs() < 1e-15);
    }
}
