//! Numeric backends shared by the jet, polynomial and coefficient code.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::specfun;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Field element used by generic numerical code.
///
/// The transcendental hooks return `None` when the value is not representable
/// in the backend: `f64` always answers, [`Rational`] only answers at points
/// where the result is itself rational (`exp(0)`, `ln(1)`, `sqrt(9/4)`, ...).
/// Domain checks (sign of the argument of `ln`, `sqrt`) are the caller's job.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    /// True for backends with exact arithmetic.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact conversion from a finite float (`None` for NaN or infinities).
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Exact rational value (`None` for non-finite floats).
    fn to_rational(&self) -> Option<Rational>;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn exp(&self) -> Option<Self>;
    fn ln(&self) -> Option<Self>;
    fn sin(&self) -> Option<Self>;
    fn cos(&self) -> Option<Self>;
    fn sqrt(&self) -> Option<Self>;
    fn cbrt(&self) -> Option<Self>;
    fn atan(&self) -> Option<Self>;
    fn pi() -> Option<Self>;
    fn euler() -> Option<Self>;
    /// Bessel function of the first kind of integer order (negative orders allowed).
    fn bessel_j(order: i64, x: &Self) -> Option<Self>;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    /// `self^k` by repeated squaring.
    fn powu(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Option<Rational> {
        Rational::from_float(*self)
    }
    fn exp(&self) -> Option<Self> {
        Some(f64::exp(*self))
    }
    fn ln(&self) -> Option<Self> {
        Some(f64::ln(*self))
    }
    fn sin(&self) -> Option<Self> {
        Some(f64::sin(*self))
    }
    fn cos(&self) -> Option<Self> {
        Some(f64::cos(*self))
    }
    fn sqrt(&self) -> Option<Self> {
        Some(f64::sqrt(*self))
    }
    fn cbrt(&self) -> Option<Self> {
        Some(f64::cbrt(*self))
    }
    fn atan(&self) -> Option<Self> {
        Some(f64::atan(*self))
    }
    fn pi() -> Option<Self> {
        Some(std::f64::consts::PI)
    }
    fn euler() -> Option<Self> {
        Some(std::f64::consts::E)
    }
    fn bessel_j(order: i64, x: &Self) -> Option<Self> {
        let n = order.unsigned_abs() as u32;
        let v = specfun::bessel_j(n, *x);
        Some(if order < 0 && n % 2 == 1 { -v } else { v })
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn exp(&self) -> Option<Self> {
        Zero::is_zero(self).then(One::one)
    }
    fn ln(&self) -> Option<Self> {
        One::is_one(self).then(Zero::zero)
    }
    fn sin(&self) -> Option<Self> {
        Zero::is_zero(self).then(Zero::zero)
    }
    fn cos(&self) -> Option<Self> {
        Zero::is_zero(self).then(One::one)
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| Rational::new(n, d))
    }
    fn cbrt(&self) -> Option<Self> {
        let n = self.numer().cbrt();
        let d = self.denom().cbrt();
        (&n * &n * &n == *self.numer() && &d * &d * &d == *self.denom())
            .then(|| Rational::new(n, d))
    }
    fn atan(&self) -> Option<Self> {
        Zero::is_zero(self).then(Zero::zero)
    }
    fn pi() -> Option<Self> {
        None
    }
    fn euler() -> Option<Self> {
        None
    }
    fn bessel_j(order: i64, x: &Self) -> Option<Self> {
        Zero::is_zero(x).then(|| {
            if order == 0 {
                One::one()
            } else {
                Zero::zero()
            }
        })
    }
}

/// Nearest-ish float of a rational, robust to numerators and denominators
/// far beyond the `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // Scale both parts down to 60 significant bits before dividing.
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let nf = (n >> ns as usize).to_f64().unwrap_or(0.0);
    let df = (d >> ds as usize).to_f64().unwrap_or(1.0);
    nf / df * 2f64.powi((ns - ds) as i32)
}

/// Shorthand for `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational from an integer.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `n!` as an exact integer-valued rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}
