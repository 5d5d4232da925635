//! Truncated power series ("jets") and a small expression language.
//!
//! A [`Jet`] of order `N` at `x₀` stores `f_n = f^{(n)}(x₀)/n!` for
//! `n = 0..=N`. Jets propagate exactly through the arithmetic and elementary
//! functions of an [`Expr`], which makes them the derivative oracle for the
//! whole crate: characteristic numbers of a test function come from
//! [`char_numbers_derivative`], and approximants are measured by
//! jet-evaluating their closed forms.

mod expr;
mod parse;

pub use expr::{Expr, Func};
pub use parse::parse_expr;

use crate::error::{Error, Result};
use crate::framework::{CharNumbers, Family};
use crate::scalar::{ratio, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    center: T,
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    /// Jet from normalized Taylor coefficients `f_n = f^{(n)}/n!`.
    pub fn new(center: T, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least its value");
        Jet { center, coeffs }
    }

    pub fn constant(value: T, center: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Jet { center, coeffs }
    }

    /// The independent variable `x` expanded at `center`.
    pub fn variable(center: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = center.clone();
        if order > 0 {
            coeffs[1] = T::one();
        }
        Jet { center, coeffs }
    }

    /// Jet from derivative values `f^{(n)}(x₀)`.
    pub fn from_derivatives(center: T, derivs: &[T]) -> Self {
        let mut fact = T::one();
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(n, d)| {
                if n > 0 {
                    fact = fact.clone() * T::from_usize(n);
                }
                d.clone() / fact.clone()
            })
            .collect();
        Jet::new(center, coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn center(&self) -> &T {
        &self.center
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn value(&self) -> &T {
        &self.coeffs[0]
    }

    /// Derivatives `f^{(n)}(x₀) = n!·f_n`.
    pub fn derivatives(&self) -> Vec<T> {
        let mut fact = T::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact = fact.clone() * T::from_usize(n);
                }
                c.clone() * fact.clone()
            })
            .collect()
    }

    /// Same function, re-expanded only to `order ≤ self.order()`.
    pub fn truncate(&self, order: usize) -> Self {
        Jet::new(self.center.clone(), self.coeffs[..=order.min(self.order())].to_vec())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::JetMismatch(format!(
                "orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        if self.center != other.center {
            return Err(Error::JetMismatch(format!(
                "centers {:?} and {:?}",
                self.center, other.center
            )));
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<T>) -> Self {
        Jet {
            center: self.center.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let b0 = other.coeffs[0].clone();
        if b0.is_zero() {
            return Err(Error::eval("division", "divisor jet has zero constant term"));
        }
        let n = self.order();
        let mut q: Vec<T> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - other.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(acc / b0.clone());
        }
        Ok(self.with_coeffs(q))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(T::zero(), |acc, j| {
                    acc + self.coeffs[j].clone() * other.coeffs[k - j].clone()
                })
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn add_scalar(&self, s: &T) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = coeffs[0].clone() + s.clone();
        self.with_coeffs(coeffs)
    }

    pub fn powi(&self, k: i32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Jet::constant(T::one(), self.center.clone(), self.order());
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        if k < 0 {
            Jet::constant(T::one(), self.center.clone(), self.order()).div(&acc)
        } else {
            Ok(acc)
        }
    }

    /// `d/dx` as a jet of one order less (order 0 stays order 0 with value 0).
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return self.with_coeffs(vec![T::zero()]);
        }
        self.with_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_usize(k))
                .collect(),
        )
    }

    fn lift0(v: Option<T>, primitive: &'static str) -> Result<T> {
        v.ok_or(Error::Inexact { primitive })
    }

    pub fn exp(&self) -> Result<Self> {
        let n = self.order();
        let mut e = vec![Self::lift0(self.coeffs[0].exp(), "exp")?];
        for m in 1..=n {
            let s = (1..=m).fold(T::zero(), |acc, k| {
                acc + T::from_usize(k) * self.coeffs[k].clone() * e[m - k].clone()
            });
            e.push(s / T::from_usize(m));
        }
        Ok(self.with_coeffs(e))
    }

    pub fn ln(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.to_f64() <= 0.0 || a0.is_zero() {
            return Err(Error::eval("ln", "argument is not positive at the expansion point"));
        }
        let n = self.order();
        let mut l = vec![Self::lift0(a0.ln(), "ln")?];
        for m in 1..=n {
            let s = (1..m).fold(T::zero(), |acc, k| {
                acc + T::from_usize(k) * l[k].clone() * self.coeffs[m - k].clone()
            });
            l.push((self.coeffs[m].clone() - s / T::from_usize(m)) / a0.clone());
        }
        Ok(self.with_coeffs(l))
    }

    pub fn sin_cos(&self) -> Result<(Self, Self)> {
        let n = self.order();
        let a0 = &self.coeffs[0];
        let mut s = vec![Self::lift0(a0.sin(), "sin")?];
        let mut c = vec![Self::lift0(a0.cos(), "cos")?];
        for m in 1..=n {
            let mut ss = T::zero();
            let mut cc = T::zero();
            for k in 1..=m {
                let ka = T::from_usize(k) * self.coeffs[k].clone();
                ss = ss + ka.clone() * c[m - k].clone();
                cc = cc + ka * s[m - k].clone();
            }
            s.push(ss / T::from_usize(m));
            c.push(-cc / T::from_usize(m));
        }
        Ok((self.with_coeffs(s), self.with_coeffs(c)))
    }

    pub fn sin(&self) -> Result<Self> {
        Ok(self.sin_cos()?.0)
    }

    pub fn cos(&self) -> Result<Self> {
        Ok(self.sin_cos()?.1)
    }

    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.to_f64() <= 0.0 || a0.is_zero() {
            return Err(Error::eval("sqrt", "argument is not positive at the expansion point"));
        }
        let n = self.order();
        let r0 = Self::lift0(a0.sqrt(), "sqrt")?;
        let two_r0 = r0.clone() + r0.clone();
        let mut r = vec![r0];
        for m in 1..=n {
            let s = (1..m).fold(T::zero(), |acc, k| acc + r[k].clone() * r[m - k].clone());
            r.push((self.coeffs[m].clone() - s) / two_r0.clone());
        }
        Ok(self.with_coeffs(r))
    }

    pub fn cbrt(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(Error::eval("cbrt", "argument vanishes at the expansion point"));
        }
        let p0 = Self::lift0(a0.cbrt(), "cbrt")?;
        Ok(self.power_series(p0, &ratio(1, 3)))
    }

    /// `a^α` given `p0 = a_0^α`, from
    /// `p_n = (1/(n a_0)) Σ_{k=1}^n ((α+1)k - n) a_k p_{n-k}`.
    fn power_series(&self, p0: T, alpha: &Rational) -> Self {
        let a0 = self.coeffs[0].clone();
        let alpha1 = T::from_rational(&(alpha + Rational::from_integer(1.into())));
        let mut p = vec![p0];
        for m in 1..=self.order() {
            let s = (1..=m).fold(T::zero(), |acc, k| {
                let w = alpha1.clone() * T::from_usize(k) - T::from_usize(m);
                acc + w * self.coeffs[k].clone() * p[m - k].clone()
            });
            p.push(s / (T::from_usize(m) * a0.clone()));
        }
        self.with_coeffs(p)
    }

    pub fn atan(&self) -> Result<Self> {
        let n = self.order();
        let t0 = Self::lift0(self.coeffs[0].atan(), "atan")?;
        if n == 0 {
            return Ok(self.with_coeffs(vec![t0]));
        }
        // t' = a' / (1 + a^2), integrated term by term
        let q = self.mul_unchecked(self).add_scalar(&T::one());
        let mut da = self.differentiate().coeffs;
        da.push(T::zero());
        let r = self.with_coeffs(da).div(&q)?;
        let mut t = vec![t0];
        for m in 1..=n {
            t.push(r.coeffs[m - 1].clone() / T::from_usize(m));
        }
        Ok(self.with_coeffs(t))
    }

    /// `J_0` of this jet: the Taylor jet of `J_0` at the value, composed with
    /// the inner series. Derivatives at the value come from
    /// `J_0^{(k)} = 2^{-k} Σ_j (-1)^j C(k,j) J_{2j-k}`.
    pub fn bessel_j0(&self) -> Result<Self> {
        let n = self.order();
        let u0 = self.coeffs[0].clone();
        let orders: Vec<T> = (-(n as i64)..=n as i64)
            .map(|m| Self::lift0(T::bessel_j(m, &u0), "bessel_j0"))
            .collect::<Result<_>>()?;
        let jm = |m: i64| orders[(m + n as i64) as usize].clone();
        let mut derivs = Vec::with_capacity(n + 1);
        let mut pow2 = T::one();
        for k in 0..=n {
            let mut acc = T::zero();
            let mut binom = T::one();
            for j in 0..=k {
                let term = binom.clone() * jm(2 * j as i64 - k as i64);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
                binom = binom * T::from_usize(k - j) / T::from_usize(j + 1);
            }
            derivs.push(acc / pow2.clone());
            pow2 = pow2 * T::from_i64(2);
        }
        let outer = Jet::from_derivatives(u0, &derivs);
        compose_unchecked(&outer, self)
    }

    /// Evaluates the truncated polynomial `Σ f_n (x - x₀)^n`.
    pub fn eval_offset(&self, dx: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * dx.clone() + c.clone())
    }
}

/// Jet of `outer ∘ inner` at `inner.center`.
///
/// `outer` must be expanded at the value of `inner`, and both jets must
/// have the same order.
pub fn jet_compose<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>) -> Result<Jet<T>> {
    if outer.order() != inner.order() {
        return Err(Error::JetMismatch(format!(
            "orders {} and {}",
            outer.order(),
            inner.order()
        )));
    }
    let v = inner.value();
    let matches = if T::EXACT {
        outer.center() == v
    } else {
        let (a, b) = (outer.center().to_f64(), v.to_f64());
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    };
    if !matches {
        return Err(Error::JetMismatch(format!(
            "outer expanded at {:?} but inner value is {:?}",
            outer.center(),
            v
        )));
    }
    compose_unchecked(outer, inner)
}

fn compose_unchecked<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>) -> Result<Jet<T>> {
    let n = inner.order();
    let mut shifted = inner.clone();
    shifted.coeffs[0] = T::zero();
    let mut acc = Jet::constant(outer.coeffs[n.min(outer.order())].clone(), inner.center.clone(), n);
    for k in (0..n.min(outer.order())).rev() {
        acc = acc.mul_unchecked(&shifted).add_scalar(&outer.coeffs[k]);
    }
    Ok(acc)
}

/// Jet of `e` at `x0` to order `order`.
pub fn jet_lift<T: Scalar>(e: &Expr, x0: &T, order: usize) -> Result<Jet<T>> {
    e.jet(x0, order)
}

/// `c_n = f^{(n)}(x₀)` for `n = 0..=order`.
pub fn char_numbers_derivative<T: Scalar>(e: &Expr, x0: f64, order: usize) -> Result<CharNumbers<T>> {
    let center = T::from_f64(x0)
        .ok_or_else(|| Error::InvalidParameter(format!("expansion point {x0} is not finite")))?;
    let jet = e.jet(&center, order)?;
    Ok(CharNumbers::new(jet.derivatives(), Family::Derivative { x0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{factorial, int};

    fn q(p: i64, d: i64) -> Rational {
        ratio(p, d)
    }

    #[test]
    fn exp_and_sin_at_zero_are_exact() {
        let x = Expr::x();
        let j: Jet<Rational> = x.clone().exp().jet(&int(0), 4).unwrap();
        assert_eq!(j.coeffs(), &[int(1), int(1), q(1, 2), q(1, 6), q(1, 24)]);
        let s: Jet<Rational> = x.sin().jet(&int(0), 5).unwrap();
        assert_eq!(s.coeffs(), &[int(0), int(1), int(0), q(-1, 6), int(0), q(1, 120)]);
    }

    #[test]
    fn log_of_quadratic_matches_series_composition() {
        // ln(1+u) with u = x^2: u - u^2/2
        let e = parse_expr("ln(x^2+1)").unwrap();
        let j: Jet<Rational> = e.jet(&int(0), 4).unwrap();
        assert_eq!(j.coeffs(), &[int(0), int(0), int(1), int(0), q(-1, 2)]);
    }

    #[test]
    fn char_numbers_examples() {
        let c = char_numbers_derivative::<Rational>(&parse_expr("sin(x)").unwrap(), 0.0, 5).unwrap();
        assert_eq!(c.values(), &[int(0), int(1), int(0), int(-1), int(0), int(1)]);
        let c = char_numbers_derivative::<Rational>(&parse_expr("exp(x)").unwrap(), 0.0, 7).unwrap();
        assert!(c.values().iter().all(|v| *v == int(1)));
        let c = char_numbers_derivative::<Rational>(&parse_expr("sqrt(4 - x^2)").unwrap(), 0.0, 2)
            .unwrap();
        assert_eq!(c.values(), &[int(2), int(0), q(-1, 2)]);
    }

    #[test]
    fn domain_violations_name_the_primitive() {
        let e = parse_expr("ln(x)").unwrap();
        match e.jet(&0.0f64, 3) {
            Err(Error::Eval { primitive, .. }) => assert_eq!(primitive, "ln"),
            other => panic!("expected ln error, got {other:?}"),
        }
        let e = parse_expr("1/x").unwrap();
        assert!(matches!(e.jet(&0.0f64, 2), Err(Error::Eval { primitive: "division", .. })));
        let e = parse_expr("exp(x)").unwrap();
        assert_eq!(
            e.jet(&int(1), 2).unwrap_err(),
            Error::Inexact { primitive: "exp" }
        );
    }

    #[test]
    fn compose_examples() {
        let n = 6;
        let outer: Jet<Rational> = Expr::x().exp().jet(&int(0), n).unwrap();
        let inner = Jet::new(int(0), {
            let mut v = vec![int(0); n + 1];
            v[1] = int(1);
            v[2] = int(1);
            v
        });
        let composed = jet_compose(&outer, &inner).unwrap();
        // oracle: multiply out e^{x} e^{x^2} from their series
        let ex: Vec<Rational> = (0..=n).map(|k| int(1) / factorial(k)).collect();
        let ex2: Vec<Rational> = (0..=n)
            .map(|k| if k % 2 == 0 { int(1) / factorial(k / 2) } else { int(0) })
            .collect();
        for k in 0..=n {
            let want: Rational = (0..=k).map(|j| ex[j].clone() * ex2[k - j].clone()).sum();
            assert_eq!(composed.coeffs()[k], want, "k = {k}");
        }
        let ident = Jet::variable(int(0), n);
        assert_eq!(jet_compose(&outer, &ident).unwrap(), outer);
        let constant = Jet::constant(int(5), int(0), n);
        assert_eq!(jet_compose(&constant, &inner).unwrap(), Jet::constant(int(5), int(0), n));
        let wrong = Jet::constant(int(1), int(0), n);
        assert!(jet_compose(&outer, &wrong).is_err());
    }

    #[test]
    fn mismatched_jets_are_rejected() {
        let a = Jet::variable(0.0, 3);
        let b = Jet::variable(1.0, 3);
        let c = Jet::variable(0.0, 4);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&c).is_err());
    }

    #[test]
    fn atan_and_bessel_series() {
        let t: Jet<Rational> = Expr::x().atan().jet(&int(0), 7).unwrap();
        assert_eq!(t.coeffs()[7], q(-1, 7));
        assert_eq!(t.coeffs()[5], q(1, 5));
        let j: Jet<Rational> = Expr::x().bessel_j0().jet(&int(0), 6).unwrap();
        assert_eq!(j.coeffs(), &[int(1), int(0), q(-1, 4), int(0), q(1, 64), int(0), q(-1, 2304)]);
    }

    #[test]
    fn bessel_jet_away_from_origin() {
        let x0 = 4.2;
        let j: Jet<f64> = Expr::x().bessel_j0().jet(&x0, 3).unwrap();
        let h = 1e-4;
        let fd = (crate::specfun::bessel_j(0, x0 + h) - crate::specfun::bessel_j(0, x0 - h)) / (2.0 * h);
        assert!((j.derivatives()[1] - fd).abs() < 1e-7);
        assert!((j.derivatives()[1] + crate::specfun::bessel_j(1, x0)).abs() < 1e-14);
    }

    #[test]
    fn cube_root_series() {
        // (1+x)^{1/3} = 1 + x/3 - x^2/9 + 5x^3/81
        let j: Jet<Rational> = Jet::variable(int(0), 3).add_scalar(&int(1)).cbrt().unwrap();
        assert_eq!(j.coeffs(), &[int(1), q(1, 3), q(-1, 9), q(5, 81)]);
    }
}
