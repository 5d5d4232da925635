use std::fmt;
use std::ops;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

use super::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Cbrt,
    Atan,
    BesselJ0,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Cbrt => "cbrt",
            Func::Atan => "atan",
            Func::BesselJ0 => "j0",
        }
    }
}

/// Expression in one variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Pi,
    E,
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn x() -> Self {
        Expr::Var
    }

    pub fn int(v: i64) -> Self {
        Expr::Num(Rational::from_integer(v.into()))
    }

    pub fn rational(r: Rational) -> Self {
        Expr::Num(r)
    }

    /// Exact binary value of a finite float.
    pub fn float(v: f64) -> Result<Self> {
        Rational::from_f64(v)
            .map(Expr::Num)
            .ok_or_else(|| Error::InvalidParameter(format!("constant {v} is not finite")))
    }

    fn call(self, f: Func) -> Self {
        Expr::Call(f, Box::new(self))
    }

    pub fn exp(self) -> Self {
        self.call(Func::Exp)
    }

    pub fn ln(self) -> Self {
        self.call(Func::Ln)
    }

    pub fn sin(self) -> Self {
        self.call(Func::Sin)
    }

    pub fn cos(self) -> Self {
        self.call(Func::Cos)
    }

    pub fn tan(self) -> Self {
        self.clone().sin() / self.cos()
    }

    pub fn sqrt(self) -> Self {
        self.call(Func::Sqrt)
    }

    pub fn cbrt(self) -> Self {
        self.call(Func::Cbrt)
    }

    pub fn atan(self) -> Self {
        self.call(Func::Atan)
    }

    pub fn bessel_j0(self) -> Self {
        self.call(Func::BesselJ0)
    }

    pub fn powi(self, k: i32) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    /// `self(inner(x))`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(inner));
        match self {
            Expr::Var => inner.clone(),
            Expr::Num(_) | Expr::Pi | Expr::E => self.clone(),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Pow(a, k) => Expr::Pow(sub(a), *k),
            Expr::Call(f, a) => Expr::Call(*f, sub(a)),
        }
    }

    /// `self(scale·x + shift)`.
    pub fn affine(&self, scale: Rational, shift: Rational) -> Expr {
        self.substitute(&(Expr::Num(scale) * Expr::Var + Expr::Num(shift)))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(r) => r.to_f64(),
            Expr::Pi => std::f64::consts::PI,
            Expr::E => std::f64::consts::E,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d == 0.0 {
                    return Err(Error::eval("division", format!("divisor vanishes at x = {x}")));
                }
                a.eval(x)? / d
            }
            Expr::Pow(a, k) => {
                let b = a.eval(x)?;
                if b == 0.0 && *k < 0 {
                    return Err(Error::eval("pow", format!("zero base with exponent {k}")));
                }
                b.powi(*k)
            }
            Expr::Call(f, a) => {
                let u = a.eval(x)?;
                match f {
                    Func::Exp => u.exp(),
                    Func::Ln => {
                        if u <= 0.0 {
                            return Err(Error::eval("ln", format!("argument {u} is not positive")));
                        }
                        u.ln()
                    }
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Sqrt => {
                        if u < 0.0 {
                            return Err(Error::eval("sqrt", format!("argument {u} is negative")));
                        }
                        u.sqrt()
                    }
                    Func::Cbrt => u.cbrt(),
                    Func::Atan => u.atan(),
                    Func::BesselJ0 => crate::specfun::bessel_j(0, u),
                }
            }
        };
        Ok(v)
    }

    /// Jet of the expression at `x0` to order `order`.
    pub fn jet<T: Scalar>(&self, x0: &T, order: usize) -> Result<Jet<T>> {
        let constant = |v: T| Jet::constant(v, x0.clone(), order);
        match self {
            Expr::Num(r) => Ok(constant(T::from_rational(r))),
            Expr::Pi => Ok(constant(T::pi().ok_or(Error::Inexact { primitive: "pi" })?)),
            Expr::E => Ok(constant(T::euler().ok_or(Error::Inexact { primitive: "e" })?)),
            Expr::Var => Ok(Jet::variable(x0.clone(), order)),
            Expr::Neg(a) => Ok(a.jet(x0, order)?.neg()),
            Expr::Add(a, b) => a.jet(x0, order)?.add(&b.jet(x0, order)?),
            Expr::Sub(a, b) => a.jet(x0, order)?.sub(&b.jet(x0, order)?),
            Expr::Mul(a, b) => a.jet(x0, order)?.mul(&b.jet(x0, order)?),
            Expr::Div(a, b) => a.jet(x0, order)?.div(&b.jet(x0, order)?),
            Expr::Pow(a, k) => a.jet(x0, order)?.powi(*k),
            Expr::Call(f, a) => {
                let u = a.jet(x0, order)?;
                match f {
                    Func::Exp => u.exp(),
                    Func::Ln => u.ln(),
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Sqrt => u.sqrt(),
                    Func::Cbrt => u.cbrt(),
                    Func::Atan => u.atan(),
                    Func::BesselJ0 => u.bessel_j0(),
                }
            }
        }
    }

    /// Exact polynomial form, when the expression is a polynomial with
    /// rational coefficients.
    pub fn as_poly(&self) -> Option<Poly<Rational>> {
        Some(match self {
            Expr::Num(r) => Poly::constant(r.clone()),
            Expr::Var => Poly::x(),
            Expr::Neg(a) => a.as_poly()?.scale(&-<Rational as One>::one()),
            Expr::Add(a, b) => a.as_poly()?.add(&b.as_poly()?),
            Expr::Sub(a, b) => a.as_poly()?.sub(&b.as_poly()?),
            Expr::Mul(a, b) => a.as_poly()?.mul(&b.as_poly()?),
            Expr::Div(a, b) => {
                let d = b.as_poly()?;
                if d.degree() != Some(0) {
                    return None;
                }
                a.as_poly()?.scale(&d.coeff(0).recip())
            }
            Expr::Pow(a, k) if *k >= 0 => {
                let p = a.as_poly()?;
                (0..*k).fold(Poly::constant(<Rational as One>::one()), |acc, _| acc.mul(&p))
            }
            _ => return None,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(r) if r.is_negative() || !r.is_integer() => 2,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())?
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())?
                }
            }
            Expr::Pi => write!(f, "pi")?,
            Expr::E => write!(f, "e")?,
            Expr::Var => write!(f, "x")?,
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 4)?
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)?
            }
            Expr::Pow(a, k) => {
                a.fmt_prec(f, 5)?;
                if *k < 0 {
                    write!(f, "^({k})")?
                } else {
                    write!(f, "^{k}")?
                }
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $var:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$var(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::int(0)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(r) if Zero::is_zero(r))
    }
}
