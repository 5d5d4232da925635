//! Derivative-matching expansions.
//!
//! Every kind is built from derivatives `c_0..c_N` at a point `x₀` and is
//! expressed in the shifted variable `y = x − x₀`. Basis functions all have
//! rational Taylor coefficients at `y = 0`, so an approximant can be
//! re-measured exactly through its jet.

mod coeffs;
mod special;

use std::fmt;
use std::ops::RangeInclusive;

use num_traits::Zero;

pub use coeffs::{
    dirichlet_coeffs, dmatrix_build, exp_weighted_coeffs, nsbf_coeffs, nsbf_coeffs_strict,
    pade_solve, pade_split, pow_sine_coeffs, powers_of_g_coeffs, rational_x1_coeffs, taylor_coeffs,
    DMatrix, DirichletVariant, GVariant,
};
pub use special::{dex_eval, dex_series, moebius_g_eval, prime_indicator_eval, prime_indicator_p};

use crate::error::{Error, Result};
use crate::framework::{mismatch, Approximant, CharNumbers, CoeffSeq, Family, Lambda, Measurable};
use crate::jets::{Expr, Jet};
use crate::scalar::{factorial, int, Rational, Scalar};
use crate::specfun::{bessel_j, lambert_w0, moebius};

#[derive(Debug, Clone, PartialEq)]
pub enum ExpansionKind {
    Taylor,
    Nsbf,
    Pade { m: usize, n: usize },
    PowSine,
    ExpWeighted { w: Rational, q: u32 },
    LogPowers,
    RationalX { alpha: Rational },
    Stirling1G,
    LambertWG,
    DirichletG,
    DirichletRat1,
    DirichletRat2,
    Dex,
    Nonlinear { lambda: Lambda },
}

impl ExpansionKind {
    pub const NAMES: [&'static str; 14] = [
        "taylor",
        "nsbf",
        "pade",
        "pow_sine",
        "exp_weighted",
        "log_powers",
        "rational_x_over_x1",
        "stirling1_g",
        "lambert_w_g",
        "dirichlet_g",
        "dirichlet_rat1",
        "dirichlet_rat2",
        "dex",
        "nonlinear",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExpansionKind::Taylor => "taylor",
            ExpansionKind::Nsbf => "nsbf",
            ExpansionKind::Pade { .. } => "pade",
            ExpansionKind::PowSine => "pow_sine",
            ExpansionKind::ExpWeighted { .. } => "exp_weighted",
            ExpansionKind::LogPowers => "log_powers",
            ExpansionKind::RationalX { .. } => "rational_x_over_x1",
            ExpansionKind::Stirling1G => "stirling1_g",
            ExpansionKind::LambertWG => "lambert_w_g",
            ExpansionKind::DirichletG => "dirichlet_g",
            ExpansionKind::DirichletRat1 => "dirichlet_rat1",
            ExpansionKind::DirichletRat2 => "dirichlet_rat2",
            ExpansionKind::Dex => "dex",
            ExpansionKind::Nonlinear { .. } => "nonlinear",
        }
    }

    /// Kind with default parameters for `name` at `order` (Padé splits the
    /// order as evenly as possible, `w = −1/2`, `q = 2`, `α = −1`, `Λ = ln`).
    pub fn with_defaults(name: &str, order: usize) -> Result<Self> {
        Ok(match name {
            "taylor" => ExpansionKind::Taylor,
            "nsbf" => ExpansionKind::Nsbf,
            "pade" => {
                let (m, n) = pade_split(order);
                ExpansionKind::Pade { m, n }
            }
            "pow_sine" => ExpansionKind::PowSine,
            "exp_weighted" => ExpansionKind::ExpWeighted {
                w: Rational::new((-1).into(), 2.into()),
                q: 2,
            },
            "log_powers" => ExpansionKind::LogPowers,
            "rational_x_over_x1" | "newpade" => ExpansionKind::RationalX { alpha: int(-1) },
            "stirling1_g" => ExpansionKind::Stirling1G,
            "lambert_w_g" => ExpansionKind::LambertWG,
            "dirichlet_g" => ExpansionKind::DirichletG,
            "dirichlet_rat1" => ExpansionKind::DirichletRat1,
            "dirichlet_rat2" => ExpansionKind::DirichletRat2,
            "dex" => ExpansionKind::Dex,
            "nonlinear" => ExpansionKind::Nonlinear { lambda: Lambda::Ln },
            other => {
                return Err(Error::InvalidParameter(format!("unknown expansion kind '{other}'")))
            }
        })
    }

    /// Coefficients keep their values when the order grows.
    pub fn is_persistent(&self) -> bool {
        !matches!(self, ExpansionKind::Pade { .. } | ExpansionKind::Dex)
    }

    /// `a_n` depends on `c_n` alone.
    pub fn is_delta(&self) -> bool {
        matches!(
            self,
            ExpansionKind::Taylor | ExpansionKind::Dex | ExpansionKind::Nonlinear { .. }
        )
    }
}

impl fmt::Display for ExpansionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionKind::Pade { m, n } => write!(f, "pade[{m}/{n}]"),
            ExpansionKind::ExpWeighted { w, q } => write!(f, "exp_weighted(w={w},q={q})"),
            ExpansionKind::RationalX { alpha } => write!(f, "rational_x_over_x1(alpha={alpha})"),
            ExpansionKind::Nonlinear { lambda } => write!(f, "nonlinear({})", lambda.name()),
            other => write!(f, "{}", other.name()),
        }
    }
}

/// Derivatives `c_n = d^n Λ(f)/dx^n` at `x₀`.
pub fn nonlinear_chars<T: Scalar>(
    e: &Expr,
    lambda: Lambda,
    x0: f64,
    order: usize,
) -> Result<CharNumbers<T>> {
    let center = T::from_f64(x0)
        .ok_or_else(|| Error::InvalidParameter(format!("expansion point {x0} is not finite")))?;
    let jet = lambda.apply_jet(&e.jet(&center, order)?)?;
    Ok(CharNumbers::new(jet.derivatives(), Family::Nonlinear { lambda, x0 }))
}

/// A truncated expansion `Σ a_n φ_n(x − x₀)`, or `P/Q` for Padé.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesApproximant<T> {
    kind: ExpansionKind,
    x0: f64,
    coeffs: Vec<T>,
    denom: Vec<T>,
    // exact values behind `coeffs` and `denom`, used for jets
    exact: Option<(Vec<Rational>, Vec<Rational>)>,
}

fn exact_of<T: Scalar>(coeffs: &[T], denom: &[T]) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let conv = |v: &[T]| v.iter().map(Scalar::to_rational).collect::<Option<Vec<_>>>();
    Some((conv(coeffs)?, conv(denom)?))
}

/// Builds the approximant of `kind` from derivative data.
pub fn build<T: Scalar>(kind: &ExpansionKind, c: &CharNumbers<T>) -> Result<SeriesApproximant<T>> {
    let x0 = match (kind, c.family()) {
        (ExpansionKind::Nonlinear { lambda }, Family::Nonlinear { lambda: l, x0 }) if lambda == l => *x0,
        (ExpansionKind::Nonlinear { .. }, _) => return Err(mismatch(kind.to_string(), c.family())),
        (_, Family::Derivative { x0 }) => *x0,
        _ => return Err(mismatch(kind.to_string(), c.family())),
    };
    if c.start() != 0 {
        return Err(Error::InvalidParameter("derivative data must start at c_0".into()));
    }
    if !T::EXACT {
        // Floats convert exactly to rationals; building there avoids the
        // cancellation in the alternating coefficient sums.
        let exact = c
            .values()
            .iter()
            .map(Scalar::to_rational)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidParameter("characteristic numbers must be finite".into()))?;
        let a = build(kind, &CharNumbers::new(exact, c.family().clone()))?;
        let back = |v: &[Rational]| v.iter().map(T::from_rational).collect();
        return Ok(SeriesApproximant {
            kind: a.kind,
            x0,
            coeffs: back(&a.coeffs),
            denom: back(&a.denom),
            exact: a.exact,
        });
    }
    let cv = c.values();
    let mut denom = Vec::new();
    let coeffs = match kind {
        ExpansionKind::Taylor | ExpansionKind::Dex | ExpansionKind::Nonlinear { .. } => {
            taylor_coeffs(cv)
        }
        ExpansionKind::Nsbf => nsbf_coeffs(cv),
        ExpansionKind::Pade { m, n } => {
            let (p, q) = pade_solve(cv, *m, *n)?;
            denom = q;
            p
        }
        ExpansionKind::PowSine => pow_sine_coeffs(cv)?,
        ExpansionKind::ExpWeighted { w, q } => exp_weighted_coeffs(cv, w, *q)?,
        ExpansionKind::LogPowers => powers_of_g_coeffs(cv, GVariant::LogPowers)?,
        ExpansionKind::RationalX { alpha } => rational_x1_coeffs(cv, alpha)?,
        ExpansionKind::Stirling1G => powers_of_g_coeffs(cv, GVariant::Stirling1)?,
        ExpansionKind::LambertWG => powers_of_g_coeffs(cv, GVariant::LambertW)?,
        ExpansionKind::DirichletG => dirichlet_coeffs(cv, DirichletVariant::G)?,
        ExpansionKind::DirichletRat1 => dirichlet_coeffs(cv, DirichletVariant::Rat1)?,
        ExpansionKind::DirichletRat2 => dirichlet_coeffs(cv, DirichletVariant::Rat2)?,
    };
    Ok(SeriesApproximant {
        kind: kind.clone(),
        x0,
        exact: exact_of(&coeffs, &denom),
        coeffs,
        denom,
    })
}

/// `dex_{[N,n]}` approximant `Σ_{n<N} c_n dex_{[N,n]}(x − x₀)` with ring
/// size `N` equal to the number of characteristic numbers.
pub fn dex_approx<T: Scalar>(c: &CharNumbers<T>) -> Result<SeriesApproximant<T>> {
    build(&ExpansionKind::Dex, c)
}

/// `Ω(Σ a_n (x−x₀)^n/n!)` with `a_n = c_n`.
pub fn nonlinear_approx<T: Scalar>(c: &CharNumbers<T>) -> Result<SeriesApproximant<T>> {
    match c.family() {
        Family::Nonlinear { lambda, .. } => build(&ExpansionKind::Nonlinear { lambda: *lambda }, c),
        other => Err(mismatch("nonlinear", other)),
    }
}

/// Taylor coefficients of the `n`-th basis function at `y = 0`.
fn basis_series(kind: &ExpansionKind, n: usize, ring: usize, order: usize) -> Result<Vec<Rational>> {
    let y = Jet::variable(int(0), order);
    let mono = |k: usize, c: Rational| {
        let mut v = vec![Rational::zero(); order + 1];
        if k <= order {
            v[k] = c;
        }
        v
    };
    let at_multiples = |step: usize, val: &dyn Fn(usize) -> Rational| {
        (0..=order)
            .map(|m| if m % step == 0 { val(m / step) } else { Rational::zero() })
            .collect::<Vec<_>>()
    };
    let pow = |g: Jet<Rational>| -> Result<Vec<Rational>> { Ok(g.powi(n as i32)?.coeffs().to_vec()) };
    match kind {
        ExpansionKind::Taylor | ExpansionKind::Nonlinear { .. } => {
            Ok(mono(n, int(1) / factorial(n)))
        }
        ExpansionKind::Nsbf => Ok((0..=order)
            .map(|m| {
                if m < n || (m - n) % 2 == 1 {
                    return Rational::zero();
                }
                let k = (m - n) / 2;
                let sign = if k % 2 == 0 { int(1) } else { int(-1) };
                let two = Rational::from_integer(num_bigint::BigInt::from(2).pow(m as u32));
                sign / (two * factorial(k) * factorial(k + n))
            })
            .collect()),
        ExpansionKind::PowSine => pow(y.scale(&Rational::new(1.into(), 2.into())).sin()?),
        ExpansionKind::ExpWeighted { w, q } => {
            let e = y.powi(*q as i32)?.scale(w).exp()?;
            Ok(e.mul(&y.powi(n as i32)?)?.coeffs().to_vec())
        }
        ExpansionKind::LogPowers => pow(y.add_scalar(&int(1)).ln()?),
        ExpansionKind::RationalX { alpha } => pow(y.div(&y.add_scalar(&-alpha.clone()))?),
        ExpansionKind::Stirling1G => pow(y.neg().exp()?.neg().add_scalar(&int(1))),
        ExpansionKind::LambertWG => {
            // W(y) = Σ_{k≥1} (−k)^{k−1} y^k / k!
            let w: Vec<Rational> = (0..=order)
                .map(|k| {
                    if k == 0 {
                        return Rational::zero();
                    }
                    crate::specfun::gen_pow(&int(-(k as i64)), k as i64 - 1).expect("nonzero base")
                        / factorial(k)
                })
                .collect();
            pow(Jet::new(int(0), w))
        }
        ExpansionKind::DirichletG if n > 0 => Ok(at_multiples(n, &|k| {
            if k == 0 {
                Rational::zero()
            } else {
                int(moebius(k as u64).expect("positive index") as i64)
            }
        })),
        ExpansionKind::DirichletRat1 if n > 0 => Ok(at_multiples(n, &|_| int(1))),
        ExpansionKind::DirichletRat2 if n > 0 => Ok(at_multiples(n, &|k| match k % 4 {
            1 => int(1),
            3 => int(-1),
            _ => Rational::zero(),
        })),
        ExpansionKind::DirichletG | ExpansionKind::DirichletRat1 | ExpansionKind::DirichletRat2 => {
            Ok(mono(0, int(1)))
        }
        ExpansionKind::Dex => dex_series(ring, n, order),
        ExpansionKind::Pade { .. } => Err(Error::InvalidParameter(
            "Padé approximants have no linear basis".into(),
        )),
    }
}

impl<T: Scalar> SeriesApproximant<T> {
    /// Approximant with hand-set coefficients (`a_0..a_N`; for Padé the
    /// numerator, with `denom` the denominator).
    pub fn from_coeffs(kind: ExpansionKind, x0: f64, coeffs: Vec<T>, denom: Vec<T>) -> Self {
        SeriesApproximant {
            kind,
            x0,
            exact: exact_of(&coeffs, &denom),
            coeffs,
            denom,
        }
    }

    pub fn kind(&self) -> &ExpansionKind {
        &self.kind
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `a_0..a_N`; for the Dirichlet kinds `a_0` is the constant `b₀`; for
    /// Padé these are the numerator coefficients.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Padé denominator `q_0 = 1, q_1..q_n` (empty for other kinds).
    pub fn denominator(&self) -> &[T] {
        &self.denom
    }

    pub fn coeff_seq(&self) -> CoeffSeq<T> {
        let mut values = self.coeffs.clone();
        values.extend(self.denom.iter().cloned());
        CoeffSeq {
            values,
            kind: self.kind.to_string(),
        }
    }

    /// Jet at `x₀` to `order`, computed from the closed form.
    pub fn jet(&self, order: usize) -> Result<Jet<T>> {
        let center = T::from_f64(self.x0)
            .ok_or_else(|| Error::InvalidParameter("expansion point is not finite".into()))?;
        let (coeffs, denom) = self
            .exact
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("coefficients are not finite".into()))?;
        // Basis jets at y = 0 are rational, so the linear part is formed
        // exactly and rounded once.
        let padded = |v: &[Rational]| {
            let mut out = vec![Rational::zero(); order + 1];
            for (o, c) in out.iter_mut().zip(v) {
                *o = c.clone();
            }
            Jet::new(Rational::zero(), out)
        };
        let lin = if let ExpansionKind::Pade { .. } = self.kind {
            padded(coeffs).div(&padded(denom))?
        } else {
            let ring = coeffs.len();
            let mut acc = vec![Rational::zero(); order + 1];
            for (n, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let phi = basis_series(&self.kind, n, ring, order)?;
                for (slot, p) in acc.iter_mut().zip(&phi) {
                    if !p.is_zero() {
                        *slot += a * p;
                    }
                }
            }
            Jet::new(Rational::zero(), acc)
        };
        let lin = Jet::new(center, lin.coeffs().iter().map(T::from_rational).collect());
        match self.kind {
            ExpansionKind::Nonlinear { lambda } => lambda.inverse_jet(&lin),
            _ => Ok(lin),
        }
    }

    fn eval_y(&self, y: f64) -> Result<f64> {
        let a: Vec<f64> = self.coeffs.iter().map(Scalar::to_f64).collect();
        let horner = |g: f64| a.iter().rev().fold(0.0, |acc, c| acc * g + c);
        let taylor = || {
            let mut fact = 1.0;
            let scaled: Vec<f64> = a
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    c / fact
                })
                .collect();
            scaled.iter().rev().fold(0.0, |acc, c| acc * y + c)
        };
        let b0 = a.first().copied().unwrap_or(0.0);
        let tail = |phi: &dyn Fn(usize) -> Result<f64>| -> Result<f64> {
            (1..a.len()).try_fold(b0, |acc, n| {
                Ok(if a[n] == 0.0 { acc } else { acc + a[n] * phi(n)? })
            })
        };
        match &self.kind {
            ExpansionKind::Taylor => Ok(taylor()),
            ExpansionKind::Nonlinear { lambda } => lambda.inverse(taylor()),
            ExpansionKind::Nsbf => Ok(a
                .iter()
                .enumerate()
                .map(|(n, c)| if *c == 0.0 { 0.0 } else { c * bessel_j(n as u32, y) })
                .sum()),
            ExpansionKind::Pade { .. } => {
                let p = horner(y);
                let q = self.denom.iter().rev().fold(0.0, |acc, c| acc * y + c.to_f64());
                if q == 0.0 {
                    return Err(Error::eval("pade", format!("denominator vanishes at y = {y}")));
                }
                Ok(p / q)
            }
            ExpansionKind::PowSine => Ok(horner((y / 2.0).sin())),
            ExpansionKind::ExpWeighted { w, q } => {
                Ok((w.to_f64() * y.powi(*q as i32)).exp() * horner(y))
            }
            ExpansionKind::LogPowers => {
                if y <= -1.0 {
                    return Err(Error::eval("ln", format!("ln(1 + y) undefined at y = {y}")));
                }
                Ok(horner(y.ln_1p()))
            }
            ExpansionKind::RationalX { alpha } => {
                let d = y - alpha.to_f64();
                if d == 0.0 {
                    return Err(Error::eval("rational_x_over_x1", "pole of the basis"));
                }
                Ok(horner(y / d))
            }
            ExpansionKind::Stirling1G => Ok(horner(-(-y).exp_m1())),
            ExpansionKind::LambertWG => Ok(horner(lambert_w0(y)?)),
            ExpansionKind::DirichletG => {
                if !(y.abs() < 1.0) {
                    return Err(Error::domain("moebius_G", "requires |x| < 1"));
                }
                tail(&|n| special::moebius_g(y.powi(n as i32)))
            }
            ExpansionKind::DirichletRat1 => {
                if (y.abs() - 1.0).abs() <= f64::EPSILON {
                    return Err(Error::eval(
                        "dirichlet_rat1",
                        "every term 1/(1 − x^n) is singular on |x| = 1",
                    ));
                }
                tail(&|n| {
                    let d = 1.0 - y.powi(n as i32);
                    if d == 0.0 {
                        Err(Error::eval("dirichlet_rat1", "pole of the basis"))
                    } else {
                        Ok(1.0 / d)
                    }
                })
            }
            ExpansionKind::DirichletRat2 => tail(&|n| {
                let t = y.powi(n as i32);
                Ok(t / (t * t + 1.0))
            }),
            ExpansionKind::Dex => {
                let ring = a.len();
                a.iter()
                    .enumerate()
                    .try_fold(0.0, |acc, (n, c)| Ok(acc + c * dex_eval(ring, n, y)?))
            }
        }
    }
}

impl<T: Scalar> Approximant for SeriesApproximant<T> {
    fn kind_name(&self) -> String {
        self.kind.to_string()
    }

    fn eval(&self, x: f64) -> Result<f64> {
        self.eval_y(x - self.x0)
    }
}

impl<T: Scalar> Measurable<T> for SeriesApproximant<T> {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<T>> {
        let order = *indices.end();
        let jet = match (family, &self.kind) {
            (Family::Derivative { x0 }, _) if *x0 == self.x0 => self.jet(order)?,
            (Family::Nonlinear { lambda, x0 }, ExpansionKind::Nonlinear { lambda: l })
                if lambda == l && *x0 == self.x0 =>
            {
                lambda.apply_jet(&self.jet(order)?)?
            }
            _ => return Err(mismatch(self.kind.to_string(), family)),
        };
        let d = jet.derivatives();
        Ok(indices.map(|n| d[n].clone()).collect())
    }
}

impl<T: Scalar> SeriesApproximant<T> {
    /// `Ω` itself: the nonlinear approximant with `a_n = δ_{n,1}`.
    pub fn nonlinear_identity(lambda: Lambda, x0: f64, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order.max(1) + 1];
        coeffs[1] = T::one();
        SeriesApproximant::from_coeffs(ExpansionKind::Nonlinear { lambda }, x0, coeffs, Vec::new())
    }
}
