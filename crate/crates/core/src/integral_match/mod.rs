//! Integral-based characteristic families: moments, orthogonal series,
//! higher integrals and endpoint derivative differences.

mod quad;

use std::ops::RangeInclusive;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use quad::{legendre_values, Quadrature};

use crate::error::{Error, Result};
use crate::framework::{mismatch, Approximant, CharNumbers, Family, Measurable, OrthoBasis};
use crate::jets::{Expr, Jet};
use crate::poly::Poly;
use crate::scalar::{factorial, int, Rational, Scalar};
use crate::specfun::{bernoulli_poly, binomial, legendre_coeffs};

fn scalar_at<T: Scalar>(x: f64) -> Result<T> {
    T::from_f64(x).ok_or_else(|| Error::InvalidParameter(format!("{x} is not a finite point")))
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a == b {
        return Err(Error::domain("interval", format!("({a}, {b}) is empty or unbounded")));
    }
    Ok(())
}

fn node(nodes: &[f64], n: usize) -> Result<f64> {
    nodes
        .get(n)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("no node with index {n}")))
}

fn higher_integral_weight<T: Scalar>(n: usize) -> Result<Poly<T>> {
    if n == 0 {
        return Err(Error::domain("higher_integral", "the family starts at n = 1"));
    }
    // (1 − t)^{n−1}/(n−1)!
    let base = Poly::new(vec![T::one(), -T::one()]);
    let mut p = Poly::constant(T::from_rational(&(int(1) / factorial(n - 1))));
    for _ in 1..n {
        p = p.mul(&base);
    }
    Ok(p)
}

/// `v_n(x)` of an orthogonal system.
pub fn ortho_basis_eval(basis: OrthoBasis, n: usize, x: f64) -> f64 {
    match basis {
        OrthoBasis::Fourier => match n {
            0 => std::f64::consts::FRAC_1_SQRT_2,
            n if n % 2 == 1 => ((n + 1) as f64 / 2.0 * x).sin(),
            n => (n as f64 / 2.0 * x).cos(),
        },
        OrthoBasis::LegendreFourier => {
            (2.0 / (2 * n + 1) as f64).sqrt() * legendre_values(n, x)[n]
        }
    }
}

/// Natural interval of an orthogonal system.
pub fn ortho_interval(basis: OrthoBasis) -> (f64, f64) {
    match basis {
        OrthoBasis::Fourier => (-std::f64::consts::PI, std::f64::consts::PI),
        OrthoBasis::LegendreFourier => (-1.0, 1.0),
    }
}

/// `∫ v_n²` over the natural interval.
fn ortho_norm_sq(basis: OrthoBasis, n: usize) -> f64 {
    match basis {
        OrthoBasis::Fourier => std::f64::consts::PI,
        OrthoBasis::LegendreFourier => {
            let s = 2.0 / (2 * n + 1) as f64;
            s * s
        }
    }
}

/// Characteristic numbers of a black-box function for the families that
/// only need point values and integrals.
pub fn measure_fn(
    f: &dyn Fn(f64) -> Result<f64>,
    family: &Family,
    indices: RangeInclusive<usize>,
    quad: &Quadrature,
) -> Result<Vec<f64>> {
    indices
        .map(|n| match family {
            Family::Moment { a, b } => {
                check_interval(*a, *b)?;
                quad.integrate(|x| Ok(x.powi(n as i32) * f(x)?), *a, *b)
            }
            Family::HigherIntegral => {
                let w = higher_integral_weight::<f64>(n)?;
                quad.integrate(|t| Ok(w.eval(&t) * f(t)?), -1.0, 1.0)
            }
            Family::NodeValues { nodes } => f(node(nodes, n)?),
            Family::PrimitiveAtNodes { a, nodes } => quad.integrate(f, *a, node(nodes, n)?),
            Family::Orthogonal { basis } => {
                let (a, b) = ortho_interval(*basis);
                let raw = quad.integrate(|x| Ok(ortho_basis_eval(*basis, n, x) * f(x)?), a, b)?;
                Ok(raw / ortho_norm_sq(*basis, n))
            }
            other => Err(mismatch("pointwise function", other)),
        })
        .collect()
}

/// Characteristic numbers of a polynomial, exact for every family that
/// does not involve an orthogonal system.
pub fn measure_poly<T: Scalar>(
    p: &Poly<T>,
    family: &Family,
    indices: RangeInclusive<usize>,
    quad: &Quadrature,
) -> Result<Vec<T>> {
    let derivs = |x0: &T, order: usize| -> Vec<T> {
        let shifted = p.compose_affine(&T::one(), x0);
        (0..=order)
            .map(|k| shifted.coeff(k) * T::from_rational(&factorial(k)))
            .collect()
    };
    match family {
        Family::Derivative { x0 } => {
            let d = derivs(&scalar_at(*x0)?, *indices.end());
            Ok(indices.map(|n| d[n].clone()).collect())
        }
        Family::Nonlinear { lambda, x0 } => {
            let x0t: T = scalar_at(*x0)?;
            let order = *indices.end();
            let shifted = p.compose_affine(&T::one(), &x0t);
            let jet = Jet::new(x0t, (0..=order).map(|k| shifted.coeff(k)).collect());
            let d = lambda.apply_jet(&jet)?.derivatives();
            Ok(indices.map(|n| d[n].clone()).collect())
        }
        Family::Moment { a, b } => {
            check_interval(*a, *b)?;
            let (a, b) = (scalar_at::<T>(*a)?, scalar_at::<T>(*b)?);
            Ok(indices
                .map(|n| p.mul(&Poly::monomial(n, T::one())).integrate(&a, &b))
                .collect())
        }
        Family::HigherIntegral => indices
            .map(|n| {
                let w = higher_integral_weight::<T>(n)?;
                Ok(p.mul(&w).integrate(&-T::one(), &T::one()))
            })
            .collect(),
        Family::EndpointDifference { a, b, anchor } => {
            check_interval(*a, *b)?;
            let order = indices.end().saturating_sub(1);
            let (at, bt) = (scalar_at::<T>(*a)?, scalar_at::<T>(*b)?);
            let da = derivs(&at, order);
            let db = derivs(&bt, order);
            indices
                .map(|n| match (n, anchor) {
                    (0, Some(x0)) => Ok(p.eval(&scalar_at(*x0)?)),
                    (0, None) => Ok(p.integrate(&at, &bt)),
                    (n, _) => Ok(db[n - 1].clone() - da[n - 1].clone()),
                })
                .collect()
        }
        Family::NodeValues { nodes } => indices
            .map(|n| Ok(p.eval(&scalar_at(node(nodes, n)?)?)))
            .collect(),
        Family::PrimitiveAtNodes { a, nodes } => {
            let at = scalar_at::<T>(*a)?;
            indices
                .map(|n| Ok(p.integrate(&at, &scalar_at(node(nodes, n)?)?)))
                .collect()
        }
        Family::Orthogonal { .. } => {
            let pf = p.to_f64();
            measure_fn(&|x| Ok(pf.eval(&x)), family, indices, quad)?
                .into_iter()
                .map(scalar_at)
                .collect()
        }
    }
}

/// Characteristic numbers `c_n`, `n ∈ indices`, of an expression under any
/// family. Polynomials are measured exactly; other integrals use `quad`.
pub fn expr_char_numbers<T: Scalar>(
    e: &Expr,
    family: &Family,
    indices: RangeInclusive<usize>,
    quad: &Quadrature,
) -> Result<CharNumbers<T>> {
    let start = *indices.start();
    let values = expr_measure(e, family, indices, quad)?;
    Ok(CharNumbers::with_start(values, family.clone(), start))
}

fn expr_measure<T: Scalar>(
    e: &Expr,
    family: &Family,
    indices: RangeInclusive<usize>,
    quad: &Quadrature,
) -> Result<Vec<T>> {
    let jet_derivs = |x: f64, order: usize| -> Result<Vec<T>> {
        Ok(e.jet(&scalar_at::<T>(x)?, order)?.derivatives())
    };
    match family {
        Family::Derivative { x0 } => {
            let d = jet_derivs(*x0, *indices.end())?;
            Ok(indices.map(|n| d[n].clone()).collect())
        }
        Family::Nonlinear { lambda, x0 } => {
            let j = lambda.apply_jet(&e.jet(&scalar_at::<T>(*x0)?, *indices.end())?)?;
            let d = j.derivatives();
            Ok(indices.map(|n| d[n].clone()).collect())
        }
        Family::EndpointDifference { a, b, anchor } => {
            check_interval(*a, *b)?;
            let order = indices.end().saturating_sub(1);
            let da = jet_derivs(*a, order)?;
            let db = jet_derivs(*b, order)?;
            indices
                .map(|n| match (n, anchor) {
                    (0, Some(x0)) => Ok(jet_derivs(*x0, 0)?.remove(0)),
                    (0, None) => match e.as_poly() {
                        Some(p) => Ok(p.cast::<T>().integrate(&scalar_at(*a)?, &scalar_at(*b)?)),
                        None => scalar_at(quad.integrate(|x| e.eval(x), *a, *b)?),
                    },
                    (n, _) => Ok(db[n - 1].clone() - da[n - 1].clone()),
                })
                .collect()
        }
        Family::NodeValues { nodes } => indices
            .map(|n| Ok(jet_derivs(node(nodes, n)?, 0)?.remove(0)))
            .collect(),
        _ => match e.as_poly() {
            Some(p) => measure_poly(&p.cast::<T>(), family, indices, quad),
            None => measure_fn(&|x| e.eval(x), family, indices, quad)?
                .into_iter()
                .map(scalar_at)
                .collect(),
        },
    }
}

/// A polynomial approximant in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyApproximant<T> {
    kind: String,
    poly: Poly<T>,
}

impl<T: Scalar> PolyApproximant<T> {
    pub fn new(kind: impl Into<String>, poly: Poly<T>) -> Self {
        PolyApproximant {
            kind: kind.into(),
            poly,
        }
    }

    pub fn poly(&self) -> &Poly<T> {
        &self.poly
    }
}

impl<T: Scalar> Approximant for PolyApproximant<T> {
    fn kind_name(&self) -> String {
        self.kind.clone()
    }

    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.poly.eval_f64(x))
    }
}

impl<T: Scalar> Measurable<T> for PolyApproximant<T> {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<T>> {
        measure_poly(&self.poly, family, indices, &Quadrature::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    Quadrature,
    Exact,
}

/// Raw moments `∫_a^b x^n f(x) dx`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet<T> {
    pub interval: (f64, f64),
    pub values: Vec<T>,
    pub source: MomentSource,
    /// Largest doubling estimate of the quadrature error (zero when exact).
    pub error_estimate: f64,
}

impl<T: Scalar> MomentSet<T> {
    pub fn chars(&self) -> CharNumbers<T> {
        let (a, b) = self.interval;
        CharNumbers::new(self.values.clone(), Family::Moment { a, b })
    }
}

impl<T: Scalar> Serialize for MomentSet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MomentSet", 4)?;
        st.serialize_field("interval", &[self.interval.0, self.interval.1])?;
        let v: Vec<f64> = self.values.iter().map(Scalar::to_f64).collect();
        st.serialize_field("values", &v)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("error_estimate", &self.error_estimate)?;
        st.end()
    }
}

pub fn moments_compute<T: Scalar>(
    e: &Expr,
    interval: (f64, f64),
    order: usize,
    quad: &Quadrature,
) -> Result<MomentSet<T>> {
    let (a, b) = interval;
    check_interval(a, b)?;
    let family = Family::Moment { a, b };
    if let Some(p) = e.as_poly() {
        return Ok(MomentSet {
            interval,
            values: measure_poly(&p.cast::<T>(), &family, 0..=order, quad)?,
            source: MomentSource::Exact,
            error_estimate: 0.0,
        });
    }
    let mut err: f64 = 0.0;
    let values = (0..=order)
        .map(|n| {
            let (v, e_n) = quad.integrate_with_error(|x| Ok(x.powi(n as i32) * e.eval(x)?), a, b)?;
            err = err.max(e_n);
            scalar_at(v)
        })
        .collect::<Result<_>>()?;
    Ok(MomentSet {
        interval,
        values,
        source: MomentSource::Quadrature,
        error_estimate: err,
    })
}

/// `β_n = (2n+1)/2 Σ_j γ_j^n c_j` for moments on `(−1, 1)`.
pub fn legendre_betas<T: Scalar>(c: &[T]) -> Vec<T> {
    (0..c.len())
        .map(|n| {
            let gamma = legendre_coeffs(n, false);
            let s = (0..=n).fold(T::zero(), |acc, j| {
                let g = gamma.coeff(j);
                if g.is_zero() {
                    acc
                } else {
                    acc + T::from_rational(&g) * c[j].clone()
                }
            });
            T::from_rational(&Rational::new((2 * n as i64 + 1).into(), 2.into())) * s
        })
        .collect()
}

fn legendre_series<T: Scalar>(betas: &[T]) -> Poly<T> {
    betas.iter().enumerate().fold(Poly::zero(), |acc, (n, b)| {
        acc.add(&legendre_coeffs(n, false).cast::<T>().scale(b))
    })
}

/// Polynomial `Σ β_n P_n` whose first `N+1` moments equal the given ones.
/// Finite intervals other than `(−1, 1)` are mapped affinely.
pub fn legendre_moment_match<T: Scalar>(c: &CharNumbers<T>) -> Result<PolyApproximant<T>> {
    let (a, b) = match c.family() {
        Family::Moment { a, b } => (*a, *b),
        other => return Err(mismatch("legendre_moment", other)),
    };
    check_interval(a, b)?;
    if c.start() != 0 {
        return Err(Error::InvalidParameter("moments must start at c_0".into()));
    }
    let (at, bt) = (scalar_at::<T>(a)?, scalar_at::<T>(b)?);
    let two = T::from_i64(2);
    let mid = (at.clone() + bt.clone()) / two.clone();
    let half = (bt - at) / two;
    // moments of g(t) = f(mid + half·t) on (−1, 1)
    let cv = c.values();
    let mapped: Vec<T> = (0..cv.len())
        .map(|j| {
            let s = (0..=j).fold(T::zero(), |acc, i| {
                let w = T::from_rational(&binomial(j as i64, i as i64)) * (-mid.clone()).powu((j - i) as u32);
                acc + w * cv[i].clone()
            });
            s / half.powu(j as u32 + 1)
        })
        .collect();
    let g = legendre_series(&legendre_betas(&mapped));
    let inv = T::one() / half;
    let poly = g.compose_affine(&inv, &(-mid * inv.clone()));
    Ok(PolyApproximant::new("legendre_moment", poly))
}

/// Legendre coefficients of the partial delta function `Δ_m^{[N],M}`.
pub fn moment_partial_delta_betas(m: usize, order: usize) -> Result<Vec<Rational>> {
    if m > order {
        return Err(Error::InvalidParameter(format!("index {m} exceeds order {order}")));
    }
    let c: Vec<Rational> = (0..=order).map(|j| int((j == m) as i64)).collect();
    Ok(legendre_betas(&c))
}

/// `Δ_m^{[N],M}` on `(−1, 1)`: `∫ x^n Δ = δ_{n,m}` for `n ≤ N`.
pub fn moment_partial_delta(m: usize, order: usize) -> Result<Poly<Rational>> {
    Ok(legendre_series(&moment_partial_delta_betas(m, order)?))
}

/// `max |Δ_m^{[N],M}|` on a 2001-point grid of `[−1, 1]` for each `N`.
pub fn moment_delta_growth(m: usize, orders: &[usize]) -> Result<Vec<(usize, f64)>> {
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("orders must increase".into()));
    }
    orders
        .iter()
        .map(|&order| {
            let betas: Vec<f64> = moment_partial_delta_betas(m, order)?
                .iter()
                .map(Scalar::to_f64)
                .collect();
            let sup = (0..=2000)
                .map(|i| {
                    let x = -1.0 + i as f64 / 1000.0;
                    let p = legendre_values(order, x);
                    betas.iter().zip(&p).map(|(b, p)| b * p).sum::<f64>().abs()
                })
                .fold(0.0, f64::max);
            Ok((order, sup))
        })
        .collect()
}

/// Orthogonal-series coefficients: the dual-normalized values
/// `∫ v_n f / ∫ v_n²` and the raw integrals `∫ v_n f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthoCoeffs {
    pub basis: OrthoBasis,
    pub dual: Vec<f64>,
    pub raw: Vec<f64>,
}

fn ortho_coeffs(e: &Expr, basis: OrthoBasis, order: usize, quad: &Quadrature) -> Result<OrthoCoeffs> {
    let (a, b) = ortho_interval(basis);
    let raw: Vec<f64> = (0..=order)
        .map(|n| quad.integrate(|x| Ok(ortho_basis_eval(basis, n, x) * e.eval(x)?), a, b))
        .collect::<Result<_>>()?;
    let dual = raw
        .iter()
        .enumerate()
        .map(|(n, r)| r / ortho_norm_sq(basis, n))
        .collect();
    Ok(OrthoCoeffs { basis, dual, raw })
}

pub fn fourier_coeffs(e: &Expr, order: usize, quad: &Quadrature) -> Result<OrthoCoeffs> {
    ortho_coeffs(e, OrthoBasis::Fourier, order, quad)
}

pub fn legendre_fourier_coeffs(e: &Expr, order: usize, quad: &Quadrature) -> Result<OrthoCoeffs> {
    ortho_coeffs(e, OrthoBasis::LegendreFourier, order, quad)
}

impl OrthoCoeffs {
    pub fn chars(&self) -> CharNumbers<f64> {
        CharNumbers::new(self.dual.clone(), Family::Orthogonal { basis: self.basis })
    }

    pub fn approximant(&self) -> OrthoApproximant {
        OrthoApproximant {
            basis: self.basis,
            coeffs: self.dual.clone(),
        }
    }
}

/// `Σ a_n v_n(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoApproximant {
    pub basis: OrthoBasis,
    pub coeffs: Vec<f64>,
}

impl OrthoApproximant {
    /// Power-basis form of a Legendre-Fourier series.
    pub fn to_poly(&self) -> Option<Poly<f64>> {
        match self.basis {
            OrthoBasis::Fourier => None,
            OrthoBasis::LegendreFourier => Some(self.coeffs.iter().enumerate().fold(
                Poly::zero(),
                |acc, (n, a)| {
                    let s = a * (2.0 / (2 * n + 1) as f64).sqrt();
                    acc.add(&legendre_coeffs(n, false).cast::<f64>().scale(&s))
                },
            )),
        }
    }
}

impl Approximant for OrthoApproximant {
    fn kind_name(&self) -> String {
        match self.basis {
            OrthoBasis::Fourier => "fourier".into(),
            OrthoBasis::LegendreFourier => "legendre_fourier".into(),
        }
    }

    fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self.basis {
            OrthoBasis::Fourier => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a * ortho_basis_eval(self.basis, n, x))
                .sum(),
            OrthoBasis::LegendreFourier => {
                let p = legendre_values(self.coeffs.len().saturating_sub(1), x);
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, a)| a * (2.0 / (2 * n + 1) as f64).sqrt() * p[n])
                    .sum()
            }
        })
    }
}

impl Measurable<f64> for OrthoApproximant {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<f64>> {
        if let (OrthoBasis::LegendreFourier, Some(p)) = (self.basis, self.to_poly()) {
            return measure_poly(&p, family, indices, &Quadrature::default());
        }
        measure_fn(&|x| self.eval(x), family, indices, &Quadrature::default())
    }
}

/// `c_n = (1/(n−1)!) ∫_{−1}^{1} (1−t)^{n−1} f(t) dt` for `n = 1..=N`.
pub fn higher_integral_chars<T: Scalar>(e: &Expr, order: usize, quad: &Quadrature) -> Result<CharNumbers<T>> {
    if order == 0 {
        return Err(Error::domain("higher_integral", "the family starts at n = 1"));
    }
    expr_char_numbers(e, &Family::HigherIntegral, 1..=order, quad)
}

/// Polynomial on `(−1, 1)` whose repeated integrals at `x = 1` equal
/// `c_1..c_N`, built as a shifted-Legendre moment match of
/// `h(w) = f(1 − 2w)` on `(0, 1)`.
pub fn higher_integral_approx<T: Scalar>(c: &CharNumbers<T>) -> Result<PolyApproximant<T>> {
    if *c.family() != Family::HigherIntegral {
        return Err(mismatch("higher_integral", c.family()));
    }
    if c.start() != 1 {
        return Err(Error::InvalidParameter("higher-integral data must start at c_1".into()));
    }
    let cv = c.values();
    // m_k = k! c_{k+1} / 2^{k+1}
    let m: Vec<T> = cv
        .iter()
        .enumerate()
        .map(|(k, ck)| {
            ck.clone() * T::from_rational(&factorial(k)) / T::from_i64(2).powu(k as u32 + 1)
        })
        .collect();
    let h = (0..m.len()).fold(Poly::zero(), |acc, n| {
        // γ̃_j^n = (−1)^{n+j} C(n,j) C(n+j,j)
        let gamma: Vec<Rational> = (0..=n)
            .map(|j| {
                let sign = if (n + j) % 2 == 0 { int(1) } else { int(-1) };
                sign * binomial(n as i64, j as i64) * binomial((n + j) as i64, j as i64)
            })
            .collect();
        let beta = (0..=n).fold(T::zero(), |s, j| s + T::from_rational(&gamma[j]) * m[j].clone())
            * T::from_i64(2 * n as i64 + 1);
        acc.add(&Poly::new(gamma).cast::<T>().scale(&beta))
    });
    let half = T::one() / T::from_i64(2);
    Ok(PolyApproximant::new("higher_integral", h.compose_affine(&-half.clone(), &half)))
}

/// `c_0 = f(anchor)` (or `∫_a^b f` without an anchor) and
/// `c_n = f^{(n−1)}(b) − f^{(n−1)}(a)` for `n = 1..=N`.
pub fn bernoulli_chars<T: Scalar>(
    e: &Expr,
    a: f64,
    b: f64,
    order: usize,
    anchor: Option<f64>,
) -> Result<CharNumbers<T>> {
    expr_char_numbers(
        e,
        &Family::EndpointDifference { a, b, anchor },
        0..=order,
        &Quadrature::default(),
    )
}

/// `Σ_{n≥1} c_n Δ_n^{(a,b)}` plus the constant fixed by `c_0`, with
/// `Δ_n^{(a,b)}(x) = (b−a)^{n−1} B_n((x−a)/(b−a))/n!`.
pub fn bernoulli_approx<T: Scalar>(c: &CharNumbers<T>) -> Result<PolyApproximant<T>> {
    let (a, b, anchor) = match c.family() {
        Family::EndpointDifference { a, b, anchor } => (*a, *b, *anchor),
        other => return Err(mismatch("bernoulli", other)),
    };
    check_interval(a, b)?;
    if c.start() != 0 {
        return Err(Error::InvalidParameter("endpoint data must start at c_0".into()));
    }
    let (at, bt) = (scalar_at::<T>(a)?, scalar_at::<T>(b)?);
    let len = bt - at.clone();
    let inv = T::one() / len.clone();
    let cv = c.values();
    let mut poly = Poly::zero();
    for (n, cn) in cv.iter().enumerate().skip(1) {
        if cn.is_zero() {
            continue;
        }
        let delta = bernoulli_poly(n)
            .cast::<T>()
            .compose_affine(&inv, &(-at.clone() * inv.clone()))
            .scale(&(len.powu(n as u32 - 1) / T::from_rational(&factorial(n))));
        poly = poly.add(&delta.scale(cn));
    }
    let shift = match anchor {
        Some(x0) => cv[0].clone() - poly.eval(&scalar_at(x0)?),
        None => cv[0].clone() * inv,
    };
    Ok(PolyApproximant::new("bernoulli", poly.add(&Poly::constant(shift))))
}

/// Coefficient error of the Bernoulli approximant on `(a, a+ε)` against the
/// Taylor polynomial at `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub eps: f64,
    pub max_coeff_error: f64,
}

/// For each `ε`, the largest difference between the coefficients of
/// `𝒜_{(a,a+ε),N}` re-expanded in powers of `x − a` and the Taylor
/// coefficients `f^{(k)}(a)/k!`. Endpoint data are taken in floating point;
/// the re-expansion itself is exact.
pub fn bernoulli_taylor_limit(e: &Expr, a: f64, eps: &[f64], order: usize) -> Result<Vec<LimitRow>> {
    let taylor: Vec<f64> = e
        .jet(&a, order)?
        .coeffs()
        .to_vec();
    eps.iter()
        .map(|&eps| {
            if eps == 0.0 || !eps.is_finite() {
                return Err(Error::domain("bernoulli_taylor_limit", "ε must be nonzero and finite"));
            }
            let b = a + eps;
            let c = bernoulli_chars::<f64>(e, a, b, order, Some(a))?;
            let exact: Vec<Rational> = c
                .values()
                .iter()
                .map(|v| v.to_rational().ok_or_else(|| Error::eval("bernoulli", "non-finite data")))
                .collect::<Result<_>>()?;
            let cr = CharNumbers::new(exact, c.family().clone());
            let p = bernoulli_approx(&cr)?;
            let at = scalar_at::<Rational>(a)?;
            let shifted = p.poly().compose_affine(&int(1), &at);
            let err = taylor
                .iter()
                .enumerate()
                .map(|(k, t)| (shifted.coeff(k).to_f64() - t).abs())
                .fold(0.0, f64::max);
            Ok(LimitRow {
                eps,
                max_coeff_error: err,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::verify_matching;
    use crate::jets::parse_expr;
    use crate::scalar::ratio;
    use crate::specfun::binomial_rational;

    fn ex(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn moment_examples() {
        let q = Quadrature::default();
        let m = moments_compute::<Rational>(&ex("x^2"), (-1.0, 1.0), 2, &q).unwrap();
        assert_eq!(m.values, vec![ratio(2, 3), int(0), ratio(2, 5)]);
        assert_eq!(m.source, MomentSource::Exact);
        let m = moments_compute::<f64>(&ex("1"), (0.5, 2.0), 1, &q).unwrap();
        assert_eq!(m.values, vec![1.5, (4.0 - 0.25) / 2.0]);
        let m = moments_compute::<f64>(&ex("sin(x)"), (-1.0, 1.0), 6, &q).unwrap();
        assert_eq!(m.source, MomentSource::Quadrature);
        for n in (0..=6).step_by(2) {
            assert!(m.values[n].abs() < 1e-12);
        }
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["source"], "quadrature");
        assert_eq!(json["interval"][0], -1.0);
    }

    #[test]
    fn gamma_closed_form() {
        for n in 0..12usize {
            let p = legendre_coeffs(n, false);
            for j in 0..=n {
                let top = Rational::new((n as i64 + j as i64 - 1).into(), 2.into());
                let g = int(2).pow(n as i32) * binomial(n as i64, j as i64) * binomial_rational(&top, n);
                assert_eq!(p.coeff(j), g, "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn legendre_match_examples() {
        let q = Quadrature::default();
        let m = moments_compute::<Rational>(&ex("x^2"), (-1.0, 1.0), 2, &q).unwrap();
        assert_eq!(legendre_betas(&m.values), vec![ratio(1, 3), int(0), ratio(2, 3)]);
        let a = legendre_moment_match(&m.chars()).unwrap();
        assert_eq!(a.poly(), &Poly::new(vec![int(0), int(0), int(1)]));
        let p3 = ex("(5*x^3 - 3*x)/2");
        let m = moments_compute::<Rational>(&p3, (-1.0, 1.0), 5, &q).unwrap();
        let b = legendre_betas(&m.values);
        assert_eq!(b, (0..=5).map(|n| int((n == 3) as i64)).collect::<Vec<_>>());
        let m = moments_compute::<Rational>(&ex("0"), (-1.0, 1.0), 3, &q).unwrap();
        assert!(legendre_moment_match(&m.chars()).unwrap().poly().is_zero());
    }

    #[test]
    fn legendre_match_on_other_intervals() {
        let q = Quadrature::default();
        let m = moments_compute::<Rational>(&ex("3*x^3 - x + 2"), (0.0, 2.0), 4, &q).unwrap();
        let a = legendre_moment_match(&m.chars()).unwrap();
        assert_eq!(a.poly(), &ex("3*x^3 - x + 2").as_poly().unwrap());
        let m = moments_compute::<f64>(&ex("exp(x)"), (0.5, 1.5), 6, &q).unwrap();
        let a = legendre_moment_match(&m.chars()).unwrap();
        let r = verify_matching(&a, &m.chars(), 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn partial_delta_examples() {
        assert_eq!(moment_partial_delta(0, 0).unwrap(), Poly::constant(ratio(1, 2)));
        assert_eq!(moment_partial_delta(1, 1).unwrap(), Poly::new(vec![int(0), ratio(3, 2)]));
        let d = moment_partial_delta(2, 6).unwrap();
        let fam = Family::Moment { a: -1.0, b: 1.0 };
        let got = measure_poly(&d, &fam, 0..=6, &Quadrature::default()).unwrap();
        assert_eq!(got, (0..=6).map(|n| int((n == 2) as i64)).collect::<Vec<_>>());
        assert!(moment_partial_delta(3, 2).is_err());
    }

    #[test]
    fn delta_growth_table() {
        let g = moment_delta_growth(0, &[4, 8, 16, 32]).unwrap();
        assert!(g.windows(2).all(|w| w[1].1 > w[0].1), "{g:?}");
        assert!(moment_delta_growth(0, &[8, 4]).is_err());
    }

    #[test]
    fn fourier_examples() {
        let q = Quadrature::default();
        let f = fourier_coeffs(&ex("sin(x)"), 4, &q).unwrap();
        assert!((f.raw[1] - std::f64::consts::PI).abs() < 1e-12);
        assert!((f.dual[1] - 1.0).abs() < 1e-13);
        for n in [0, 2, 3, 4] {
            assert!(f.dual[n].abs() < 1e-13);
        }
        let l = legendre_fourier_coeffs(&ex("1"), 4, &q).unwrap();
        assert!(l.dual[1..].iter().all(|v| v.abs() < 1e-13) && l.dual[0] != 0.0);
        let l = legendre_fourier_coeffs(&ex("(3*x^2 - 1)/2"), 5, &q).unwrap();
        for n in 0..=5 {
            assert_eq!(l.dual[n].abs() > 1e-10, n == 2);
        }
        let a = l.approximant();
        assert!((a.eval(0.3).unwrap() - (3.0 * 0.09 - 1.0) / 2.0).abs() < 1e-12);
        let r = verify_matching(&a, &l.chars(), 1e-9).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn legendre_fourier_matches_moment_matching() {
        let q = Quadrature::default();
        for f in ["exp(x)", "cos(3*x)", "atan(x)"] {
            let lf = legendre_fourier_coeffs(&ex(f), 7, &q).unwrap().approximant();
            let m = moments_compute::<f64>(&ex(f), (-1.0, 1.0), 7, &q).unwrap();
            let mm = legendre_moment_match(&m.chars()).unwrap();
            for i in 0..=20 {
                let x = -1.0 + 0.1 * i as f64;
                assert!((lf.eval(x).unwrap() - mm.eval(x).unwrap()).abs() < 1e-8, "{f} at {x}");
            }
        }
    }

    #[test]
    fn higher_integral_examples() {
        let q = Quadrature::default();
        let c = higher_integral_chars::<Rational>(&ex("1"), 5, &q).unwrap();
        for (i, v) in c.values().iter().enumerate() {
            let n = i + 1;
            assert_eq!(*v, int(2).pow(n as i32) / factorial(n));
        }
        let c = higher_integral_chars::<Rational>(&ex("1"), 2, &q).unwrap();
        assert_eq!(higher_integral_approx(&c).unwrap().poly(), &Poly::constant(int(1)));
        let c = higher_integral_chars::<Rational>(&ex("x"), 2, &q).unwrap();
        assert_eq!(higher_integral_approx(&c).unwrap().poly(), &Poly::x());
        assert!(higher_integral_chars::<f64>(&ex("x"), 0, &q).is_err());
        let c = higher_integral_chars::<f64>(&ex("exp(x)"), 8, &q).unwrap();
        let a = higher_integral_approx(&c).unwrap();
        let r = verify_matching(&a, &c, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((a.eval(0.2).unwrap() - 0.2f64.exp()).abs() < 1e-5);
    }

    #[test]
    fn bernoulli_examples() {
        let c = bernoulli_chars::<Rational>(&ex("x^2"), 0.0, 1.0, 4, Some(0.0)).unwrap();
        assert_eq!(c.values()[1..], [int(1), int(2), int(0), int(0)]);
        assert_eq!(bernoulli_approx(&c).unwrap().poly(), &ex("x^2").as_poly().unwrap());
        let c = bernoulli_chars::<Rational>(&ex("7"), 0.0, 1.0, 4, None).unwrap();
        assert_eq!(bernoulli_approx(&c).unwrap().poly(), &Poly::constant(int(7)));
        let c = bernoulli_chars::<f64>(&ex("cos(2*pi*x - pi)"), 0.0, 1.0, 6, Some(0.5)).unwrap();
        let tau = 2.0 * std::f64::consts::PI;
        for (n, v) in c.values().iter().enumerate().skip(1) {
            assert!(v.abs() < 1e-13 * tau.powi(n as i32), "c_{n} = {v}");
        }
        let a = bernoulli_approx(&c).unwrap();
        assert!((a.eval(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((a.eval(0.5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_delta_property() {
        let fam = Family::EndpointDifference { a: 0.0, b: 1.0, anchor: None };
        for m in 0..=10 {
            let d = bernoulli_poly(m).scale(&(int(1) / factorial(m)));
            let got = measure_poly(&d, &fam, 0..=10, &Quadrature::default()).unwrap();
            assert_eq!(got, (0..=10).map(|n| int((n == m) as i64)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn bernoulli_limit_is_taylor() {
        let eps: Vec<f64> = (0..=10).map(|k| 0.1 / 2f64.powi(k)).collect();
        let rows = bernoulli_taylor_limit(&ex("exp(x)"), 0.0, &eps, 5).unwrap();
        for w in rows.windows(2) {
            let ratio = w[1].max_coeff_error / w[0].max_coeff_error;
            assert!((0.3..=0.7).contains(&ratio), "{rows:?}");
        }
        let rows = bernoulli_taylor_limit(&ex("x^3 - 2*x"), 0.5, &eps, 5).unwrap();
        assert!(rows.iter().all(|r| r.max_coeff_error < 1e-9), "{rows:?}");
        assert!(bernoulli_taylor_limit(&ex("x"), 0.0, &[0.0], 3).is_err());
    }
}
