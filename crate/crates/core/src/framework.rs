//! Characteristic numbers, triangular systems and the matching verifier.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::scalar::Scalar;

/// Transform applied before differentiating in the nonlinear family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lambda {
    Identity,
    Ln,
    Sqrt,
    Cube,
}

impl Lambda {
    pub fn name(self) -> &'static str {
        match self {
            Lambda::Identity => "identity",
            Lambda::Ln => "ln",
            Lambda::Sqrt => "sqrt",
            Lambda::Cube => "cube",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "identity" | "id" => Ok(Lambda::Identity),
            "ln" | "log" => Ok(Lambda::Ln),
            "sqrt" => Ok(Lambda::Sqrt),
            "cube" => Ok(Lambda::Cube),
            _ => Err(Error::InvalidParameter(format!("unknown transform '{s}'"))),
        }
    }

    /// `Λ` applied to a jet.
    pub fn apply_jet<T: Scalar>(self, j: &Jet<T>) -> Result<Jet<T>> {
        match self {
            Lambda::Identity => Ok(j.clone()),
            Lambda::Ln => j.ln(),
            Lambda::Sqrt => j.sqrt(),
            Lambda::Cube => j.powi(3),
        }
    }

    /// `Ω = Λ⁻¹` applied to a jet.
    pub fn inverse_jet<T: Scalar>(self, j: &Jet<T>) -> Result<Jet<T>> {
        match self {
            Lambda::Identity => Ok(j.clone()),
            Lambda::Ln => j.exp(),
            Lambda::Sqrt => {
                if j.value().to_f64() < 0.0 {
                    return Err(Error::eval("square", "series value is outside the range of sqrt"));
                }
                j.powi(2)
            }
            Lambda::Cube => j.cbrt(),
        }
    }

    pub fn apply(self, v: f64) -> Result<f64> {
        match self {
            Lambda::Identity => Ok(v),
            Lambda::Ln if v > 0.0 => Ok(v.ln()),
            Lambda::Ln => Err(Error::eval("ln", format!("argument {v} is not positive"))),
            Lambda::Sqrt if v >= 0.0 => Ok(v.sqrt()),
            Lambda::Sqrt => Err(Error::eval("sqrt", format!("argument {v} is negative"))),
            Lambda::Cube => Ok(v * v * v),
        }
    }

    pub fn inverse(self, v: f64) -> Result<f64> {
        match self {
            Lambda::Identity => Ok(v),
            Lambda::Ln => Ok(v.exp()),
            Lambda::Sqrt if v >= 0.0 => Ok(v * v),
            Lambda::Sqrt => Err(Error::eval(
                "square",
                format!("series value {v} is outside the range of sqrt"),
            )),
            Lambda::Cube => Ok(v.cbrt()),
        }
    }
}

/// Orthogonal systems whose functionals are normalized to the delta property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthoBasis {
    /// `1/√2, sin((n+1)x/2), cos(nx/2), …` on `(−π, π)`.
    Fourier,
    /// `√(2/(2n+1))·P_n` on `(−1, 1)`.
    LegendreFourier,
}

/// Family of functionals that produced a set of characteristic numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `c_n = f^{(n)}(x₀)`.
    Derivative { x0: f64 },
    /// `c_n = ∫_a^b x^n f(x) dx`.
    Moment { a: f64, b: f64 },
    /// `c_n = (1/(n−1)!) ∫_{−1}^{1} (1−t)^{n−1} f(t) dt`, `n ≥ 1`.
    HigherIntegral,
    /// `c_n = f^{(n−1)}(b) − f^{(n−1)}(a)` for `n ≥ 1`; `c_0 = f(anchor)`, or
    /// `∫_a^b f` without an anchor.
    EndpointDifference { a: f64, b: f64, anchor: Option<f64> },
    /// `c_n = f(x_n)`.
    NodeValues { nodes: Vec<f64> },
    /// `c_n = ∫_a^{x_n} f`.
    PrimitiveAtNodes { a: f64, nodes: Vec<f64> },
    /// `c_n = d^n Λ(f)/dx^n` at `x₀`.
    Nonlinear { lambda: Lambda, x0: f64 },
    /// `c_n = ∫ v_n f / ∫ v_n²` for an orthogonal system.
    Orthogonal { basis: OrthoBasis },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Derivative { .. } => "derivative",
            Family::Moment { .. } => "moment",
            Family::HigherIntegral => "higher_integral",
            Family::EndpointDifference { .. } => "endpoint_derivative_difference",
            Family::NodeValues { .. } => "value_at_nodes",
            Family::PrimitiveAtNodes { .. } => "primitive_at_nodes",
            Family::Nonlinear { .. } => "nonlinear",
            Family::Orthogonal { .. } => "orthogonal",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Derivative { x0 } => write!(f, "derivative@{x0}"),
            Family::Moment { a, b } => write!(f, "moment({a},{b})"),
            Family::EndpointDifference { a, b, .. } => {
                write!(f, "endpoint_derivative_difference({a},{b})")
            }
            Family::Nonlinear { lambda, x0 } => write!(f, "nonlinear({})@{x0}", lambda.name()),
            other => write!(f, "{}", other.name()),
        }
    }
}

/// Characteristic numbers `c_start..c_N` tagged with their family.
#[derive(Debug, Clone, PartialEq)]
pub struct CharNumbers<T> {
    values: Vec<T>,
    family: Family,
    start: usize,
}

impl<T: Scalar> CharNumbers<T> {
    pub fn new(values: Vec<T>, family: Family) -> Self {
        CharNumbers {
            values,
            family,
            start: 0,
        }
    }

    /// Numbers whose first entry is `c_start`.
    pub fn with_start(values: Vec<T>, family: Family, start: usize) -> Self {
        CharNumbers {
            values,
            family,
            start,
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Highest index `N`.
    pub fn order(&self) -> usize {
        self.start + self.values.len() - 1
    }

    pub fn indices(&self) -> RangeInclusive<usize> {
        self.start..=self.order()
    }

    /// `c_n`, if within range.
    pub fn get(&self, n: usize) -> Option<&T> {
        n.checked_sub(self.start).and_then(|i| self.values.get(i))
    }

    /// The same numbers truncated to `c_start..c_order`.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).saturating_sub(self.start).min(self.values.len());
        CharNumbers {
            values: self.values[..keep].to_vec(),
            family: self.family.clone(),
            start: self.start,
        }
    }

    pub fn to_f64(&self) -> CharNumbers<f64> {
        CharNumbers {
            values: self.values.iter().map(Scalar::to_f64).collect(),
            family: self.family.clone(),
            start: self.start,
        }
    }

    pub fn map_values(&self, f: impl Fn(usize, &T) -> T) -> Self {
        CharNumbers {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| f(i + self.start, v))
                .collect(),
            family: self.family.clone(),
            start: self.start,
        }
    }
}

/// Expansion coefficients `a_0..a_N` with the name of the expansion kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffSeq<T> {
    pub values: Vec<T>,
    pub kind: String,
}

/// Lower-triangular matrix `T[n][m]`, `m ≤ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMatrix<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> TriMatrix<T> {
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> T) -> Self {
        TriMatrix {
            rows: (0..=order).map(|n| (0..=n).map(|m| f(n, m)).collect()).collect(),
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |n, m| if n == m { T::one() } else { T::zero() })
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// `T[n][m]`, zero above the diagonal.
    pub fn get(&self, n: usize, m: usize) -> T {
        if m > n {
            T::zero()
        } else {
            self.rows[n][m].clone()
        }
    }

    pub fn set(&mut self, n: usize, m: usize, v: T) {
        assert!(m <= n, "entry above the diagonal");
        self.rows[n][m] = v;
    }

    pub fn mul_vec(&self, t: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(t)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |i, j| {
            (j..=i).fold(T::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        })
    }
}

/// Solves `Σ_{m≤n} T[n][m] t_m = c_n` by forward substitution.
pub fn tri_forward_solve<T: Scalar>(t: &TriMatrix<T>, c: &[T]) -> Result<Vec<T>> {
    if c.len() != t.order() + 1 {
        return Err(Error::InvalidParameter(format!(
            "system of order {} with {} right-hand values",
            t.order(),
            c.len()
        )));
    }
    let mut x: Vec<T> = Vec::with_capacity(c.len());
    for (n, cn) in c.iter().enumerate() {
        let d = t.get(n, n);
        if d.is_zero() {
            return Err(Error::DependentSystem(n));
        }
        let s = (0..n).fold(cn.clone(), |acc, m| acc - t.get(n, m) * x[m].clone());
        x.push(s / d);
    }
    Ok(x)
}

/// A function built from coefficients that can be evaluated pointwise.
pub trait Approximant {
    fn kind_name(&self) -> String;
    fn eval(&self, x: f64) -> Result<f64>;

    fn eval_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

/// An approximant that can be fed to the functionals of a family.
pub trait Measurable<T: Scalar>: Approximant {
    /// `𝒞_n(self)` for each `n` in `indices`.
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<T>>;
}

pub(crate) fn mismatch(kind: impl Into<String>, family: &Family) -> Error {
    Error::FamilyMismatch {
        kind: kind.into(),
        family: family.to_string(),
    }
}

/// Relative tolerance used when no other is given.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Absolute floor under the relative tolerance.
pub const ABS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: String,
    pub order: usize,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Measures `a` under the family of `c` and compares with `c`.
///
/// Entry `n` passes when `|𝒞_n(a) − c_n| ≤ max(tol·|c_n|, 1e−12)`.
pub fn verify_matching<T, A>(a: &A, c: &CharNumbers<T>, tol: f64) -> Result<VerificationReport>
where
    T: Scalar,
    A: Measurable<T> + ?Sized,
{
    let measured = a.measure(c.family(), c.indices())?;
    let mut pass = true;
    let residuals: Vec<f64> = measured
        .iter()
        .zip(c.values())
        .map(|(m, cn)| {
            let r = (m.clone() - cn.clone()).magnitude();
            if r.is_nan() || r > (tol * cn.magnitude()).max(ABS_FLOOR) {
                pass = false;
            }
            r
        })
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(VerificationReport {
        kind: a.kind_name(),
        order: c.order(),
        residuals,
        max_residual,
        pass,
    })
}

/// `M[n][m] = 𝒞_n(Δ_m)` for a candidate basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMatrix<T> {
    pub entries: Vec<Vec<T>>,
}

impl<T: Scalar> DeltaMatrix<T> {
    /// Delta basis: the matrix is the identity.
    pub fn is_identity(&self, tol: f64) -> bool {
        self.entries.iter().enumerate().all(|(n, row)| {
            row.iter().enumerate().all(|(m, v)| {
                let want = if n == m { 1.0 } else { 0.0 };
                (v.to_f64() - want).abs() <= tol && (tol > 0.0 || !T::EXACT || *v == T::from_f64(want).unwrap())
            })
        })
    }

    /// Triangular basis: `𝒞_n(∇_m) = 0` for `n < m` and nonzero diagonal.
    pub fn is_triangular(&self, tol: f64) -> bool {
        self.entries.iter().enumerate().all(|(n, row)| {
            row.iter().enumerate().all(|(m, v)| match m.cmp(&n) {
                std::cmp::Ordering::Greater => v.magnitude() <= tol && (tol > 0.0 || v.is_zero()),
                std::cmp::Ordering::Equal => !v.is_zero() && v.magnitude() > tol,
                std::cmp::Ordering::Less => true,
            })
        })
    }
}

pub fn delta_check<T, A>(basis: &[A], family: &Family, indices: RangeInclusive<usize>) -> Result<DeltaMatrix<T>>
where
    T: Scalar,
    A: Measurable<T>,
{
    let columns: Vec<Vec<T>> = basis
        .iter()
        .map(|b| b.measure(family, indices.clone()))
        .collect::<Result<_>>()?;
    let rows = indices.clone().count();
    let entries = (0..rows)
        .map(|n| columns.iter().map(|col| col[n].clone()).collect())
        .collect();
    Ok(DeltaMatrix { entries })
}
