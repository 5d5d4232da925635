//! Value matching: polynomial and ρ-generalized interpolation, and the
//! generalized Whittaker–Shannon family.

mod whittaker;

use std::ops::RangeInclusive;

pub use whittaker::{
    gibbs_report, ws_build, ws_integral_match, ws_node_systems, GibbsReport, NodeSystem, WsApproximant,
    WsIntegralApproximant, WS_PRESETS,
};

use crate::error::{Error, Result};
use crate::framework::{mismatch, Approximant, CharNumbers, Family, Measurable};
use crate::integral_match::{measure_fn, measure_poly, Quadrature};
use crate::jets::Expr;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// `c_n = f(x_n)` at the given nodes.
pub fn value_chars<T: Scalar>(e: &Expr, nodes: &[f64]) -> Result<CharNumbers<T>> {
    crate::integral_match::expr_char_numbers(
        e,
        &Family::NodeValues { nodes: nodes.to_vec() },
        0..=nodes.len().saturating_sub(1),
        &Quadrature::default(),
    )
}

fn node_data<T: Scalar>(c: &CharNumbers<T>) -> Result<(Vec<f64>, &[T])> {
    let nodes = match c.family() {
        Family::NodeValues { nodes } => nodes,
        other => return Err(mismatch("interpolation", other)),
    };
    if c.start() != 0 || nodes.len() != c.values().len() {
        return Err(Error::InvalidParameter("one value per node is required".into()));
    }
    if nodes.is_empty() {
        return Err(Error::InvalidParameter("at least one node is required".into()));
    }
    check_distinct(nodes)?;
    Ok((nodes.clone(), c.values()))
}

pub(crate) fn check_distinct(nodes: &[f64]) -> Result<()> {
    let mut sorted = nodes.to_vec();
    sorted.sort_by(f64::total_cmp);
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateNode(w[0]));
        }
    }
    if let Some(bad) = nodes.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("node {bad} is not finite")));
    }
    Ok(())
}

/// Interpolating polynomial in the Lagrange form `Σ c_n ∏_{k≠n} (x−x_k)/(x_n−x_k)`.
pub fn lagrange_poly<T: Scalar>(c: &CharNumbers<T>) -> Result<Poly<T>> {
    let (nodes, values) = node_data(c)?;
    let xs: Vec<T> = nodes.iter().map(|x| T::from_f64(*x).expect("finite node")).collect();
    let mut out = Poly::zero();
    for (n, cn) in values.iter().enumerate() {
        let mut basis = Poly::constant(T::one());
        for (k, xk) in xs.iter().enumerate() {
            if k != n {
                let factor = Poly::new(vec![-xk.clone(), T::one()]);
                basis = basis.mul(&factor).scale(&(T::one() / (xs[n].clone() - xk.clone())));
            }
        }
        out = out.add(&basis.scale(cn));
    }
    Ok(out)
}

/// Lagrange interpolant, evaluated in barycentric form.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeApproximant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

pub fn lagrange_interp<T: Scalar>(c: &CharNumbers<T>) -> Result<LagrangeApproximant> {
    let (nodes, values) = node_data(c)?;
    let weights = nodes
        .iter()
        .enumerate()
        .map(|(n, xn)| {
            1.0 / nodes
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != n)
                .map(|(_, xk)| xn - xk)
                .product::<f64>()
        })
        .collect();
    Ok(LagrangeApproximant {
        values: values.iter().map(Scalar::to_f64).collect(),
        nodes,
        weights,
    })
}

impl Approximant for LagrangeApproximant {
    fn kind_name(&self) -> String {
        "lagrange".into()
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((xn, cn), wn) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            if x == *xn {
                return Ok(*cn);
            }
            let t = wn / (x - xn);
            num += t * cn;
            den += t;
        }
        Ok(num / den)
    }
}

impl Measurable<f64> for LagrangeApproximant {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<f64>> {
        measure_fn(&|x| self.eval(x), family, indices, &Quadrature::default())
    }
}

/// Newton form `Σ a_n ∏_{i<n} (x − x_i)` with divided-difference
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonApproximant<T> {
    nodes: Vec<f64>,
    coeffs: Vec<T>,
}

pub fn newton_interp<T: Scalar>(c: &CharNumbers<T>) -> Result<NewtonApproximant<T>> {
    let (nodes, values) = node_data(c)?;
    let xs: Vec<T> = nodes.iter().map(|x| T::from_f64(*x).expect("finite node")).collect();
    let mut table = values.to_vec();
    let mut coeffs = vec![table[0].clone()];
    for level in 1..xs.len() {
        for i in (level..xs.len()).rev() {
            table[i] = (table[i].clone() - table[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
        }
        coeffs.push(table[level].clone());
    }
    Ok(NewtonApproximant { nodes, coeffs })
}

impl<T: Scalar> NewtonApproximant<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> Poly<T> {
        let xs: Vec<T> = self.nodes.iter().map(|x| T::from_f64(*x).expect("finite node")).collect();
        self.coeffs.iter().enumerate().rev().fold(Poly::zero(), |acc, (n, a)| {
            acc.mul(&Poly::new(vec![-xs[n].clone(), T::one()]))
                .add(&Poly::constant(a.clone()))
        })
    }
}

impl<T: Scalar> Approximant for NewtonApproximant<T> {
    fn kind_name(&self) -> String {
        "newton".into()
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let n = self.coeffs.len();
        Ok((0..n)
            .rev()
            .fold(0.0, |acc, i| acc * (x - self.nodes[i]) + self.coeffs[i].to_f64()))
    }
}

impl<T: Scalar> Measurable<T> for NewtonApproximant<T> {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<T>> {
        measure_poly(&self.to_poly(), family, indices, &Quadrature::default())
    }
}

/// `Σ c_n ∏_{k≠n} ρ(x−x_k)/ρ(x_n−x_k)` for a map with `ρ(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoApproximant {
    rho: Expr,
    nodes: Vec<f64>,
    values: Vec<f64>,
    denoms: Vec<f64>,
}

pub fn rho_interp<T: Scalar>(c: &CharNumbers<T>, rho: &Expr) -> Result<RhoApproximant> {
    let (nodes, values) = node_data(c)?;
    if rho.eval(0.0)? != 0.0 {
        return Err(Error::InvalidParameter("ρ must vanish at zero".into()));
    }
    let denoms = nodes
        .iter()
        .enumerate()
        .map(|(n, xn)| {
            nodes.iter().enumerate().filter(|(k, _)| *k != n).try_fold(1.0, |acc, (_, xk)| {
                let r = rho.eval(xn - xk)?;
                if r == 0.0 {
                    return Err(Error::domain("rho_interp", format!("ρ vanishes at the node difference {}", xn - xk)));
                }
                Ok(acc * r)
            })
        })
        .collect::<Result<_>>()?;
    Ok(RhoApproximant {
        rho: rho.clone(),
        values: values.iter().map(Scalar::to_f64).collect(),
        nodes,
        denoms,
    })
}

impl Approximant for RhoApproximant {
    fn kind_name(&self) -> String {
        format!("rho({})", self.rho)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        if let Some(n) = self.nodes.iter().position(|xn| *xn == x) {
            return Ok(self.values[n]);
        }
        let r: Vec<f64> = self.nodes.iter().map(|xk| self.rho.eval(x - xk)).collect::<Result<_>>()?;
        Ok((0..self.nodes.len())
            .map(|n| {
                let prod: f64 = r.iter().enumerate().filter(|(k, _)| *k != n).map(|(_, v)| v).product();
                self.values[n] * prod / self.denoms[n]
            })
            .sum())
    }
}

impl Measurable<f64> for RhoApproximant {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<f64>> {
        measure_fn(&|x| self.eval(x), family, indices, &Quadrature::default())
    }
}
