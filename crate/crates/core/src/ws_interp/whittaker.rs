//! Generalized Whittaker–Shannon interpolation
//! `𝒜(x) = Σ a_n λ(x)/(s_n (x − x_n))` with `λ(x) = 𝒩(x) sin(π s(x))`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::framework::{mismatch, Approximant, CharNumbers, Family, Measurable};
use crate::integral_match::{measure_fn, Quadrature};
use crate::jets::{parse_expr, Expr};
use crate::specfun::lambert_w0;

use super::check_distinct;

/// Names of the built-in node systems.
pub const WS_PRESETS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Relative radius below which a term switches to its limit expansion.
const SWITCH: f64 = 1e-6;
/// Switch radius of the differentiated blocks in units of the local length scale.
const SWITCH_DERIV: f64 = 1e-3;
/// Jet order of the expansion near a node.
const LOCAL_ORDER: usize = 6;

/// Scaling `s`, normalizer `𝒩`, nodes `x_n = s⁻¹(n)` and slopes
/// `s_n = λ'(x_n)` for the retained indices.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSystem {
    pub name: String,
    pub scaling: Expr,
    pub normalizer: Expr,
    pub indices: Vec<i64>,
    pub nodes: Vec<f64>,
    /// `λ'(x_n)` from jets.
    pub slopes: Vec<f64>,
    /// Closed-form slopes where known.
    pub closed_form_slopes: Option<Vec<f64>>,
    lambda: Expr,
    // λ_{k+1}/λ_1 for k = 1..3 (Taylor coefficients at x_n)
    local: Vec<[f64; 3]>,
}

impl NodeSystem {
    /// System from `s`, `𝒩` and explicit nodes; slopes come from jets of `λ`.
    pub fn new(
        name: impl Into<String>,
        scaling: Expr,
        normalizer: Expr,
        indices: Vec<i64>,
        nodes: Vec<f64>,
    ) -> Result<Self> {
        if indices.len() != nodes.len() || nodes.is_empty() {
            return Err(Error::InvalidParameter("one node per index is required".into()));
        }
        check_distinct(&nodes)?;
        let lambda = normalizer.clone() * (Expr::Pi * scaling.clone()).sin();
        let mut slopes = Vec::with_capacity(nodes.len());
        let mut local = Vec::with_capacity(nodes.len());
        for (&n, &x) in indices.iter().zip(&nodes) {
            let j = lambda.jet(&x, 4)?;
            let c = j.coeffs();
            if c[1] == 0.0 || !c[1].is_finite() {
                return Err(Error::domain("ws_node_system", format!("slope vanishes at node index {n}")));
            }
            slopes.push(c[1]);
            local.push([c[2] / c[1], c[3] / c[1], c[4] / c[1]]);
        }
        Ok(NodeSystem {
            name: name.into(),
            scaling,
            normalizer,
            indices,
            nodes,
            slopes,
            closed_form_slopes: None,
            lambda,
            local,
        })
    }

    /// Preset `a`–`f` (optionally prefixed `ws-`) with index window `[−N, N]`.
    pub fn preset(name: &str, order: usize) -> Result<Self> {
        let key = name.strip_prefix("ws-").unwrap_or(name);
        let n = order as i64;
        let window = |keep: &dyn Fn(i64) -> bool| (-n..=n).filter(|k| keep(*k)).collect::<Vec<i64>>();
        let ex = |s: &str| parse_expr(s).expect("preset expression");
        let (scaling, normalizer, indices, node, slope): (Expr, Expr, Vec<i64>, fn(f64) -> f64, Option<fn(f64) -> f64>) =
            match key {
                "a" => (
                    ex("x^3"),
                    ex("1"),
                    window(&|k| k != 0),
                    |k| k.cbrt(),
                    Some(|k| 3.0 * PI * (k * k).cbrt() * sign_alt(k)),
                ),
                "b" => (
                    ex("tan(x)"),
                    ex("1"),
                    window(&|_| true),
                    |k| k.atan(),
                    Some(|k| PI * (k * k + 1.0) * sign_alt(k)),
                ),
                "c" => (
                    ex("exp(x)"),
                    ex("1"),
                    window(&|k| k > 0),
                    |k| k.ln(),
                    Some(|k| PI * k * sign_alt(k)),
                ),
                "d" => (
                    ex("1/x"),
                    ex("x^2"),
                    window(&|k| k != 0),
                    |k| 1.0 / k,
                    Some(|k| -PI * sign_alt(k)),
                ),
                "e" => (
                    ex("x/(1 - x^2)"),
                    ex("1 - x^2"),
                    window(&|_| true),
                    |k| 2.0 * k / ((4.0 * k * k + 1.0).sqrt() + 1.0),
                    Some(|k| PI * sign_alt(k) * (4.0 * k * k + 1.0).sqrt()),
                ),
                "f" => (
                    ex("x*exp(x^2)"),
                    ex("1"),
                    window(&|_| true),
                    |k| k.signum() * (lambert_w0(2.0 * k * k).expect("nonnegative argument") / 2.0).sqrt(),
                    None,
                ),
                other => {
                    return Err(Error::InvalidParameter(format!("unknown node system '{other}'")));
                }
            };
        let nodes = indices.iter().map(|&k| node(k as f64)).collect();
        let mut sys = NodeSystem::new(format!("ws-{key}"), scaling, normalizer, indices.clone(), nodes)?;
        sys.closed_form_slopes = slope.map(|f| indices.iter().map(|&k| f(k as f64)).collect());
        Ok(sys)
    }

    /// Test function paired with a preset.
    pub fn preset_target(name: &str) -> Result<Expr> {
        let key = name.strip_prefix("ws-").unwrap_or(name);
        let s = match key {
            "a" => "1 - x^2",
            "b" => "exp(x)",
            "c" => "cos(x)",
            "d" => "ln(x^2 + 1)",
            "e" => "sqrt(1 - x^2)",
            "f" => "j0(x)",
            other => return Err(Error::InvalidParameter(format!("unknown node system '{other}'"))),
        };
        parse_expr(s)
    }

    /// `λ(x) = 𝒩(x) sin(π s(x))`.
    pub fn lambda(&self) -> &Expr {
        &self.lambda
    }

    pub fn value_chars(&self, f: &Expr) -> Result<CharNumbers<f64>> {
        super::value_chars(f, &self.nodes)
    }

    pub fn family(&self) -> Family {
        Family::NodeValues {
            nodes: self.nodes.clone(),
        }
    }
}

fn sign_alt(k: f64) -> f64 {
    if (k as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// All six presets with window `[−N, N]`.
pub fn ws_node_systems(order: usize) -> Result<Vec<NodeSystem>> {
    WS_PRESETS.iter().map(|p| NodeSystem::preset(p, order)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WsApproximant {
    system: NodeSystem,
    coeffs: Vec<f64>,
}

/// Interpolant with `a_n = c_n = f(x_n)`.
pub fn ws_build(system: &NodeSystem, c: &CharNumbers<f64>) -> Result<WsApproximant> {
    match c.family() {
        Family::NodeValues { nodes } if *nodes == system.nodes && c.start() == 0 => {}
        other => return Err(mismatch(system.name.clone(), other)),
    }
    Ok(WsApproximant {
        system: system.clone(),
        coeffs: c.values().to_vec(),
    })
}

impl WsApproximant {
    pub fn system(&self) -> &NodeSystem {
        &self.system
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `𝒜'(x_i) = a_i λ''(x_i)/(2 s_i) + Σ_{n≠i} a_n s_i/(s_n (x_i − x_n))`.
    pub fn derivative_at_node(&self, i: usize) -> f64 {
        let sys = &self.system;
        let (xi, si) = (sys.nodes[i], sys.slopes[i]);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if n == i {
                    a * sys.local[i][0]
                } else {
                    a * si / (sys.slopes[n] * (xi - sys.nodes[n]))
                }
            })
            .sum()
    }
}

impl Approximant for WsApproximant {
    fn kind_name(&self) -> String {
        self.system.name.clone()
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let sys = &self.system;
        let mut lam: Option<f64> = None;
        let mut sum = 0.0;
        if let Some(i) = sys.nodes.iter().position(|n| *n == x) {
            return Ok(self.coeffs[i]);
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            let h = x - sys.nodes[i];
            let term = if h.abs() < SWITCH * (1.0 + sys.nodes[i].abs()) {
                // λ(x)/(s_n h) = 1 + (λ''(x_n)/2s_n) h + ...
                let r = &sys.local[i];
                1.0 + h * (r[0] + h * (r[1] + h * r[2]))
            } else {
                let l = match lam {
                    Some(l) => l,
                    None => *lam.insert(sys.lambda.eval(x)?),
                };
                l / (sys.slopes[i] * h)
            };
            sum += a * term;
        }
        Ok(sum)
    }
}

impl Measurable<f64> for WsApproximant {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<f64>> {
        measure_fn(&|x| self.eval(x), family, indices, &Quadrature::default())
    }
}

/// Integral matching: the primitive is interpolated with blocks
/// `B_n(x) = λ(x)(x−a)/(s_n (x_n−a)(x−x_n))`, which vanish at `a`, and the
/// approximant of `f` is `Σ c_n B_n'(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WsIntegralApproximant {
    system: NodeSystem,
    a: f64,
    coeffs: Vec<f64>,
    // g_k/K_n: Taylor coefficients of g(x) = λ(x)(x−a) at x_n over K_n = s_n (x_n − a)
    local: Vec<Vec<f64>>,
    // switch radius per node
    radius: Vec<f64>,
}

pub fn ws_integral_match(system: &NodeSystem, c: &CharNumbers<f64>) -> Result<WsIntegralApproximant> {
    let a = match c.family() {
        Family::PrimitiveAtNodes { a, nodes } if *nodes == system.nodes && c.start() == 0 => *a,
        other => return Err(mismatch(format!("{}-integral", system.name), other)),
    };
    if let Some(x) = system.nodes.iter().find(|x| **x == a) {
        return Err(Error::domain("ws_integral_match", format!("anchor {a} coincides with node {x}")));
    }
    let g = system.lambda.clone() * (Expr::x() - Expr::float(a)?);
    let mut local = Vec::with_capacity(system.nodes.len());
    let mut radius = Vec::with_capacity(system.nodes.len());
    for (&xn, &sn) in system.nodes.iter().zip(&system.slopes) {
        let k = sn * (xn - a);
        let g: Vec<f64> = g.jet(&xn, LOCAL_ORDER)?.coeffs().iter().map(|v| v / k).collect();
        // inverse length scale from the growth of the Taylor coefficients
        let rho = (2..=LOCAL_ORDER)
            .map(|j| g[j].abs().powf(1.0 / (j - 1) as f64))
            .fold(1.0 / (1.0 + xn.abs()), f64::max);
        radius.push(SWITCH_DERIV / rho);
        local.push(g);
    }
    Ok(WsIntegralApproximant {
        system: system.clone(),
        a,
        coeffs: c.values().to_vec(),
        local,
        radius,
    })
}

impl WsIntegralApproximant {
    /// Interpolant of the primitive, `Σ c_n B_n(x)`.
    pub fn primitive(&self, x: f64) -> Result<f64> {
        let sys = &self.system;
        let l = sys.lambda.eval(x)? * (x - self.a);
        let mut sum = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let h = x - sys.nodes[i];
            let g = &self.local[i];
            let b = if h.abs() < self.radius[i] {
                g[1..].iter().rev().fold(0.0, |acc, v| acc * h + v)
            } else {
                l / (sys.slopes[i] * (sys.nodes[i] - self.a) * h)
            };
            sum += c * b;
        }
        Ok(sum)
    }

    pub fn anchor(&self) -> f64 {
        self.a
    }

    // (g(x), g'(x)) with g = λ·(x − a)
    fn g_and_derivative(&self, x: f64) -> Result<(f64, f64)> {
        let j = self.system.lambda.jet(&x, 1)?;
        let (l, dl) = (j.coeffs()[0], j.coeffs()[1]);
        Ok((l * (x - self.a), dl * (x - self.a) + l))
    }

    // B_n' = Σ_{k≥2} (k−1) g_k h^{k−2}/K_n
    fn block_derivative_local(&self, i: usize, h: f64) -> f64 {
        self.local[i][2..]
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (j, v)| acc * h + (j + 1) as f64 * v)
    }

    fn block_derivative_direct(&self, i: usize, h: f64, (g0, g1): (f64, f64)) -> f64 {
        let k = self.system.slopes[i] * (self.system.nodes[i] - self.a);
        (g1 * h - g0) / (k * h * h)
    }
}

impl Approximant for WsIntegralApproximant {
    fn kind_name(&self) -> String {
        format!("{}-integral", self.system.name)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let mut gv: Option<(f64, f64)> = None;
        let mut sum = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let h = x - self.system.nodes[i];
            let d = if h.abs() < self.radius[i] {
                self.block_derivative_local(i, h)
            } else {
                let g = match gv {
                    Some(v) => v,
                    None => *gv.insert(self.g_and_derivative(x)?),
                };
                self.block_derivative_direct(i, h, g)
            };
            sum += c * d;
        }
        Ok(sum)
    }
}

impl Measurable<f64> for WsIntegralApproximant {
    fn measure(&self, family: &Family, indices: RangeInclusive<usize>) -> Result<Vec<f64>> {
        match family {
            // exact through the primitive: ∫_a^{x_n} 𝒜 = 𝒜^{int}(x_n) − 𝒜^{int}(a)
            Family::PrimitiveAtNodes { a, nodes } if *a == self.a => indices
                .map(|n| {
                    let x = *nodes
                        .get(n)
                        .ok_or_else(|| Error::InvalidParameter(format!("no node with index {n}")))?;
                    Ok(self.primitive(x)? - self.primitive(self.a)?)
                })
                .collect(),
            _ => measure_fn(&|x| self.eval(x), family, indices, &Quadrature::default()),
        }
    }
}

/// Edge error of a preset at two orders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsReport {
    pub system: String,
    pub window: (f64, f64),
    pub orders: (usize, usize),
    pub max_error: (f64, f64),
    pub decreased: bool,
}

/// Largest `|𝒜_N − f|` on `lo ≤ |x| ≤ hi` for two orders.
pub fn gibbs_report(preset: &str, f: &Expr, small: usize, large: usize, (window, edge): (f64, f64)) -> Result<GibbsReport> {
    if !(0.0 <= window && window < edge) {
        return Err(Error::InvalidParameter("window needs 0 ≤ lo < hi".into()));
    }
    let lo = NodeSystem::preset(preset, small)?;
    let hi = NodeSystem::preset(preset, large)?;
    let err = |sys: &NodeSystem| -> Result<f64> {
        let a = ws_build(sys, &sys.value_chars(f)?)?;
        let mut worst = 0.0f64;
        for i in 0..=1000 {
            let r = window + (edge - window) * i as f64 / 1000.0;
            for x in [r, -r] {
                worst = worst.max((a.eval(x)? - f.eval(x)?).abs());
            }
        }
        Ok(worst)
    };
    let (e_lo, e_hi) = (err(&lo)?, err(&hi)?);
    Ok(GibbsReport {
        system: lo.name.clone(),
        window: (window, edge),
        orders: (small, large),
        max_error: (e_lo, e_hi),
        decreased: e_hi < e_lo,
    })
}
