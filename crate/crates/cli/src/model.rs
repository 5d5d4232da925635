//! Approximant construction for every kind the command line accepts.

use charmatch::expansions::{build, nonlinear_chars, ExpansionKind, SeriesApproximant};
use charmatch::framework::{verify_matching, Approximant, CharNumbers, Family, Lambda, Measurable, VerificationReport, DEFAULT_TOL};
use charmatch::integral_match::{
    bernoulli_approx, bernoulli_chars, expr_char_numbers, fourier_coeffs, higher_integral_approx,
    higher_integral_chars, legendre_fourier_coeffs, legendre_moment_match, moments_compute, Quadrature,
};
use charmatch::jets::{char_numbers_derivative, parse_expr, Expr};
use charmatch::ws_interp::{lagrange_interp, newton_interp, value_chars, ws_build, ws_integral_match, NodeSystem};
use charmatch::{Error, Rational, Scalar};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// Kinds built from something other than derivatives at a point.
pub const OTHER_KINDS: [&str; 9] = [
    "legendre_moment",
    "legendre_fourier",
    "fourier",
    "higher_integral",
    "bernoulli",
    "lagrange",
    "newton",
    "ws",
    "ws_integral",
];

#[derive(Debug, Clone, Serialize)]
pub struct CoeffTable {
    pub kind: String,
    pub family: String,
    pub exact: bool,
    pub start: usize,
    pub c: Vec<String>,
    pub a: Vec<String>,
    /// Extra per-index column (Padé denominator, power-basis coefficients, ...).
    pub extra: Option<(String, Vec<String>)>,
}

pub struct Model {
    pub approx: Box<dyn Approximant>,
    pub table: CoeffTable,
    pub report: VerificationReport,
}

/// Alternative family used by `verify --family`.
pub fn family_by_name(name: &str, cfg: &RunConfig) -> Result<Family, CliError> {
    let (a, b) = cfg.interval.unwrap_or((-1.0, 1.0));
    Ok(match name {
        "derivative" => Family::Derivative { x0: cfg.x0()? },
        "moment" => Family::Moment { a, b },
        "higher_integral" => Family::HigherIntegral,
        "endpoint_difference" => Family::EndpointDifference { a, b, anchor: cfg.anchor },
        other => return Err(CliError::usage(format!("unknown family '{other}'"))),
    })
}

pub fn show<T: Scalar>(v: &T) -> String {
    match v.to_rational() {
        Some(r) if T::EXACT => r.to_string(),
        _ => crate::output::fmt17(v.to_f64()),
    }
}

fn shows<T: Scalar>(v: &[T]) -> Vec<String> {
    v.iter().map(show).collect()
}

/// Builds the configured approximant. `perturb` shifts `c_n` before the
/// build while verification uses the true numbers; `family` measures the
/// result under a different family.
pub fn model(cfg: &RunConfig, perturb: Option<usize>, family: Option<&str>) -> Result<Model, CliError> {
    let e = parse_expr(cfg.function()?).map_err(|e| CliError::usage(e.to_string()))?;
    let name = cfg.kind()?;
    let order = cfg.order();
    let other = family.map(|f| family_by_name(f, cfg)).transpose()?;
    if OTHER_KINDS.contains(&name) {
        return other_model(name, &e, order, cfg, perturb, other.as_ref());
    }
    let kind = series_kind(name, order, cfg)?;
    if other.is_none() {
        match series_model::<Rational>(&kind, &e, order, cfg, perturb, None) {
            Err(CliError::Lib(Error::Inexact { .. })) => {}
            r => return r,
        }
    }
    series_model::<f64>(&kind, &e, order, cfg, perturb, other.as_ref())
}

fn series_kind(name: &str, order: usize, cfg: &RunConfig) -> Result<ExpansionKind, CliError> {
    let mut kind = ExpansionKind::with_defaults(name, order).map_err(|e| match e {
        Error::InvalidParameter(m) => CliError::usage(m),
        other => CliError::Lib(other),
    })?;
    match &mut kind {
        ExpansionKind::ExpWeighted { w, q } => {
            if let Some(v) = &cfg.w {
                *w = v.rational()?;
            }
            if let Some(v) = cfg.q {
                *q = v;
            }
        }
        ExpansionKind::RationalX { alpha } => {
            if let Some(v) = &cfg.alpha {
                *alpha = v.rational()?;
            }
        }
        ExpansionKind::Nonlinear { lambda } => {
            if let Some(l) = &cfg.lambda {
                *lambda = Lambda::parse(l).map_err(|e| CliError::usage(e.to_string()))?;
            }
        }
        _ => {}
    }
    Ok(kind)
}

fn perturbed<T: Scalar>(c: &CharNumbers<T>, n: Option<usize>) -> Result<CharNumbers<T>, CliError> {
    let Some(n) = n else { return Ok(c.clone()) };
    if c.get(n).is_none() {
        return Err(CliError::usage(format!("no characteristic number with index {n}")));
    }
    let bump = T::from_rational(&Rational::new(1.into(), 1000.into()));
    Ok(c.map_values(|i, v| {
        if i == n {
            v.clone() + bump.clone() * (T::one() + v.clone())
        } else {
            v.clone()
        }
    }))
}

fn series_model<T: Scalar>(
    kind: &ExpansionKind,
    e: &Expr,
    order: usize,
    cfg: &RunConfig,
    perturb: Option<usize>,
    other: Option<&Family>,
) -> Result<Model, CliError> {
    let x0 = cfg.x0()?;
    let c: CharNumbers<T> = match kind {
        ExpansionKind::Nonlinear { lambda } => nonlinear_chars(e, *lambda, x0, order)?,
        _ => char_numbers_derivative(e, x0, order)?,
    };
    let a = build(kind, &perturbed(&c, perturb)?)?;
    let report = match other {
        Some(f) => {
            let target: CharNumbers<T> = expr_char_numbers(e, f, 0..=order, &Quadrature::default())?;
            verify_matching(&a, &target, DEFAULT_TOL)?
        }
        None => verify_matching(&a, &c, DEFAULT_TOL)?,
    };
    let extra = match kind {
        ExpansionKind::Pade { .. } => Some(("q_n".to_string(), shows(a.denominator()))),
        ExpansionKind::Taylor | ExpansionKind::Nonlinear { .. } => {
            // coefficient of (x − x₀)^n
            let mut fact = T::one();
            let power = a
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    if n > 0 {
                        fact = fact.clone() * T::from_usize(n);
                    }
                    show(&(v.clone() / fact.clone()))
                })
                .collect();
            Some(("power_coeff".to_string(), power))
        }
        _ => None,
    };
    let table = CoeffTable {
        kind: kind.to_string(),
        family: c.family().to_string(),
        exact: T::EXACT,
        start: 0,
        c: shows(c.values()),
        a: shows(a.coeffs()),
        extra,
    };
    let approx: SeriesApproximant<T> = a;
    Ok(Model {
        approx: Box::new(approx),
        table,
        report,
    })
}

fn finish<A: Measurable<f64> + 'static>(
    approx: A,
    c: &CharNumbers<f64>,
    a: Vec<f64>,
    other: Option<(&Family, &Expr)>,
    kind: &str,
) -> Result<Model, CliError> {
    let report = match other {
        Some((f, e)) => {
            let target: CharNumbers<f64> = expr_char_numbers(e, f, 0..=c.order(), &Quadrature::default())?;
            verify_matching(&approx, &target, DEFAULT_TOL)?
        }
        None => verify_matching(&approx, c, DEFAULT_TOL)?,
    };
    let table = CoeffTable {
        kind: kind.to_string(),
        family: c.family().to_string(),
        exact: false,
        start: c.start(),
        c: shows(c.values()),
        a: shows(&a),
        extra: None,
    };
    Ok(Model {
        approx: Box::new(approx),
        table,
        report,
    })
}

fn equispaced(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}

fn other_model(
    name: &str,
    e: &Expr,
    order: usize,
    cfg: &RunConfig,
    perturb: Option<usize>,
    other: Option<&Family>,
) -> Result<Model, CliError> {
    let quad = Quadrature::default();
    let other = other.map(|f| (f, e));
    match name {
        "legendre_moment" => {
            let c = moments_compute::<f64>(e, cfg.interval.unwrap_or((-1.0, 1.0)), order, &quad)?.chars();
            let a = legendre_moment_match(&perturbed(&c, perturb)?)?;
            let coeffs = a.poly().coeffs().to_vec();
            finish(a, &c, coeffs, other, name)
        }
        "legendre_fourier" | "fourier" => {
            let oc = if name == "fourier" {
                fourier_coeffs(e, order, &quad)?
            } else {
                legendre_fourier_coeffs(e, order, &quad)?
            };
            let c = oc.chars();
            let mut a = oc.approximant();
            if let Some(n) = perturb {
                a.coeffs = perturbed(&c, Some(n))?.values().to_vec();
            }
            let coeffs = a.coeffs.clone();
            finish(a, &c, coeffs, other, name)
        }
        "higher_integral" => {
            let c = higher_integral_chars::<f64>(e, order.max(1), &quad)?;
            let a = higher_integral_approx(&perturbed(&c, perturb)?)?;
            let coeffs = a.poly().coeffs().to_vec();
            finish(a, &c, coeffs, other, name)
        }
        "bernoulli" => {
            let (lo, hi) = cfg.interval.unwrap_or((0.0, 1.0));
            let c = bernoulli_chars::<f64>(e, lo, hi, order, cfg.anchor)?;
            let a = bernoulli_approx(&perturbed(&c, perturb)?)?;
            let coeffs = a.poly().coeffs().to_vec();
            finish(a, &c, coeffs, other, name)
        }
        "lagrange" | "newton" => {
            let (lo, hi) = cfg.interval.unwrap_or((-1.0, 1.0));
            let c = value_chars::<f64>(e, &equispaced(lo, hi, order + 1))?;
            let pc = perturbed(&c, perturb)?;
            if name == "lagrange" {
                let a = lagrange_interp(&pc)?;
                let v = pc.values().to_vec();
                finish(a, &c, v, other, name)
            } else {
                let a = newton_interp(&pc)?;
                let v = a.coeffs().to_vec();
                finish(a, &c, v, other, name)
            }
        }
        "ws" | "ws_integral" => {
            let preset = cfg.preset.as_deref().ok_or_else(|| CliError::usage("ws kinds need --preset"))?;
            let sys = NodeSystem::preset(preset, order).map_err(|e| CliError::usage(e.to_string()))?;
            if name == "ws" {
                let c = sys.value_chars(e)?;
                let a = ws_build(&sys, &perturbed(&c, perturb)?)?;
                let v = a.coeffs().to_vec();
                finish(a, &c, v, other, &sys.name)
            } else {
                let anchor = cfg.anchor.unwrap_or(0.0);
                let fam = Family::PrimitiveAtNodes {
                    a: anchor,
                    nodes: sys.nodes.clone(),
                };
                let c: CharNumbers<f64> = expr_char_numbers(e, &fam, 0..=sys.nodes.len() - 1, &quad)?;
                let a = ws_integral_match(&sys, &perturbed(&c, perturb)?)?;
                let v = c.values().to_vec();
                finish(a, &c, v, other, &format!("{}-integral", sys.name))
            }
        }
        _ => unreachable!("listed in OTHER_KINDS"),
    }
}
