//! Built-in figure reproductions.

use charmatch::expansions::{build, nonlinear_chars, prime_indicator_eval, ExpansionKind};
use charmatch::framework::{Approximant, Lambda};
use charmatch::integral_match::{legendre_fourier_coeffs, Quadrature};
use charmatch::jets::{char_numbers_derivative, parse_expr, Expr};
use charmatch::scalar::ratio;
use charmatch::specfun::moebius;
use charmatch::ws_interp::{ws_build, NodeSystem};
use charmatch::Rational;

use crate::config::Grid;
use crate::output::{Role, Series, Table};
use crate::CliError;

pub const FIGURES: [&str; 19] = [
    "besscos",
    "legout",
    "exppoly",
    "logpowers",
    "newpade",
    "inargpow-a",
    "inargpow-b",
    "inargpow-c",
    "inargpow-d",
    "pprime",
    "nonlin",
    "ws-a",
    "ws-b",
    "ws-c",
    "ws-d",
    "ws-e",
    "ws-f",
    "ws-e-integral",
    "ws-b-integral",
];

const PI: f64 = std::f64::consts::PI;

fn expr(s: &str) -> Expr {
    parse_expr(s).expect("built-in expression")
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    Grid { lo, hi, points }.xs()
}

// evaluation failures (poles, domain edges) are written as NaN
fn sample(xs: &[f64], f: impl Fn(f64) -> charmatch::Result<f64>) -> Vec<f64> {
    xs.iter().map(|&x| f(x).unwrap_or(f64::NAN)).collect()
}

struct Builder {
    xs: Vec<f64>,
    series: Vec<Series>,
    errors: Vec<Series>,
}

impl Builder {
    fn new(xs: Vec<f64>) -> Self {
        Builder { xs, series: Vec::new(), errors: Vec::new() }
    }

    fn reference(&mut self, name: &str, f: &Expr) -> Vec<f64> {
        let v = sample(&self.xs, |x| f.eval(x));
        self.series.push(Series { name: name.into(), role: Role::Reference, values: v.clone() });
        v
    }

    fn approx(&mut self, name: &str, a: &dyn Approximant, reference: &[f64]) {
        let v = sample(&self.xs, |x| a.eval(x));
        let err = v.iter().zip(reference).map(|(a, f)| a - f).collect();
        self.series.push(Series { name: name.into(), role: Role::Approximant, values: v });
        self.errors.push(Series { name: format!("err_{name}"), role: Role::Error, values: err });
    }

    fn finish(mut self, title: &str) -> Table {
        self.series.append(&mut self.errors);
        Table { title: title.into(), xs: self.xs, series: self.series }
    }
}

/// Derivative-matching approximant at 0 with exact coefficients.
fn series(kind: &ExpansionKind, f: &Expr, order: usize) -> Result<Box<dyn Approximant>, CliError> {
    let c = char_numbers_derivative::<Rational>(f, 0.0, order)?;
    Ok(Box::new(build(kind, &c)?))
}

fn derivative_panels(
    title: &str,
    kind: &ExpansionKind,
    label: &str,
    functions: &[(&str, &str)],
    xs: Vec<f64>,
) -> Result<Table, CliError> {
    let mut b = Builder::new(xs);
    for (name, src) in functions {
        let f = expr(src);
        let r = b.reference(name, &f);
        let a = series(kind, &f, 10)?;
        b.approx(&format!("{label}_{name}"), a.as_ref(), &r);
    }
    Ok(b.finish(title))
}

pub fn figure(name: &str) -> Result<Table, CliError> {
    match name {
        "besscos" => {
            let mut b = Builder::new(grid(-4.0 * PI, 4.0 * PI, 2001));
            let f = expr("sin(x)");
            let r = b.reference("sin", &f);
            b.approx("taylor10", series(&ExpansionKind::Taylor, &f, 10)?.as_ref(), &r);
            b.approx("nsbf10", series(&ExpansionKind::Nsbf, &f, 10)?.as_ref(), &r);
            Ok(b.finish("sin(x): Taylor and NsBf, 11 matched derivatives"))
        }
        "legout" => {
            let mut b = Builder::new(grid(-2.0, 2.0, 801));
            let quad = Quadrature::default();
            for (name, src) in [("exp", "exp(x)"), ("sin2x", "sin(2*x)")] {
                let f = expr(src);
                let r = b.reference(name, &f);
                let a = legendre_fourier_coeffs(&f, 10, &quad)?.approximant();
                b.approx(&format!("legendre10_{name}"), &a, &r);
            }
            Ok(b.finish("Legendre-Fourier series, N = 10, outside (-1, 1)"))
        }
        "exppoly" => derivative_panels(
            "exp(w x^q) times polynomial, 11 terms, q = 2, w = -1/2",
            &ExpansionKind::ExpWeighted { w: ratio(-1, 2), q: 2 },
            "expw10",
            &[("sin", "sin(x)"), ("atan", "atan(x)")],
            grid(-6.0, 6.0, 1201),
        ),
        "logpowers" => derivative_panels(
            "powers of ln(x+1), 11 terms",
            &ExpansionKind::LogPowers,
            "logpow10",
            &[("exp", "exp(x)"), ("sin", "sin(x)"), ("atan", "atan(x)"), ("sqrt1px", "sqrt(1 + x)")],
            grid(-0.6, 3.0, 1441),
        ),
        "newpade" => derivative_panels(
            "powers of x/(x+1), 11 terms",
            &ExpansionKind::RationalX { alpha: ratio(-1, 1) },
            "xpow10",
            &[("exp", "exp(x)"), ("sin", "sin(x)"), ("atan", "atan(x)"), ("sqrt1px", "sqrt(1 + x)")],
            grid(-0.45, 5.0, 1091),
        ),
        "inargpow-a" => {
            // G(x) = Σ μ_n x^n, with the tail below 1e−17 up to |x| = 0.99
            let mu: Vec<f64> = (1..=5000u64).map(|n| moebius(n).map(f64::from).unwrap_or(0.0)).collect();
            let xs = grid(-0.99, 0.99, 397);
            let g = xs
                .iter()
                .map(|&x| {
                    let mut p = 1.0;
                    mu.iter().fold(0.0, |acc, m| {
                        p *= x;
                        acc + m * p
                    })
                })
                .collect();
            Ok(Table {
                title: "G(x), generating function of the Moebius sequence".into(),
                xs,
                series: vec![Series { name: "G".into(), role: Role::Reference, values: g }],
            })
        }
        "inargpow-b" | "inargpow-c" | "inargpow-d" => {
            let (kind, label, xs, title) = match name {
                "inargpow-b" => (ExpansionKind::DirichletG, "G", grid(-0.95, 0.95, 381), "sum a_n G(x^n), 10 terms"),
                "inargpow-c" => (ExpansionKind::DirichletRat1, "rat1", grid(-0.95, 0.95, 381), "sum a_n /(1 - x^n), 10 terms"),
                _ => (ExpansionKind::DirichletRat2, "rat2", grid(-2.0, 2.0, 801), "sum a_n x^n/(x^2n + 1), 10 terms"),
            };
            derivative_panels(title, &kind, label, &[("exp", "exp(x)"), ("sin5x", "sin(5*x)")], xs)
        }
        "pprime" => {
            let xs = grid(-2.0, 2.0, 401);
            let rows: Vec<Vec<f64>> = xs
                .iter()
                .map(|&x| prime_indicator_eval(x, 40, 3).unwrap_or_else(|_| vec![f64::NAN; 4]))
                .collect();
            let series = (0..4)
                .map(|k| Series {
                    name: if k == 0 { "P".into() } else { format!("P{k}") },
                    role: Role::Reference,
                    values: rows.iter().map(|r| r[k]).collect(),
                })
                .collect();
            Ok(Table { title: "P(x) and its first three derivatives".into(), xs, series })
        }
        "nonlin" => {
            let mut b = Builder::new(grid(-3.0, 3.0, 601));
            for (name, src, lambda) in [
                ("expx_1px2", "exp(x)/(1 + x^2)", Lambda::Ln),
                ("exp", "exp(x)", Lambda::Sqrt),
                ("cos", "cos(x)", Lambda::Cube),
                ("2psin", "2 + sin(x)", Lambda::Ln),
            ] {
                let f = expr(src);
                let r = b.reference(name, &f);
                let c = nonlinear_chars::<f64>(&f, lambda, 0.0, 10)?;
                let a = build(&ExpansionKind::Nonlinear { lambda }, &c)?;
                b.approx(&format!("nl_{}_{name}", lambda.name()), &a, &r);
            }
            Ok(b.finish("nonlinear approximation, 11 terms"))
        }
        _ if name.starts_with("ws-") => ws_figure(name),
        other => Err(CliError::usage(format!("unknown figure '{other}'"))),
    }
}

fn ws_figure(name: &str) -> Result<Table, CliError> {
    let (preset, integral) = match name.strip_suffix("-integral") {
        Some(p) => (p, true),
        None => (name, false),
    };
    let (lo, hi, points) = match preset {
        "ws-a" => (-2.8, 2.8, 1121),
        "ws-b" => (-1.55, 1.55, 1241),
        "ws-c" => (-0.2, 3.1, 1321),
        "ws-d" => (-1.2, 1.2, 1200),
        "ws-e" => (-0.999, 0.999, 1999),
        "ws-f" => (-1.7, 1.7, 1361),
        other => return Err(CliError::usage(format!("unknown figure '{other}'"))),
    };
    let f = NodeSystem::preset_target(preset)?;
    let mut b = Builder::new(grid(lo, hi, points));
    let r = b.reference("f", &f);
    let orders: &[usize] = if preset == "ws-e" { &[20, 100] } else { &[20] };
    for &n in orders {
        let sys = NodeSystem::preset(preset, n)?;
        if integral {
            let a = integral_approx(&sys, &f)?;
            b.approx(&format!("wsint{n}"), &a, &r);
        } else {
            let a = ws_build(&sys, &sys.value_chars(&f)?)?;
            b.approx(&format!("ws{n}"), &a, &r);
        }
    }
    let what = if integral { "integral matching" } else { "interpolation" };
    Ok(b.finish(&format!("generalized Whittaker-Shannon {what}, preset {}", &preset[3..])))
}

fn integral_approx(sys: &NodeSystem, f: &Expr) -> Result<charmatch::ws_interp::WsIntegralApproximant, CliError> {
    use charmatch::framework::Family;
    use charmatch::integral_match::expr_char_numbers;
    // anchor halfway between the two innermost nodes
    let mut sorted = sys.nodes.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let a = 0.5 * (sorted[mid.saturating_sub(1)] + sorted[mid]);
    let fam = Family::PrimitiveAtNodes { a, nodes: sys.nodes.clone() };
    let c = expr_char_numbers::<f64>(f, &fam, 0..=sys.nodes.len() - 1, &Quadrature::default())?;
    Ok(charmatch::ws_interp::ws_integral_match(sys, &c)?)
}
