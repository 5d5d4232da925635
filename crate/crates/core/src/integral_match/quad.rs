//! Composite Gauss–Legendre quadrature.

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[−1, 1]` applied on equal panels.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    order: usize,
    panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(32, 8).expect("valid default rule")
    }
}

impl Quadrature {
    pub fn new(order: usize, panels: usize) -> Result<Self> {
        if order == 0 || panels == 0 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least one node and one panel".into(),
            ));
        }
        let (nodes, weights) = gauss_legendre(order);
        Ok(Quadrature {
            order,
            panels,
            nodes,
            weights,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter("integration limits must be finite".into()));
        }
        let h = (b - a) / self.panels as f64;
        let mut total = 0.0;
        for p in 0..self.panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            let mut s = 0.0;
            for (t, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + 0.5 * h * t)?;
            }
            total += 0.5 * h * s;
        }
        Ok(total)
    }

    /// Integral together with `|I_{2P} − I_P|` from a panel-doubled rule.
    pub fn integrate_with_error<F>(&self, f: F, a: f64, b: f64) -> Result<(f64, f64)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let coarse = self.integrate(&f, a, b)?;
        let fine = Quadrature {
            panels: self.panels * 2,
            ..self.clone()
        }
        .integrate(&f, a, b)?;
        Ok((fine, (fine - coarse).abs()))
    }
}

/// Nodes and weights of the `n`-point rule, by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `P_0(x)..P_n(x)` by the three-term recurrence.
pub fn legendre_values(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 2..=n {
        let v = ((2 * k - 1) as f64 * x * out[k - 1] - (k - 1) as f64 * out[k - 2]) / k as f64;
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_rule_is_exact() {
        for n in [1, 2, 5, 32] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            assert!(w.iter().all(|v| *v > 0.0));
            // exact through degree 2n − 1
            let deg = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn composite_integrals() {
        let q = Quadrature::default();
        let v = q.integrate(|x| Ok(x.exp()), -1.0, 2.0).unwrap();
        assert!((v - (2f64.exp() - (-1f64).exp())).abs() < 1e-13);
        let (v, err) = q.integrate_with_error(|x| Ok(x.sin().powi(2)), -std::f64::consts::PI, std::f64::consts::PI).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-13 && err < 1e-12);
        assert!(Quadrature::new(0, 3).is_err());
    }

    #[test]
    fn legendre_recurrence() {
        let p = legendre_values(3, 0.5);
        assert!((p[2] - (-0.125)).abs() < 1e-15);
        assert!((p[3] - (-0.4375)).abs() < 1e-15);
    }
}
