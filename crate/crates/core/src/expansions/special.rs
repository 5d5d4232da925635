//! Dex functions, the Möbius generating function and the prime indicator.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{factorial, int, Rational};
use crate::specfun::moebius;

/// `dex_{[N,n]}(x) = Σ_k x^{n+kN}/(n+kN)!`.
///
/// Terms are accumulated until they fall below `1e−17` of the running sum
/// past the peak of `|x|^m/m!`.
pub fn dex_eval(ring: usize, n: usize, x: f64) -> Result<f64> {
    if ring == 0 || n >= ring {
        return Err(Error::domain("dex", format!("index {n} outside ring of size {ring}")));
    }
    let mut term = 1.0;
    for m in 1..=n {
        term *= x / m as f64;
    }
    let mut sum = term;
    let mut m = n;
    loop {
        for _ in 0..ring {
            m += 1;
            term *= x / m as f64;
        }
        sum += term;
        if m as f64 > x.abs() && (term.abs() <= 1e-17 * sum.abs() || term == 0.0) {
            return Ok(sum);
        }
        if m > 10_000 {
            return Ok(sum);
        }
    }
}

/// Taylor coefficients of `dex_{[N,n]}` at zero through `order`.
pub fn dex_series(ring: usize, n: usize, order: usize) -> Result<Vec<Rational>> {
    if ring == 0 || n >= ring {
        return Err(Error::domain("dex", format!("index {n} outside ring of size {ring}")));
    }
    Ok((0..=order)
        .map(|m| {
            if m % ring == n {
                int(1) / factorial(m)
            } else {
                Rational::zero()
            }
        })
        .collect())
}

/// Partial sum `Σ_{n≤N} μ_n x^n` of the Möbius generating function and the
/// bound `|x|^{N+1}/(1−|x|)` on the omitted tail.
pub fn moebius_g_eval(x: f64, terms: usize) -> Result<(f64, f64)> {
    if !(x.abs() < 1.0) {
        return Err(Error::domain("moebius_G", format!("|x| = {} is not below 1", x.abs())));
    }
    let mut sum = 0.0;
    let mut p = 1.0;
    for n in 1..=terms {
        p *= x;
        let mu = moebius(n as u64)?;
        if mu != 0 {
            sum += mu as f64 * p;
        }
    }
    let tail = x.abs().powi(terms as i32 + 1) / (1.0 - x.abs());
    Ok((sum, tail))
}

/// `G(x)` with enough terms that the tail bound is below `1e−17`.
pub(crate) fn moebius_g(x: f64) -> Result<f64> {
    let ax = x.abs();
    let terms = if ax == 0.0 {
        1
    } else {
        let need = ((1e-17 * (1.0 - ax)).ln() / ax.ln()).ceil();
        if need.is_finite() {
            (need as usize).clamp(1, 200_000)
        } else {
            200_000
        }
    };
    Ok(moebius_g_eval(x, terms)?.0)
}

/// `P^{(p)}(0)` for `p = 0..=pmax`, where `P = Σ_{i=2}^{pmax+1} (dex_{[i,0]} − 1)`.
///
/// The `p`-th derivative counts the divisors `i ≥ 2` of `p`, so it equals
/// one exactly when `p` is prime.
pub fn prime_indicator_p(pmax: usize) -> Result<Vec<Rational>> {
    if pmax < 2 {
        return Err(Error::InvalidParameter("pmax must be at least 2".into()));
    }
    let mut series = vec![Rational::zero(); pmax + 1];
    for i in 2..=pmax + 1 {
        let s = dex_series(i, 0, pmax)?;
        series[0] += s[0].clone() - int(1);
        for m in 1..=pmax {
            series[m] += s[m].clone();
        }
    }
    Ok(series
        .into_iter()
        .enumerate()
        .map(|(m, v)| v * factorial(m))
        .collect())
}

/// `P(x)` and its derivatives `P^{(k)}(x)` for `k ≤ kmax`, with the sum
/// truncated at ring size `imax`.
pub fn prime_indicator_eval(x: f64, imax: usize, kmax: usize) -> Result<Vec<f64>> {
    (0..=kmax)
        .map(|k| {
            (2..=imax).try_fold(0.0, |acc, i| {
                // d^k/dx^k dex_{[i,0]} = dex_{[i,(−k) mod i]}
                let idx = (i - k % i) % i;
                let v = dex_eval(i, idx, x)?;
                Ok(acc + if k == 0 { v - 1.0 } else { v })
            })
        })
        .collect()
}
