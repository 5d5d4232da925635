//! Exact combinatorial sequences and classical polynomial families.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{factorial, int, ratio, Rational};

/// Generalized binomial `r(r-1)…(r-k+1)/k!` for real `r`.
pub fn binomial_general(r: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (r - i as f64) / (i + 1) as f64)
}

/// Generalized binomial with an exact rational upper argument.
pub fn binomial_rational(r: &Rational, k: usize) -> Rational {
    let mut num = Rational::one();
    for i in 0..k {
        num *= r - int(i as i64);
    }
    num / factorial(k)
}

/// Integer binomial `C(n, k)`; zero when `k > n` and for negative `k`.
pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    binomial_rational(&int(n), k as usize)
}

/// Generalized exponentiation `x^⟦y⟧`: ordinary power, except `0^⟦0⟧ = 1`.
///
/// A zero base with a negative exponent is undefined and reported as a
/// domain error.
pub fn gen_pow(x: &Rational, y: i64) -> Result<Rational> {
    if y == 0 {
        return Ok(Rational::one());
    }
    if x.is_zero() {
        return if y > 0 {
            Ok(Rational::zero())
        } else {
            Err(Error::domain("gen_pow", "zero base with negative exponent"))
        };
    }
    let p = num_traits::pow(x.clone(), y.unsigned_abs() as usize);
    Ok(if y > 0 { p } else { p.recip() })
}

fn check_range(op: &'static str, n: usize, k: usize) -> Result<()> {
    if k > n {
        Err(Error::domain(op, format!("k = {k} exceeds n = {n}")))
    } else {
        Ok(())
    }
}

/// Stirling number of the second kind from the explicit alternating sum.
pub fn stirling2(n: usize, k: usize) -> Result<Rational> {
    check_range("stirling2", n, k)?;
    let mut acc = Rational::zero();
    for i in 0..=k {
        let term = binomial(k as i64, i as i64) * gen_pow(&int((k - i) as i64), n as i64)?;
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc / factorial(k))
}

/// Rows `0..=n` of a triangle generated by `next(row_{m-1}) = row_m`.
fn triangle(n: usize, step: impl Fn(usize, &[Rational], usize) -> Rational) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let row = (0..=m).map(|k| step(m, prev, k)).collect();
        rows.push(row);
    }
    rows
}

fn at(row: &[Rational], k: isize) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        row.get(k as usize).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Rows of unsigned Stirling numbers of the first kind, `c(m,k)` for `m ≤ n`.
pub fn stirling1_unsigned_rows(n: usize) -> Vec<Vec<Rational>> {
    // c(m,k) = c(m-1,k-1) + (m-1) c(m-1,k)
    triangle(n, |m, prev, k| {
        at(prev, k as isize - 1) + int(m as i64 - 1) * at(prev, k as isize)
    })
}

pub fn stirling1_unsigned(n: usize, k: usize) -> Result<Rational> {
    check_range("stirling1_unsigned", n, k)?;
    Ok(stirling1_unsigned_rows(n)[n][k].clone())
}

/// Signed central factorial numbers `t(n,k)`, the coefficients of
/// `x (x + n/2 - 1)(x + n/2 - 2)…(x - n/2 + 1)`.
pub fn central_factorial_row(n: usize) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::domain("central_factorial", "n must be at least 1"));
    }
    let half = ratio(n as i64, 2);
    let mut p = Poly::<Rational>::x();
    for j in 1..n {
        let root = half.clone() - int(j as i64);
        p = p.mul(&Poly::new(vec![root, Rational::one()]));
    }
    Ok((0..=n).map(|k| p.coeff(k)).collect())
}

/// `|t(n,k)|`, absolute central factorial numbers of the first kind.
pub fn central_factorial_abs(n: usize, k: usize) -> Result<Rational> {
    check_range("central_factorial_abs", n, k)?;
    Ok(central_factorial_row(n)?[k].abs())
}

/// Bernoulli numbers `B_0..B_n` with the `B_1 = -1/2` convention.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1,k) B_k = 0
        let s = (0..m).fold(Rational::zero(), |acc, k| {
            acc + binomial(m as i64 + 1, k as i64) * &b[k]
        });
        b.push(-s / int(m as i64 + 1));
    }
    b
}

/// Bernoulli polynomial `B_n(x) = Σ_k C(n,k) B_{n-k} x^k`.
pub fn bernoulli_poly(n: usize) -> Poly<Rational> {
    let b = bernoulli_numbers(n);
    Poly::new(
        (0..=n)
            .map(|k| binomial(n as i64, k as i64) * &b[n - k])
            .collect(),
    )
}

/// Legendre polynomial on `(-1,1)` or, when `shifted`, on `(0,1)`.
///
/// Unshifted: `γ_j^n = 2^n C(n,j) C((n+j-1)/2, n)` (generalized binomial).
/// Shifted: `γ̃_j^n = (-1)^{n+j} C(n,j) C(n+j,j)`.
pub fn legendre_coeffs(n: usize, shifted: bool) -> Poly<Rational> {
    let coeffs = (0..=n)
        .map(|j| {
            if shifted {
                let s = binomial(n as i64, j as i64) * binomial((n + j) as i64, j as i64);
                if (n + j) % 2 == 0 {
                    s
                } else {
                    -s
                }
            } else {
                let two_n = Rational::from_integer(BigInt::one() << n);
                let top = ratio((n + j) as i64 - 1, 2);
                two_n * binomial(n as i64, j as i64) * binomial_rational(&top, n)
            }
        })
        .collect();
    Poly::new(coeffs)
}

/// Bell number `Σ_k S(n,k)`.
pub fn bell_number(n: usize) -> Rational {
    (0..=n).map(|k| stirling2(n, k).unwrap()).sum()
}

/// Kinds of precomputed coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    Stirling2,
    Stirling1Unsigned,
    CentralFactorialAbs,
    BernoulliNumber,
    Moebius,
    Nu,
    /// `B_{n,k}(1,2,…,n-k+1) = C(n,k) k^{n-k}`.
    BellArgSpecial,
    /// `B_{n,k}(1!,2!,…) = C(n-1,k-1) n!/k!` (unsigned Lah numbers).
    Lah,
}

/// Immutable table of exact values, indexed `(n,k)` for triangles and `n`
/// for one-dimensional sequences. Entries outside the defined range are
/// absent rather than zero.
#[derive(Debug, Clone)]
pub struct SeqTable {
    kind: SeqKind,
    rows: Vec<Vec<Rational>>,
}

impl SeqTable {
    pub fn build(kind: SeqKind, max: usize) -> Result<Self> {
        let rows = match kind {
            SeqKind::Stirling2 => (0..=max)
                .map(|n| (0..=n).map(|k| stirling2(n, k)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
            SeqKind::Stirling1Unsigned => stirling1_unsigned_rows(max),
            SeqKind::CentralFactorialAbs => {
                let mut rows = vec![Vec::new()];
                for n in 1..=max {
                    rows.push(central_factorial_row(n)?.iter().map(|v| v.abs()).collect());
                }
                rows
            }
            SeqKind::BernoulliNumber => bernoulli_numbers(max).into_iter().map(|b| vec![b]).collect(),
            SeqKind::Moebius | SeqKind::Nu => {
                let mut rows = vec![Vec::new()];
                for n in 1..=max as u64 {
                    let v = if kind == SeqKind::Moebius {
                        super::moebius(n)?
                    } else {
                        super::nu(n)?
                    };
                    rows.push(vec![int(v as i64)]);
                }
                rows
            }
            SeqKind::BellArgSpecial => (0..=max)
                .map(|n| {
                    (0..=n)
                        .map(|k| {
                            Ok(binomial(n as i64, k as i64)
                                * gen_pow(&int(k as i64), (n - k) as i64)?)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
            SeqKind::Lah => (0..=max)
                .map(|n| {
                    (0..=n)
                        .map(|k| {
                            if n == 0 {
                                Rational::one()
                            } else if k == 0 {
                                Rational::zero()
                            } else {
                                binomial(n as i64 - 1, k as i64 - 1) * factorial(n) / factorial(k)
                            }
                        })
                        .collect()
                })
                .collect(),
        };
        Ok(SeqTable { kind, rows })
    }

    pub fn kind(&self) -> SeqKind {
        self.kind
    }

    /// Largest first index stored.
    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    /// Triangle entry `(n,k)`.
    pub fn get(&self, n: usize, k: usize) -> Option<&Rational> {
        self.rows.get(n)?.get(k)
    }

    /// One-dimensional entry `n`.
    pub fn value(&self, n: usize) -> Option<&Rational> {
        self.get(n, 0)
    }
}
