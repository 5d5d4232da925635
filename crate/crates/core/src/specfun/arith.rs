//! Multiplicative sequences and Dirichlet convolution.
//!
//! Sequences are indexed from 1: slot `u[0]` holds `u_1`.

use std::ops::{Div, Mul, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};

/// Prime factorization by trial division as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function.
pub fn moebius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::domain("moebius", "argument must be positive"));
    }
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

/// Dirichlet inverse of `sin(nπ/2)`: `(-1)^{Σ_{p|n}(p+1)/2}` for square-free
/// odd `n`, zero otherwise.
pub fn nu(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::domain("nu", "argument must be positive"));
    }
    if n % 2 == 0 {
        return Ok(0);
    }
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    let exponent: u64 = f.iter().map(|&(p, _)| (p + 1) / 2).sum();
    Ok(if exponent % 2 == 0 { 1 } else { -1 })
}

/// `sin(nπ/2)` for integer `n`: `1, 0, -1, 0, …` starting at `n = 1`.
pub fn sin_half_pi(n: u64) -> i8 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// `(u∗v)_n = Σ_{k|n} u_k v_{n/k}` for `n = 1..=order`.
pub fn dirichlet_convolve<T>(u: &[T], v: &[T], order: usize) -> Vec<T>
where
    T: Clone + Zero + Mul<Output = T>,
{
    assert!(
        u.len() >= order && v.len() >= order,
        "sequences shorter than the requested order"
    );
    let mut out = vec![T::zero(); order];
    for d in 1..=order {
        let ud = &u[d - 1];
        if ud.is_zero() {
            continue;
        }
        for m in 1..=order / d {
            let slot = &mut out[d * m - 1];
            *slot = slot.clone() + ud.clone() * v[m - 1].clone();
        }
    }
    out
}

/// Dirichlet inverse through `order`, from
/// `u⁻¹_n = -(1/u_1) Σ_{d|n, d<n} u_{n/d} u⁻¹_d`.
///
/// Exact for rational sequences; for integer types it is exact only when
/// `u_1 = ±1`.
pub fn dirichlet_inverse<T>(u: &[T], order: usize) -> Result<Vec<T>>
where
    T: Clone + Zero + Sub<Output = T> + Mul<Output = T> + Div<Output = T> + num_traits::One,
{
    assert!(u.len() >= order, "sequence shorter than the requested order");
    if order == 0 {
        return Ok(Vec::new());
    }
    let u1 = u[0].clone();
    if u1.is_zero() {
        return Err(Error::NoDirichletInverse);
    }
    let mut inv = vec![T::zero(); order];
    // acc[n] accumulates Σ_{d|n, d<n} u_{n/d} inv_d as the inverse is filled in.
    let mut acc = vec![T::zero(); order];
    for d in 1..=order {
        inv[d - 1] = if d == 1 {
            T::one() / u1.clone()
        } else {
            T::zero() - acc[d - 1].clone() / u1.clone()
        };
        if inv[d - 1].is_zero() {
            continue;
        }
        for m in 2..=order / d {
            let slot = &mut acc[d * m - 1];
            *slot = slot.clone() + u[m - 1].clone() * inv[d - 1].clone();
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_convolve(u: &[i64], v: &[i64], order: usize) -> Vec<i64> {
        (1..=order)
            .map(|n| {
                (1..=n)
                    .filter(|k| n % k == 0)
                    .map(|k| u[k - 1] * v[n / k - 1])
                    .sum()
            })
            .collect()
    }

    fn delta(order: usize) -> Vec<i64> {
        (1..=order).map(|n| i64::from(n == 1)).collect()
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(4).unwrap(), 0);
        assert_eq!(moebius(6).unwrap(), 1);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(1).unwrap(), 1);
        assert_eq!(nu(5).unwrap(), -1);
        assert_eq!(nu(9).unwrap(), 0);
        assert_eq!(nu(3).unwrap(), 1);
        assert_eq!(nu(15).unwrap(), -1);
    }

    #[test]
    fn convolution_identity_and_brute_force() {
        let n = 100;
        let ones = vec![1i64; n];
        let mu: Vec<i64> = (1..=n as u64).map(|k| moebius(k).unwrap() as i64).collect();
        assert_eq!(dirichlet_convolve(&delta(n), &delta(n), n), delta(n));
        assert_eq!(dirichlet_convolve(&ones, &mu, n), delta(n));
        assert_eq!(brute_convolve(&ones, &mu, n), delta(n));
        let s: Vec<i64> = (1..=n as u64).map(|k| sin_half_pi(k) as i64).collect();
        let nus: Vec<i64> = (1..=n as u64).map(|k| nu(k).unwrap() as i64).collect();
        assert_eq!(dirichlet_convolve(&s, &nus, n), delta(n));
        assert_eq!(brute_convolve(&s, &nus, n), delta(n));
    }

    #[test]
    fn inverses_match_named_sequences() {
        let n = 100;
        let ones = vec![1i64; n];
        let mu: Vec<i64> = (1..=n as u64).map(|k| moebius(k).unwrap() as i64).collect();
        assert_eq!(dirichlet_inverse(&ones, n).unwrap(), mu);
        assert_eq!(dirichlet_inverse(&delta(n), n).unwrap(), delta(n));
        let s: Vec<i64> = (1..=n as u64).map(|k| sin_half_pi(k) as i64).collect();
        let nus: Vec<i64> = (1..=n as u64).map(|k| nu(k).unwrap() as i64).collect();
        assert_eq!(dirichlet_inverse(&s, n).unwrap(), nus);
    }

    #[test]
    fn inverse_requires_nonzero_head() {
        let u = vec![0i64, 1, 2];
        assert_eq!(dirichlet_inverse(&u, 3), Err(Error::NoDirichletInverse));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(999_983), vec![(999_983, 1)]);
    }
}
