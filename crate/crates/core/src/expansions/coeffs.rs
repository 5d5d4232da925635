//! Coefficient formulas for the derivative-matching families.
//!
//! Every function takes the derivatives `c_0..c_N` at the expansion point
//! and returns `a_0..a_N`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::framework::TriMatrix;
use crate::scalar::{factorial, int, Rational, Scalar};
use crate::specfun::{binomial, gen_pow, moebius, nu, SeqKind, SeqTable};

fn cast<T: Scalar>(r: &Rational) -> T {
    T::from_rational(r)
}

/// `a_n = c_n` in the basis `(x−x₀)^n/n!`.
pub fn taylor_coeffs<T: Scalar>(c: &[T]) -> Vec<T> {
    c.to_vec()
}

fn nsbf_weight(n: usize, i: usize) -> Rational {
    let (n, i) = (n as i64, i as i64);
    let p = Rational::from_integer(num_bigint::BigInt::from(2).pow((n - 2 * i) as u32));
    p * (binomial(n - i - 1, n - 2 * i - 1) + int(2) * binomial(n - i - 1, n - 2 * i))
}

/// Neumann series `Σ a_n J_n(x)`:
/// `a_0 = c_0`, `a_n = Σ_{2i≤n} 2^{n−2i}[C(n−i−1,n−2i−1) + 2C(n−i−1,n−2i)] c_{n−2i}`.
///
/// At even `n` the `2i = n` term contributes `2c_0`; without it the series
/// misses `c_n` for every even `n ≥ 2` (see [`nsbf_coeffs_strict`]).
pub fn nsbf_coeffs<T: Scalar>(c: &[T]) -> Vec<T> {
    nsbf_with_bound(c, true)
}

/// The same sum restricted to `2i < n`. Kept for comparison: it fails to
/// reproduce `c_n` at even orders, e.g. it gives `a_2 = −4` for `cos`
/// where `cos = J_0 − 2J_2 + 2J_4 − …`.
pub fn nsbf_coeffs_strict<T: Scalar>(c: &[T]) -> Vec<T> {
    nsbf_with_bound(c, false)
}

fn nsbf_with_bound<T: Scalar>(c: &[T], inclusive: bool) -> Vec<T> {
    (0..c.len())
        .map(|n| {
            if n == 0 {
                return c[0].clone();
            }
            (0..=n / 2)
                .filter(|&i| inclusive || 2 * i < n)
                .fold(T::zero(), |acc, i| acc + cast::<T>(&nsbf_weight(n, i)) * c[n - 2 * i].clone())
        })
        .collect()
}

/// Padé block `P_m/Q_n` with `Q(0) = 1` from the series identity
/// `P = f·Q mod x^{m+n+1}`, solved densely with partial pivoting.
///
/// Returns `(p_0..p_m, q_0..q_n)` as coefficients of powers of `x − x₀`.
pub fn pade_solve<T: Scalar>(c: &[T], m: usize, n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if c.len() < m + n + 1 {
        return Err(Error::InvalidParameter(format!(
            "Padé [{m}/{n}] needs {} characteristic numbers, got {}",
            m + n + 1,
            c.len()
        )));
    }
    let f: Vec<T> = c
        .iter()
        .enumerate()
        .map(|(k, ck)| ck.clone() / T::from_rational(&factorial(k)))
        .collect();
    let fk = |k: i64| if k < 0 { T::zero() } else { f[k as usize].clone() };
    // rows k = m+1..=m+n: Σ_{j=1}^n q_j f_{k−j} = −f_k
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|r| {
            let k = (m + 1 + r) as i64;
            let mut row: Vec<T> = (1..=n).map(|j| fk(k - j as i64)).collect();
            row.push(-fk(k));
            row
        })
        .collect();
    let scale = a.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].magnitude().total_cmp(&a[j][col].magnitude()))
            .expect("non-empty pivot range");
        let pv = a[pivot][col].magnitude();
        if a[pivot][col].is_zero() || (!T::EXACT && pv <= 1e-13 * scale) {
            return Err(Error::DegeneratePade { m, n });
        }
        a.swap(col, pivot);
        for r in col + 1..n {
            let factor = a[r][col].clone() / a[col][col].clone();
            if factor.is_zero() {
                continue;
            }
            for k in col..=n {
                let v = a[col][k].clone();
                a[r][k] = a[r][k].clone() - factor.clone() * v;
            }
        }
    }
    let mut q = vec![T::zero(); n];
    for r in (0..n).rev() {
        let s = (r + 1..n).fold(a[r][n].clone(), |acc, k| acc - a[r][k].clone() * q[k].clone());
        q[r] = s / a[r][r].clone();
    }
    q.insert(0, T::one());
    let p = (0..=m)
        .map(|k| (0..=k.min(n)).fold(T::zero(), |acc, j| acc + q[j].clone() * f[k - j].clone()))
        .collect();
    Ok((p, q))
}

/// Default `[m/n]` split for `N+1` numbers: `m = N − ⌊N/2⌋`, `n = ⌊N/2⌋`.
pub fn pade_split(order: usize) -> (usize, usize) {
    (order - order / 2, order / 2)
}

/// `Σ a_n [sin(x/2)]^n` with `a_0 = c_0`, `a_n = (2^n/n!) Σ_{k=1}^n c_k |t(n,k)|`.
pub fn pow_sine_coeffs<T: Scalar>(c: &[T]) -> Result<Vec<T>> {
    let n_max = c.len().saturating_sub(1);
    let t = SeqTable::build(SeqKind::CentralFactorialAbs, n_max)?;
    Ok((0..c.len())
        .map(|n| {
            if n == 0 {
                return c[0].clone();
            }
            let w = Rational::from_integer(num_bigint::BigInt::from(2).pow(n as u32)) / factorial(n);
            (1..=n).fold(T::zero(), |acc, k| {
                let tk = t.get(n, k).expect("table covers k ≤ n");
                acc + cast::<T>(&(&w * tk)) * c[k].clone()
            })
        })
        .collect())
}

/// Lower-triangular `D` mapping the coefficients of `exp(w x^q) Σ a_n x^n`
/// to derivatives at zero, together with its closed-form inverse.
#[derive(Debug, Clone)]
pub struct DMatrix {
    pub w: Rational,
    pub q: u32,
    pub d: TriMatrix<Rational>,
    pub inv: TriMatrix<Rational>,
}

/// `D[m][j] = δ_{v_{m−j},0} m!(u q)!/((m−j)! u!) w^u` with `u = u_{m−j}`,
/// and `D⁻¹[n][i] = δ_{v_{n−i},0} (−1)^u w^⟦u⟧ / ((v_n + q u_i)! u!)` with
/// `u = u_{n−i}`, where `u_k = ⌊k/q⌋` and `v_k = k mod q`.
pub fn dmatrix_build(w: &Rational, q: u32, order: usize) -> Result<DMatrix> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be a positive integer".into()));
    }
    let q = q as usize;
    let (u, v) = (|k: usize| k / q, |k: usize| k % q);
    let d = TriMatrix::from_fn(order, |m, j| {
        if v(m - j) != 0 {
            return Rational::zero();
        }
        let uu = u(m - j);
        factorial(m) * factorial(uu * q) / (factorial(m - j) * factorial(uu))
            * gen_pow(w, uu as i64).expect("non-negative exponent")
    });
    let inv = TriMatrix::from_fn(order, |n, i| {
        if v(n - i) != 0 {
            return Rational::zero();
        }
        let uu = u(n - i);
        let sign = if uu % 2 == 0 { Rational::one() } else { -Rational::one() };
        sign * gen_pow(w, uu as i64).expect("non-negative exponent")
            / (factorial(v(n) + q * u(i)) * factorial(uu))
    });
    Ok(DMatrix {
        w: w.clone(),
        q: q as u32,
        d,
        inv,
    })
}

/// Coefficients of `exp(w x^q) Σ a_n x^n`, `a = D⁻¹ c`.
pub fn exp_weighted_coeffs<T: Scalar>(c: &[T], w: &Rational, q: u32) -> Result<Vec<T>> {
    if c.is_empty() {
        return Ok(Vec::new());
    }
    let dm = dmatrix_build(w, q, c.len() - 1)?;
    let inv = TriMatrix::from_fn(c.len() - 1, |n, i| cast::<T>(&dm.inv.get(n, i)));
    Ok(inv.mul_vec(c))
}

/// Choice of `g` in `Σ a_n [g(x)]^n`, each with its Bell-polynomial table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GVariant {
    /// `g = ln(1+x)`, Stirling numbers of the second kind.
    LogPowers,
    /// `g = 1 − e^{−x}`, unsigned Stirling numbers of the first kind.
    Stirling1,
    /// `g = W(x)`, `C(n,k) k^{n−k}`.
    LambertW,
    /// `g = x/(x+1)`, `C(n−1,k−1) n!/k!`.
    RationalX,
}

impl GVariant {
    fn table(self) -> SeqKind {
        match self {
            GVariant::LogPowers => SeqKind::Stirling2,
            GVariant::Stirling1 => SeqKind::Stirling1Unsigned,
            GVariant::LambertW => SeqKind::BellArgSpecial,
            GVariant::RationalX => SeqKind::Lah,
        }
    }
}

/// `a_n = (1/n!) Σ_{k=0}^n c_k b_{n,k}`.
pub fn powers_of_g_coeffs<T: Scalar>(c: &[T], variant: GVariant) -> Result<Vec<T>> {
    let n_max = c.len().saturating_sub(1);
    let b = SeqTable::build(variant.table(), n_max)?;
    Ok((0..c.len())
        .map(|n| {
            let inv = Rational::one() / factorial(n);
            (0..=n).fold(T::zero(), |acc, k| {
                let bnk = b.get(n, k).expect("table covers k ≤ n");
                if bnk.is_zero() {
                    acc
                } else {
                    acc + cast::<T>(&(bnk * &inv)) * c[k].clone()
                }
            })
        })
        .collect())
}

/// `a_0 + Σ a_n [y/(y−α)]^n`: the `x/(x+1)` expansion of `f(−αz)` in
/// `z = −x/α`, which moves the pole of every partial sum to `x = α`.
pub fn rational_x1_coeffs<T: Scalar>(c: &[T], alpha: &Rational) -> Result<Vec<T>> {
    if alpha.is_zero() {
        return Err(Error::domain("rational_x_over_x1", "alpha must be nonzero"));
    }
    let neg_alpha = -alpha.clone();
    let scaled: Vec<T> = c
        .iter()
        .enumerate()
        .map(|(n, cn)| cast::<T>(&gen_pow(&neg_alpha, n as i64).expect("nonzero base")) * cn.clone())
        .collect();
    powers_of_g_coeffs(&scaled, GVariant::RationalX)
}

/// Sequence convolved with the power coefficients in the `Σ a_n g(x^n)` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirichletVariant {
    /// `g = G`, the Möbius generating function; `a = 1 ∗ f`.
    G,
    /// `g(t) = 1/(1−t)`; `a = μ ∗ f`.
    Rat1,
    /// `g(t) = t/(t²+1)`; `a = ν ∗ f`.
    Rat2,
}

/// `(b₀, a_1..a_N)` packed as `a[0] = b₀`.
///
/// With `f_n = c_n/n!`, `a_n = Σ_{k|n} u_k f_{n/k}` for the variant's `u`.
/// `b₀ = c_0` when `g(0) = 0`; for `Rat1`, `b₀ = c_0 − Σ_{n≤N} a_n`, which
/// depends on the truncation order.
pub fn dirichlet_coeffs<T: Scalar>(c: &[T], variant: DirichletVariant) -> Result<Vec<T>> {
    let order = c.len().saturating_sub(1);
    let f: Vec<T> = c
        .iter()
        .enumerate()
        .map(|(k, ck)| ck.clone() / T::from_rational(&factorial(k)))
        .collect();
    let u = |k: usize| -> Result<i64> {
        Ok(match variant {
            DirichletVariant::G => 1,
            DirichletVariant::Rat1 => moebius(k as u64)? as i64,
            DirichletVariant::Rat2 => nu(k as u64)? as i64,
        })
    };
    let mut a = vec![T::zero(); order + 1];
    for k in 1..=order {
        let uk = u(k)?;
        if uk == 0 {
            continue;
        }
        for m in 1..=order / k {
            a[k * m] = a[k * m].clone() + T::from_i64(uk) * f[m].clone();
        }
    }
    if let Some(c0) = c.first() {
        a[0] = match variant {
            DirichletVariant::Rat1 => a[1..].iter().fold(c0.clone(), |acc, v| acc - v.clone()),
            _ => c0.clone(),
        };
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::specfun::{bell_number, dirichlet_convolve};

    fn sin_c(n: usize) -> Vec<Rational> {
        (0..=n)
            .map(|k| match k % 4 {
                1 => int(1),
                3 => int(-1),
                _ => int(0),
            })
            .collect()
    }

    fn cos_c(n: usize) -> Vec<Rational> {
        (0..=n)
            .map(|k| match k % 4 {
                0 => int(1),
                2 => int(-1),
                _ => int(0),
            })
            .collect()
    }

    #[test]
    fn nsbf_examples() {
        let a = nsbf_coeffs(&sin_c(5));
        assert_eq!(a, vec![int(0), int(2), int(0), int(-2), int(0), int(2)]);
        assert_eq!(nsbf_coeffs_strict(&sin_c(5)), a);
        let a = nsbf_coeffs(&cos_c(4));
        assert_eq!(a, vec![int(1), int(0), int(-2), int(0), int(2)]);
        assert_eq!(nsbf_coeffs_strict(&cos_c(2))[2], int(-4));
        assert!(nsbf_coeffs(&vec![int(0); 6]).iter().all(Zero::is_zero));
    }

    #[test]
    fn pade_examples() {
        let exp: Vec<Rational> = vec![int(1); 3];
        let (p, q) = pade_solve(&exp, 1, 1).unwrap();
        assert_eq!(p, vec![int(1), ratio(1, 2)]);
        assert_eq!(q, vec![int(1), ratio(-1, 2)]);
        let (p, q) = pade_solve(&sin_c(4), 4, 0).unwrap();
        assert_eq!(q, vec![int(1)]);
        assert_eq!(p, vec![int(0), int(1), int(0), ratio(-1, 6), int(0)]);
        // 1/(1+x): c_n = (−1)^n n!
        let c: Vec<Rational> = (0..2).map(|n| factorial(n) * int(if n % 2 == 0 { 1 } else { -1 })).collect();
        let (p, q) = pade_solve(&c, 0, 1).unwrap();
        assert_eq!(p, vec![int(1)]);
        assert_eq!(q, vec![int(1), int(1)]);
        // even function: the [1/1] block needs f_1 = 0 as a pivot
        assert_eq!(pade_solve(&cos_c(2), 1, 1), Err(Error::DegeneratePade { m: 1, n: 1 }));
    }

    #[test]
    fn pow_sine_examples() {
        assert_eq!(pow_sine_coeffs(&sin_c(1)).unwrap()[1], int(2));
        assert_eq!(pow_sine_coeffs(&cos_c(2)).unwrap()[2], int(-2));
        assert!(pow_sine_coeffs(&vec![int(0); 5]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn dmatrix_inverse_is_exact() {
        for (w, q) in [(ratio(-1, 2), 2), (int(1), 1), (int(2), 3), (int(0), 2)] {
            let dm = dmatrix_build(&w, q, 30).unwrap();
            assert_eq!(dm.d.mul(&dm.inv), TriMatrix::identity(30), "w={w} q={q}");
            for i in 0..=30 {
                assert_eq!(dm.d.get(i, i), factorial(i));
            }
        }
        let dm = dmatrix_build(&int(0), 1, 6).unwrap();
        for m in 0..=6 {
            for j in 0..m {
                assert!(dm.d.get(m, j).is_zero());
            }
            assert_eq!(dm.inv.get(m, m), int(1) / factorial(m));
        }
        assert!(dmatrix_build(&int(1), 0, 3).is_err());
    }

    #[test]
    fn exp_weighted_examples() {
        let c: Vec<Rational> = (0..6).map(|k| int(k as i64 * 3 - 4)).collect();
        let taylor: Vec<Rational> = c.iter().enumerate().map(|(k, v)| v / factorial(k)).collect();
        assert_eq!(exp_weighted_coeffs(&c, &int(0), 3).unwrap(), taylor);
        let w = ratio(3, 7);
        let a = exp_weighted_coeffs(&c, &w, 2).unwrap();
        assert_eq!(a[2], -&w * &c[0] + &c[2] / int(2));
        let a = exp_weighted_coeffs(&vec![int(1); 6], &int(1), 1).unwrap();
        assert_eq!(a[0], int(1));
        assert!(a[1..].iter().all(Zero::is_zero));
        // the inverse matrix agrees with forward substitution through D
        let dm = dmatrix_build(&w, 2, 5).unwrap();
        let solved = crate::framework::tri_forward_solve(&dm.d, &c).unwrap();
        assert_eq!(exp_weighted_coeffs(&c, &w, 2).unwrap(), solved);
    }

    #[test]
    fn powers_of_g_examples() {
        let exp = vec![int(1); 8];
        let a = powers_of_g_coeffs(&exp, GVariant::LogPowers).unwrap();
        assert_eq!(a[2], int(1));
        assert_eq!(a[3], ratio(5, 6));
        for (n, an) in a.iter().enumerate() {
            assert_eq!(*an, bell_number(n) / factorial(n));
        }
        let a = powers_of_g_coeffs(&exp, GVariant::Stirling1).unwrap();
        assert!(a.iter().all(|v| *v == int(1)));
        let a = powers_of_g_coeffs(&vec![int(0); 5], GVariant::LambertW).unwrap();
        assert!(a.iter().all(Zero::is_zero));
    }

    #[test]
    fn rational_x_examples() {
        let exp = vec![int(1); 4];
        let a = rational_x1_coeffs(&exp, &int(-1)).unwrap();
        assert_eq!(a[1], int(1));
        assert_eq!(a[2], ratio(3, 2));
        let constant = vec![int(7), int(0), int(0), int(0)];
        assert_eq!(rational_x1_coeffs(&constant, &int(2)).unwrap(), constant);
        assert!(rational_x1_coeffs(&exp, &int(0)).is_err());
    }

    #[test]
    fn dirichlet_examples() {
        // f = x
        let mut c = vec![int(0); 21];
        c[1] = int(1);
        let g = dirichlet_coeffs(&c, DirichletVariant::G).unwrap();
        assert!(g[1..].iter().all(|v| *v == int(1)));
        let r1 = dirichlet_coeffs(&c, DirichletVariant::Rat1).unwrap();
        for n in 1..=20 {
            assert_eq!(r1[n], int(moebius(n as u64).unwrap() as i64));
        }
        let zero = vec![int(3), int(0), int(0), int(0)];
        for v in [DirichletVariant::G, DirichletVariant::Rat1, DirichletVariant::Rat2] {
            assert_eq!(dirichlet_coeffs(&zero, v).unwrap(), zero);
        }
    }

    #[test]
    fn dirichlet_matches_convolution_oracle() {
        let c: Vec<Rational> = (0..=30).map(|k| factorial(k) * ratio((k as i64 % 7) - 3, 5)).collect();
        let f: Vec<Rational> = (1..=30).map(|k| ratio((k as i64 % 7) - 3, 5)).collect();
        let mu: Vec<Rational> = (1..=30).map(|k| int(moebius(k).unwrap() as i64)).collect();
        let want = dirichlet_convolve(&mu, &f, 30);
        let got = dirichlet_coeffs(&c, DirichletVariant::Rat1).unwrap();
        assert_eq!(&got[1..], &want[..]);
    }
}
