//! Special sequences and functions used by the coefficient formulas.
//!
//! Combinatorial tables are exact [`Rational`](crate::Rational)s; only the
//! Bessel and Lambert W functions work in floating point.

mod arith;
mod bessel;
mod combinatorics;
mod lambert;

pub use arith::{dirichlet_convolve, dirichlet_inverse, factorize, moebius, nu, sin_half_pi};
pub use bessel::{bessel_j, bessel_j0_derivatives};
pub use combinatorics::{
    bell_number, bernoulli_numbers, bernoulli_poly, binomial, binomial_general,
    binomial_rational, central_factorial_abs, central_factorial_row, gen_pow, legendre_coeffs,
    stirling1_unsigned, stirling1_unsigned_rows, stirling2, SeqKind, SeqTable,
};
pub use lambert::lambert_w0;
