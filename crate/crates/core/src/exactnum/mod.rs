//! Exact scalar arithmetic: arbitrary-precision rationals, sparse
//! polynomials in the ring parameters `a` and `r`, their fraction field,
//! and fraction-free exact linear algebra.

mod linalg;
mod poly;
mod rational;

pub use linalg::{bareiss_rank, mat_vec, solve_linear, ParamMatrix};
pub use poly::ParamPoly;
pub use rational::ParamRational;

use thiserror::Error;

/// Exact rational scalar. `num_rational` keeps the canonical form this
/// crate relies on: reduced, denominator positive, zero as `0/1`.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotDivisible,
}

/// Multiplicative inverse with an explicit error on zero.
pub fn rat_inv(x: &Rational) -> Result<Rational, ExactError> {
    use num_traits::Zero;
    if x.is_zero() {
        Err(ExactError::DivisionByZero)
    } else {
        Ok(x.recip())
    }
}

/// `n/d` as a [`Rational`] from machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Integer `n` as a [`Rational`].
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn exact_fraction_addition() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
    }

    #[test]
    fn inverse_of_negative_fraction() {
        assert_eq!(rat_inv(&rat(-3, 4)).unwrap(), rat(-4, 3));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(rat_inv(&Rational::zero()), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn zero_is_additive_identity() {
        for (n, d) in [(7, 3), (-2, 9), (0, 1), (41, 13)] {
            let x = rat(n, d);
            assert_eq!(Rational::zero() + &x, x);
        }
    }
}
