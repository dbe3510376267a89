//! Fractions of parameter polynomials with a cheap canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ExactError, ParamPoly, Rational};

/// A ratio of two [`ParamPoly`]s, kept in a partially reduced normal form.
///
/// Full multivariate gcd is overkill here: coefficients in this calculus stay
/// small once the obvious common factors are stripped. Normalization removes
/// (1) the joint rational content, leaving coprime integer coefficients,
/// (2) any shared monomial `a^i r^j`, and (3) the denominator as a whole when
/// it divides the numerator exactly. The denominator's leading coefficient is
/// kept positive so equal values have equal representations in the common
/// cases, and a cross-multiplication `PartialEq` covers the rest.
#[derive(Debug, Clone)]
pub struct ParamRational {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamRational {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in ParamRational");
        let mut out = Self { num, den };
        out.normalize();
        out
    }

    pub fn zero() -> Self {
        Self {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self {
            num: ParamPoly::one(),
            den: ParamPoly::one(),
        }
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        Self {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(ParamPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value is a plain rational number, free of `a` and `r`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value as a plain rational, if it is parameter-free.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.num.constant_coeff() / self.den.constant_coeff())
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = ParamPoly::one();
            return;
        }
        // Shared monomial factor.
        let (na, nr) = self.num.monomial_content();
        let (da, dr) = self.den.monomial_content();
        let (ca, cr) = (na.min(da), nr.min(dr));
        if (ca, cr) != (0, 0) {
            self.num = self.num.div_monomial(ca, cr);
            self.den = self.den.div_monomial(ca, cr);
        }
        // Whole-denominator cancellation when exact.
        if let Ok(q) = self.num.exact_div(&self.den) {
            self.num = q;
            self.den = ParamPoly::one();
        }
        // Joint rational content: scale so both sides have coprime integer
        // coefficients overall.
        let (ng, nl) = self.num.integer_content();
        let (dg, dl) = self.den.integer_content();
        let gcd_num = ng.gcd(&dg);
        let lcm_den = nl.lcm(&dl);
        let scale = Rational::new(lcm_den, gcd_num);
        if !scale.is_one() {
            self.num = self.num.scale(&scale);
            self.den = self.den.scale(&scale);
        }
        // Positive leading coefficient downstairs.
        if self.den.leading_sign() < 0 {
            self.num = -&self.num;
            self.den = -&self.den;
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    /// Exact value at rational parameter values.
    pub fn evaluate_at(&self, a: &Rational, r: &Rational) -> Result<Rational, ExactError> {
        let d = self.den.evaluate_at(a, r);
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.num.evaluate_at(a, r) / d)
    }

    pub fn evaluate_f64(&self, a: f64, r: f64) -> f64 {
        self.num.evaluate_f64(a, r) / self.den.evaluate_f64(a, r)
    }

    /// Substitute fixed rational values for the parameters, yielding a
    /// constant. Used to run the whole engine in instantiated mode.
    pub fn instantiate(&self, a: &Rational, r: &Rational) -> Result<Self, ExactError> {
        Ok(Self::from_rational(self.evaluate_at(a, r)?))
    }

    /// Sign of the numerator's leading coefficient (the denominator's is
    /// positive by the normal form): -1, 0, or 1.
    pub fn leading_sign(&self) -> i32 {
        self.num.leading_sign()
    }

    /// The value with a positive leading sign; used to split a coefficient
    /// into sign and magnitude when rendering.
    pub fn abs_value(&self) -> Self {
        if self.leading_sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

impl PartialEq for ParamRational {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for ParamRational {}

impl Add for &ParamRational {
    type Output = ParamRational;
    fn add(self, rhs: Self) -> ParamRational {
        if self.den == rhs.den {
            return ParamRational::new(&self.num + &rhs.num, self.den.clone());
        }
        ParamRational::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &ParamRational {
    type Output = ParamRational;
    fn sub(self, rhs: Self) -> ParamRational {
        self + &(-rhs)
    }
}

impl Neg for &ParamRational {
    type Output = ParamRational;
    fn neg(self) -> ParamRational {
        ParamRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &ParamRational {
    type Output = ParamRational;
    fn mul(self, rhs: Self) -> ParamRational {
        ParamRational::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &ParamRational {
    type Output = ParamRational;
    fn div(self, rhs: Self) -> ParamRational {
        assert!(!rhs.is_zero(), "division by zero ParamRational");
        ParamRational::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

/// `num` when the denominator is 1, `num/den` otherwise; the denominator is
/// parenthesized unless it is a single bare atom.
impl fmt::Display for ParamRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == ParamPoly::one() {
            return write!(f, "{}", self.num);
        }
        let num_str = self.num.to_string();
        let den_str = self.den.to_string();
        let num_wrapped = if self.num.num_terms() > 1 {
            format!("({num_str})")
        } else {
            num_str
        };
        let den_is_atom = self.den.num_terms() == 1 && {
            let (&(da, dr), c) = self.den.terms().next().unwrap();
            // integer, or a power of one variable with unit coefficient
            (da == 0 && dr == 0 && c.denom() == &BigInt::one())
                || (c.is_one() && (da == 0) != (dr == 0))
        };
        let den_wrapped = if den_is_atom {
            den_str
        } else {
            format!("({den_str})")
        };
        write!(f, "{num_wrapped}/{den_wrapped}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    fn a() -> ParamRational {
        ParamRational::from_poly(ParamPoly::var_a())
    }
    fn r() -> ParamRational {
        ParamRational::from_poly(ParamPoly::var_r())
    }

    #[test]
    fn cancellation_of_common_factor() {
        // (a^2 - r^2)/(a + r) normalizes to a - r.
        let f = ParamRational::new(
            &(&ParamPoly::var_a() * &ParamPoly::var_a())
                - &(&ParamPoly::var_r() * &ParamPoly::var_r()),
            &ParamPoly::var_a() + &ParamPoly::var_r(),
        );
        assert_eq!(f, &a() - &r());
        assert_eq!(f.denom(), &ParamPoly::one());
    }

    #[test]
    fn cross_multiplied_equality() {
        // a/r == a^2/(a r) even though the representations differ.
        let lhs = &a() / &r();
        let rhs = ParamRational::new(
            ParamPoly::monomial(rat_int(1), 2, 0),
            ParamPoly::monomial(rat_int(1), 1, 1),
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn integer_content_is_stripped() {
        let f = ParamRational::new(
            ParamPoly::constant(rat(2, 3)).mul_monomial(1, 0),
            ParamPoly::constant(rat(4, 3)).mul_monomial(0, 1),
        );
        // 2/3 a over 4/3 r reduces to a / 2r.
        assert_eq!(f.to_string(), "a/(2*r)");
    }

    #[test]
    fn denominator_sign_is_positive() {
        let f = ParamRational::new(
            ParamPoly::var_a(),
            ParamPoly::constant(rat_int(-1)).mul_monomial(0, 1),
        );
        assert_eq!(f.to_string(), "-a/r");
    }

    #[test]
    fn constant_detection_and_extraction() {
        let half = &ParamRational::from_int(1) / &ParamRational::from_int(2);
        assert!(half.is_constant());
        assert_eq!(half.to_rational().unwrap(), rat(1, 2));
        assert!(a().to_rational().is_none());
    }

    #[test]
    fn arithmetic_round_trip_under_evaluation() {
        // (a/r + r/a) * a r == a^2 + r^2, checked at (a, r) = (7/2, 3).
        let f = &(&(&a() / &r()) + &(&r() / &a())) * &(&a() * &r());
        let av = rat(7, 2);
        let rv = rat_int(3);
        let lhs = f.evaluate_at(&av, &rv).unwrap();
        let rhs = &av * &av + &rv * &rv;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn instantiate_produces_plain_constant() {
        let f = &a() / &r();
        let g = f.instantiate(&rat_int(2), &rat_int(1)).unwrap();
        assert_eq!(g.to_rational().unwrap(), rat_int(2));
    }

    #[test]
    fn pole_evaluation_is_an_error_not_a_panic() {
        let f = &ParamRational::one() / &(&a() - &r());
        assert!(f.evaluate_at(&rat_int(1), &rat_int(1)).is_err());
    }
}
