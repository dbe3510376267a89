//! Sparse polynomials in the two ring parameters `a` and `r` over exact
//! rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactError, Rational};

/// A sparse polynomial in `a` and `r` with [`Rational`] coefficients.
///
/// Terms are keyed by the exponent pair `(deg_a, deg_r)`; the map order is
/// lexicographic on that pair, which fixes the canonical term order. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        Self { terms }
    }

    /// The parameter `a`.
    pub fn var_a() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    /// The parameter `r`.
    pub fn var_r() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `c * a^deg_a * r^deg_r`.
    pub fn monomial(c: Rational, deg_a: u32, deg_r: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg_a, deg_r), c);
        }
        Self { terms }
    }

    pub fn from_terms(raw: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = Self::zero();
        for (exp, c) in raw {
            p.add_term(exp, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&(0, 0)))
    }

    /// The constant term's coefficient (zero if absent).
    pub fn constant_coeff(&self) -> Rational {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree_a(&self) -> u32 {
        self.terms.keys().map(|&(da, _)| da).max().unwrap_or(0)
    }

    pub fn degree_r(&self) -> u32 {
        self.terms.keys().map(|&(_, dr)| dr).max().unwrap_or(0)
    }

    /// Leading exponent pair in lexicographic `(deg_a, deg_r)` order.
    pub fn leading_exp(&self) -> Option<(u32, u32)> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    fn add_term(&mut self, exp: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiply by the monomial `a^da * r^dr`.
    pub fn mul_monomial(&self, da: u32, dr: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(ea, er), v)| ((ea + da, er + dr), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division: returns the quotient iff `self = q * divisor`.
    ///
    /// Works by repeated cancellation of the leading term in lexicographic
    /// monomial order; the first step where the leading monomials do not
    /// divide proves non-divisibility.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, ExactError> {
        if divisor.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (dexp, dcoeff) = {
            let e = divisor.leading_exp().unwrap();
            (e, divisor.terms[&e].clone())
        };
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rexp) = rem.leading_exp() {
            if rexp.0 < dexp.0 || rexp.1 < dexp.1 {
                return Err(ExactError::NotDivisible);
            }
            let qexp = (rexp.0 - dexp.0, rexp.1 - dexp.1);
            let qcoeff = &rem.terms[&rexp] / &dcoeff;
            let step = Self::monomial(qcoeff, qexp.0, qexp.1);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Ok(quot)
    }

    /// Exact substitution of rational values for `a` and `r`.
    pub fn evaluate_at(&self, a: &Rational, r: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(da, dr), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..da {
                term *= a;
            }
            for _ in 0..dr {
                term *= r;
            }
            acc += term;
        }
        acc
    }

    pub fn evaluate_f64(&self, a: f64, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(da, dr), c)| {
                c.to_f64().unwrap_or(f64::NAN) * a.powi(da as i32) * r.powi(dr as i32)
            })
            .sum()
    }

    /// Componentwise minimum exponents over all terms: the monomial content.
    pub fn monomial_content(&self) -> (u32, u32) {
        let mut min_a = u32::MAX;
        let mut min_r = u32::MAX;
        for &(da, dr) in self.terms.keys() {
            min_a = min_a.min(da);
            min_r = min_r.min(dr);
        }
        if self.terms.is_empty() {
            (0, 0)
        } else {
            (min_a, min_r)
        }
    }

    /// Divide out `a^da * r^dr`; caller guarantees every term admits it.
    pub fn div_monomial(&self, da: u32, dr: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(ea, er), v)| ((ea - da, er - dr), v.clone()))
                .collect(),
        }
    }

    /// gcd of coefficient numerators and lcm of denominators, as a pair.
    /// Used to clear and reduce integer content across a fraction.
    pub fn integer_content(&self) -> (BigInt, BigInt) {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        (num_gcd, den_lcm)
    }

    /// Sign of the leading coefficient: -1, 0, or 1.
    pub fn leading_sign(&self) -> i32 {
        match self.leading_coeff() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            _ => -1,
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: Self) -> ParamPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: Self) -> ParamPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: Self) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (&(la, lr), lc) in &self.terms {
            for (&(ra, rr), rc) in &rhs.terms {
                out.add_term((la + ra, lr + rr), lc * rc);
            }
        }
        out
    }
}

/// Renders in descending lexicographic order (`a`-major), e.g. `a^2 - 2*a*r + r^2`.
impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&(da, dr), c)) in self.terms.iter().rev().enumerate() {
            let mut mag = c.abs().to_string();
            let mut factors = Vec::new();
            match da {
                0 => {}
                1 => factors.push("a".to_string()),
                _ => factors.push(format!("a^{da}")),
            }
            match dr {
                0 => {}
                1 => factors.push("r".to_string()),
                _ => factors.push(format!("r^{dr}")),
            }
            if !factors.is_empty() && mag == "1" {
                mag.clear();
            }
            let body = if factors.is_empty() {
                mag
            } else if mag.is_empty() {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    fn a() -> ParamPoly {
        ParamPoly::var_a()
    }
    fn r() -> ParamPoly {
        ParamPoly::var_r()
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&a() + &r()) * &(&a() - &r());
        let expect = &(&a() * &a()) - &(&r() * &r());
        assert_eq!(p, expect);
    }

    #[test]
    fn exact_division_recovers_factor() {
        let p = &(&a() * &a()) - &(&r() * &r());
        let q = p.exact_div(&(&a() + &r())).unwrap();
        assert_eq!(q, &a() - &r());
    }

    #[test]
    fn non_divisible_is_signalled_not_crashed() {
        let p = &(&a() * &a()) - &(&r() * &r());
        let err = p.exact_div(&(&a() + &ParamPoly::one())).unwrap_err();
        assert_eq!(err, ExactError::NotDivisible);
    }

    #[test]
    fn division_by_zero_polynomial() {
        assert_eq!(
            a().exact_div(&ParamPoly::zero()).unwrap_err(),
            ExactError::DivisionByZero
        );
    }

    #[test]
    fn evaluation() {
        let p = &(&a() * &a()) - &(&r() * &r());
        assert_eq!(p.evaluate_at(&rat_int(2), &rat_int(1)), rat_int(3));
        assert_eq!(p.evaluate_at(&rat(1, 2), &rat(1, 2)), rat_int(0));
    }

    #[test]
    fn display_order_is_a_major() {
        let p = ParamPoly::from_terms([
            ((2, 0), rat_int(1)),
            ((1, 1), rat_int(-2)),
            ((0, 2), rat_int(1)),
        ]);
        assert_eq!(p.to_string(), "a^2 - 2*a*r + r^2");
    }

    #[test]
    fn monomial_content_and_removal() {
        let p = ParamPoly::from_terms([((2, 1), rat_int(4)), ((1, 3), rat_int(-2))]);
        assert_eq!(p.monomial_content(), (1, 1));
        let q = p.div_monomial(1, 1);
        assert_eq!(q.leading_exp(), Some((1, 0)));
    }
}
