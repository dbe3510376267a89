//! Polynomials in `sin t` and `cos t` with `sin²t` eliminated.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::exactnum::{ExactError, ParamRational, Rational};

use super::RingParams;

/// Exponent pair of one term, `sin^sin_deg · cos^cos_deg` with
/// `sin_deg ≤ 1` after reduction.
///
/// The ordering is the canonical term order — descending in `cos_deg`, then
/// descending in `sin_deg` — so that map iteration enumerates terms exactly
/// in display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrigExp {
    pub sin_deg: u32,
    pub cos_deg: u32,
}

impl Ord for TrigExp {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cos_deg
            .cmp(&self.cos_deg)
            .then(other.sin_deg.cmp(&self.sin_deg))
    }
}

impl PartialOrd for TrigExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `sin t`, `cos t` over the parameter field, kept in the
/// reduced normal form where every `sin²t` has been rewritten as
/// `1 − cos²t`, so the sine degree of each term is 0 or 1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigNum {
    terms: BTreeMap<TrigExp, ParamRational>,
}

impl TrigNum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ParamRational::one())
    }

    pub fn constant(c: ParamRational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn sin() -> Self {
        Self::monomial(1, 0, ParamRational::one())
    }

    pub fn cos() -> Self {
        Self::monomial(0, 1, ParamRational::one())
    }

    /// `coeff · sin^sin_deg · cos^cos_deg`, reducing the sine power eagerly.
    pub fn monomial(sin_deg: u32, cos_deg: u32, coeff: ParamRational) -> Self {
        let mut out = Self::zero();
        out.insert(sin_deg, cos_deg, coeff);
        out
    }

    /// Adds `coeff·s^e·c^k`, rewriting `s² → 1 − c²` until `e ≤ 1`.
    pub fn insert(&mut self, sin_deg: u32, cos_deg: u32, coeff: ParamRational) {
        if coeff.is_zero() {
            return;
        }
        let mut work = vec![(sin_deg, cos_deg, coeff)];
        while let Some((e, k, c)) = work.pop() {
            if e >= 2 {
                work.push((e - 2, k, c.clone()));
                work.push((e - 2, k + 2, -&c));
                continue;
            }
            let exp = TrigExp {
                sin_deg: e,
                cos_deg: k,
            };
            use std::collections::btree_map::Entry;
            match self.terms.entry(exp) {
                Entry::Vacant(slot) => {
                    slot.insert(c);
                }
                Entry::Occupied(mut slot) => {
                    let sum = &*slot.get() + &c;
                    if sum.is_zero() {
                        slot.remove();
                    } else {
                        *slot.get_mut() = sum;
                    }
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order (cos degree descending, sine degree
    /// descending).
    pub fn terms(&self) -> impl Iterator<Item = (&TrigExp, &ParamRational)> {
        self.terms.iter()
    }

    pub fn cos_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.cos_deg).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.sin_deg, e.cos_deg, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (le, lc) in &self.terms {
            for (re, rc) in &other.terms {
                out.insert(le.sin_deg + re.sin_deg, le.cos_deg + re.cos_deg, lc * rc);
            }
        }
        out
    }

    pub fn scale(&self, c: &ParamRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Exact `d/dt`: `(c^k)' = −k·s·c^{k−1}` and
    /// `(s·c^k)' = (k+1)·c^{k+1} − k·c^{k−1}` (already sine-reduced).
    pub fn ddt(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e.cos_deg;
            match e.sin_deg {
                0 => {
                    if k >= 1 {
                        out.insert(1, k - 1, c.scale(&Rational::from_integer((-(k as i64)).into())));
                    }
                }
                1 => {
                    out.insert(0, k + 1, c.scale(&Rational::from_integer(((k + 1) as i64).into())));
                    if k >= 1 {
                        out.insert(0, k - 1, c.scale(&Rational::from_integer((-(k as i64)).into())));
                    }
                }
                _ => unreachable!("sine degree reduced on construction"),
            }
        }
        out
    }

    /// Multiplies by `γ = a + r cos t`.
    pub fn mul_gamma(&self, params: &RingParams) -> Self {
        let mut out = self.scale(&params.a);
        for (e, c) in &self.terms {
            out.insert(e.sin_deg, e.cos_deg + 1, c * &params.r);
        }
        out
    }

    /// Splits into the sine-free part `A` and sine-linear part `B`
    /// (so that the value is `A(cos t) + sin t · B(cos t)`), each as a
    /// coefficient map keyed by cos degree.
    pub fn parts(&self) -> (BTreeMap<u32, ParamRational>, BTreeMap<u32, ParamRational>) {
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (e, c) in &self.terms {
            match e.sin_deg {
                0 => a.insert(e.cos_deg, c.clone()),
                _ => b.insert(e.cos_deg, c.clone()),
            };
        }
        (a, b)
    }

    /// Evaluates the two parts at a given value of `cos t`, returning
    /// `(A(c₀), B(c₀))`. With `c₀ = −a/r` this is the residue datum at the
    /// zero of `γ`: both vanish exactly when `γ` divides the numerator.
    pub fn parts_at(&self, c0: &ParamRational) -> (ParamRational, ParamRational) {
        let horner = |p: &BTreeMap<u32, ParamRational>| {
            let mut acc = ParamRational::zero();
            for (&k, coeff) in p.iter().rev() {
                // p is sparse; walk down from the top degree with explicit powers.
                let mut term = coeff.clone();
                for _ in 0..k {
                    term = &term * c0;
                }
                acc = &acc + &term;
            }
            acc
        };
        let (a, b) = self.parts();
        (horner(&a), horner(&b))
    }

    /// Exact division by `γ = a + r cos t`, or an error when not divisible.
    ///
    /// `γ` is sine-free, so the sine-free and sine-linear parts divide
    /// independently; each is a univariate synthetic division in `cos t`
    /// over the parameter field.
    pub fn div_gamma(&self, params: &RingParams) -> Result<Self, ExactError> {
        let divide_part = |part: &BTreeMap<u32, ParamRational>| -> Result<Vec<(u32, ParamRational)>, ExactError> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            let deg = *part.keys().next_back().unwrap() as usize;
            let mut dense = vec![ParamRational::zero(); deg + 1];
            for (&k, c) in part {
                dense[k as usize] = c.clone();
            }
            let mut quot = vec![ParamRational::zero(); deg.max(1)];
            let mut carry = dense;
            for k in (1..=deg).rev() {
                let q = &carry[k] / &params.r;
                carry[k - 1] = &carry[k - 1] - &(&q * &params.a);
                quot[k - 1] = q;
            }
            if !carry[0].is_zero() {
                return Err(ExactError::NotDivisible);
            }
            Ok(quot
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as u32, c))
                .collect())
        };
        let (a, b) = self.parts();
        let qa = divide_part(&a)?;
        let qb = divide_part(&b)?;
        let mut out = Self::zero();
        for (k, c) in qa {
            out.insert(0, k, c);
        }
        for (k, c) in qb {
            out.insert(1, k, c);
        }
        Ok(out)
    }

    /// Substitutes rational values for the parameters in every coefficient.
    pub fn instantiate(&self, a0: &Rational, r0: &Rational) -> Result<Self, ExactError> {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.insert(e.sin_deg, e.cos_deg, c.instantiate(a0, r0)?);
        }
        Ok(out)
    }

    pub fn evaluate_f64(&self, a: f64, r: f64, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        self.terms
            .iter()
            .map(|(e, v)| {
                v.evaluate_f64(a, r) * s.powi(e.sin_deg as i32) * c.powi(e.cos_deg as i32)
            })
            .sum()
    }
}

/// Renders with the numerator grammar (`s`, `c^k`, coefficients first);
/// identical to a pole-0 [`super::TrigPoly`].
impl fmt::Display for TrigNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::graded::render_level_terms(self, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int, ParamPoly};

    fn pr(n: i64) -> ParamRational {
        ParamRational::from_int(n)
    }

    #[test]
    fn sine_square_is_reduced_on_insert() {
        let s2 = TrigNum::monomial(2, 0, pr(1));
        let mut expect = TrigNum::one();
        expect.insert(0, 2, pr(-1));
        assert_eq!(s2, expect);
    }

    #[test]
    fn sin_times_sin() {
        let s = TrigNum::sin();
        let p = s.mul(&s);
        let mut expect = TrigNum::one();
        expect.insert(0, 2, pr(-1));
        assert_eq!(p, expect);
    }

    #[test]
    fn high_sine_powers_reduce_consistently() {
        // s^4 = (1 - c^2)^2 = 1 - 2c^2 + c^4.
        let s4 = TrigNum::monomial(4, 0, pr(1));
        let mut expect = TrigNum::one();
        expect.insert(0, 2, pr(-2));
        expect.insert(0, 4, pr(1));
        assert_eq!(s4, expect);
    }

    #[test]
    fn derivative_of_sin_and_cos() {
        assert_eq!(TrigNum::sin().ddt(), TrigNum::cos());
        assert_eq!(TrigNum::cos().ddt(), TrigNum::sin().neg());
    }

    #[test]
    fn derivative_is_a_leibniz_map_on_numerators() {
        let f = TrigNum::monomial(1, 2, pr(3));
        let g = TrigNum::monomial(0, 1, pr(-2)).add(&TrigNum::one());
        let lhs = f.mul(&g).ddt();
        let rhs = f.ddt().mul(&g).add(&f.mul(&g.ddt()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_division_round_trips() {
        let params = RingParams::symbolic();
        let f = TrigNum::monomial(1, 3, pr(5)).add(&TrigNum::monomial(0, 1, pr(-2)));
        let g = f.mul_gamma(&params);
        assert_eq!(g.div_gamma(&params).unwrap(), f);
    }

    #[test]
    fn gamma_division_rejects_non_multiples() {
        let params = RingParams::symbolic();
        assert_eq!(
            TrigNum::sin().div_gamma(&params).unwrap_err(),
            ExactError::NotDivisible
        );
        assert_eq!(
            TrigNum::one().div_gamma(&params).unwrap_err(),
            ExactError::NotDivisible
        );
    }

    #[test]
    fn residue_detects_divisibility() {
        let params = RingParams::symbolic();
        let root = params.gamma_root();
        let f = TrigNum::monomial(1, 1, pr(7)).add(&TrigNum::monomial(0, 2, pr(3)));
        let g = f.mul_gamma(&params);
        let (ga, gb) = g.parts_at(&root);
        assert!(ga.is_zero() && gb.is_zero());
        let (fa, fb) = f.parts_at(&root);
        assert!(!fa.is_zero() || !fb.is_zero());
    }

    #[test]
    fn instantiated_gamma_division_matches() {
        // (2 + cos t) divides out of (2 + cos t)·sin t at (a, r) = (2, 1).
        let params = RingParams::instantiated(rat_int(2), rat_int(1));
        let f = TrigNum::sin().mul_gamma(&params);
        assert_eq!(f.div_gamma(&params).unwrap(), TrigNum::sin());
    }

    #[test]
    fn term_order_is_cos_descending_then_sin_descending() {
        let mut f = TrigNum::zero();
        f.insert(0, 0, pr(1));
        f.insert(1, 2, pr(2));
        f.insert(0, 2, pr(3));
        f.insert(1, 0, pr(4));
        let order: Vec<(u32, u32)> = f.terms().map(|(e, _)| (e.sin_deg, e.cos_deg)).collect();
        assert_eq!(order, vec![(1, 2), (0, 2), (1, 0), (0, 0)]);
    }

    #[test]
    fn numeric_agreement_of_exact_ops() {
        let params = RingParams::symbolic();
        let f = TrigNum::monomial(1, 2, ParamRational::from_poly(ParamPoly::var_a()))
            .add(&TrigNum::monomial(0, 1, pr(-3)));
        let (a, r, t) = (2.0, 1.0, 0.7);
        let exact = f.mul_gamma(&params).evaluate_f64(a, r, t);
        let direct = f.evaluate_f64(a, r, t) * (a + r * t.cos());
        assert!((exact - direct).abs() < 1e-12 * direct.abs().max(1.0));
        let h = 1e-6;
        let fd = (f.evaluate_f64(a, r, t + h) - f.evaluate_f64(a, r, t - h)) / (2.0 * h);
        assert!((f.ddt().evaluate_f64(a, r, t) - fd).abs() < 1e-6);
    }

    #[test]
    fn scale_by_fraction() {
        let f = TrigNum::sin().scale(&ParamRational::from_rational(rat(1, 2)));
        let twice = f.add(&f);
        assert_eq!(twice, TrigNum::sin());
    }
}
