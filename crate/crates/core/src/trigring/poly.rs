//! The canonical trigonometric-rational form `num / γ^pole`.

use std::fmt;

use crate::exactnum::ParamRational;

use super::graded::GradedTrig;
use super::num::TrigNum;
use super::RingParams;

/// One input term for [`TrigPoly::normalize`]:
/// `coeff · sin^sin_deg t · cos^cos_deg t / γ^pole`.
#[derive(Debug, Clone)]
pub struct RawTerm {
    pub sin_deg: u32,
    pub cos_deg: u32,
    pub pole: u32,
    pub coeff: ParamRational,
}

impl RawTerm {
    pub fn new(sin_deg: u32, cos_deg: u32, pole: u32, coeff: ParamRational) -> Self {
        Self {
            sin_deg,
            cos_deg,
            pole,
            coeff,
        }
    }
}

/// An element of the quotient algebra in canonical form: a sine-reduced
/// numerator over the minimal power of `γ = a + r cos t`.
///
/// Minimality means `pole = 0` or the numerator is not exactly divisible by
/// `γ`; zero is represented as `(0, pole 0)`. Structural equality of
/// canonical forms then coincides with functional equality on the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    num: TrigNum,
    pole: u32,
}

impl TrigPoly {
    fn reduced(mut num: TrigNum, mut pole: u32, params: &RingParams) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        while pole > 0 {
            match num.div_gamma(params) {
                Ok(q) => {
                    num = q;
                    pole -= 1;
                }
                Err(_) => break,
            }
        }
        Self { num, pole }
    }

    pub fn zero() -> Self {
        Self {
            num: TrigNum::zero(),
            pole: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_num(TrigNum::one())
    }

    pub fn constant(c: ParamRational) -> Self {
        Self::from_num(TrigNum::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(ParamRational::from_int(n))
    }

    pub fn sin() -> Self {
        Self::from_num(TrigNum::sin())
    }

    pub fn cos() -> Self {
        Self::from_num(TrigNum::cos())
    }

    /// A pole-free element; already canonical.
    pub fn from_num(num: TrigNum) -> Self {
        Self { num, pole: 0 }
    }

    /// `γ` itself as a pole-free element.
    pub fn gamma(params: &RingParams) -> Self {
        Self::from_num(TrigNum::one().mul_gamma(params))
    }

    /// `1/γ^p`.
    pub fn gamma_inv(p: u32) -> Self {
        Self {
            num: TrigNum::one(),
            pole: p,
        }
    }

    /// A single monomial term brought to canonical form.
    pub fn term(sin_deg: u32, cos_deg: u32, pole: u32, coeff: ParamRational, params: &RingParams) -> Self {
        Self::reduced(TrigNum::monomial(sin_deg, cos_deg, coeff), pole, params)
    }

    /// Sums arbitrary raw terms over the common maximal pole and reduces to
    /// the minimal canonical form.
    pub fn normalize(raw: &[RawTerm], params: &RingParams) -> Self {
        let max_pole = raw.iter().map(|t| t.pole).max().unwrap_or(0);
        let mut num = TrigNum::zero();
        for t in raw {
            let mut lifted = TrigNum::monomial(t.sin_deg, t.cos_deg, t.coeff.clone());
            for _ in t.pole..max_pole {
                lifted = lifted.mul_gamma(params);
            }
            num = num.add(&lifted);
        }
        Self::reduced(num, max_pole, params)
    }

    pub fn num(&self) -> &TrigNum {
        &self.num
    }

    /// The minimal denominator exponent; 0 for zero by convention.
    pub fn pole_order(&self) -> u32 {
        self.pole
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self, params: &RingParams) -> Self {
        let common = self.pole.max(other.pole);
        let lift = |f: &Self| {
            let mut n = f.num.clone();
            for _ in f.pole..common {
                n = n.mul_gamma(params);
            }
            n
        };
        Self::reduced(lift(self).add(&lift(other)), common, params)
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            pole: self.pole,
        }
    }

    pub fn sub(&self, other: &Self, params: &RingParams) -> Self {
        self.add(&other.neg(), params)
    }

    pub fn mul(&self, other: &Self, params: &RingParams) -> Self {
        Self::reduced(self.num.mul(&other.num), self.pole + other.pole, params)
    }

    /// Scaling by a parameter-field constant; never changes the pole.
    pub fn scale(&self, c: &ParamRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            pole: self.pole,
        }
    }

    /// Exact `d/dt`, using `d(γ^{−p})/dt = p·r·sin t·γ^{−p−1}`:
    /// for `f = N/γ^p`, `f' = (N'·γ + p·r·sin t·N)/γ^{p+1}`.
    pub fn ddt(&self, params: &RingParams) -> Self {
        if self.pole == 0 {
            return Self::from_num(self.num.ddt());
        }
        let lifted = self.num.ddt().mul_gamma(params);
        let pole_term = TrigNum::sin()
            .mul(&self.num)
            .scale(&params.r)
            .scale(&ParamRational::from_int(self.pole as i64));
        Self::reduced(lifted.add(&pole_term), self.pole + 1, params)
    }

    /// `(A(c₀), B(c₀))` of the numerator at the zero `c₀ = −a/r` of `γ`.
    /// For a canonical form with `pole ≥ 1` these never both vanish.
    pub fn residue(&self, params: &RingParams) -> (ParamRational, ParamRational) {
        self.num.parts_at(&params.gamma_root())
    }

    /// Reciprocal, defined only when the element is a unit of the quotient
    /// algebra, i.e. a parameter-field multiple of a power of `γ`.
    pub fn recip(&self, params: &RingParams) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut n = self.num.clone();
        let mut gamma_deg = 0u32;
        while let Ok(q) = n.div_gamma(params) {
            n = q;
            gamma_deg += 1;
        }
        let (exp, coeff) = {
            let mut it = n.terms();
            let first = it.next()?;
            if it.next().is_some() {
                return None;
            }
            first
        };
        if exp.sin_deg != 0 || exp.cos_deg != 0 {
            return None;
        }
        let inv = &ParamRational::one() / coeff;
        // self = coeff · γ^gamma_deg / γ^pole, so 1/self = γ^(pole−gamma_deg)/coeff.
        if self.pole >= gamma_deg {
            let mut num = TrigNum::constant(inv);
            for _ in 0..(self.pole - gamma_deg) {
                num = num.mul_gamma(params);
            }
            Some(Self::from_num(num))
        } else {
            Some(Self {
                num: TrigNum::constant(inv),
                pole: gamma_deg - self.pole,
            })
        }
    }

    /// Substitutes concrete rational parameters and re-establishes the
    /// canonical form for the instantiated ring (the pole can drop at
    /// special parameter values).
    pub fn instantiate(&self, target: &RingParams) -> Result<Self, crate::exactnum::ExactError> {
        let a0 = target
            .a
            .to_rational()
            .expect("instantiate target must be a concrete ring");
        let r0 = target.r.to_rational().expect("instantiate target must be a concrete ring");
        Ok(Self::reduced(
            self.num.instantiate(&a0, &r0)?,
            self.pole,
            target,
        ))
    }

    /// The trivially graded view `{pole ↦ num}`.
    pub fn to_graded(&self) -> GradedTrig {
        let mut g = GradedTrig::zero();
        g.add_level(self.pole, self.num.clone());
        g
    }

    pub fn evaluate_f64(&self, a: f64, r: f64, t: f64) -> f64 {
        let gamma = a + r * t.cos();
        self.num.evaluate_f64(a, r, t) / gamma.powi(self.pole as i32)
    }
}

/// Renders via the graded grammar with a single level at the stored pole,
/// e.g. `1/r*s*c*g^-1` for `sin t cos t / (r γ)`.
impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_graded())
    }
}
