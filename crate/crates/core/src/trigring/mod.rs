//! Canonical arithmetic in the quotient algebra generated by `sin t`,
//! `cos t`, and `1/γ` with `γ = a + r cos t`, subject to
//! `sin²t = 1 − cos²t`, over the exact parameter field — plus exact
//! t-differentiation, pole-order extraction, a γ-graded presentation, and a
//! deterministic text rendering.

mod graded;
mod num;
mod phi;
mod poly;

pub use graded::GradedTrig;
pub use num::{TrigExp, TrigNum};
pub use phi::PhiHarmonic;
pub use poly::{RawTerm, TrigPoly};

use crate::exactnum::{ParamPoly, ParamRational, Rational};

/// The ring parameters `a` (distance to the axis) and `r` (tube radius)
/// that define `γ = a + r cos t`.
///
/// In the symbolic mode both are the free variables of the parameter field,
/// so every result holds for all admissible parameter values at once. In the
/// instantiated mode both are rational constants; the identical engine code
/// then runs over plain rationals, which is useful for spot checks but can
/// only lose (never gain) linear independence.
#[derive(Debug, Clone, PartialEq)]
pub struct RingParams {
    pub a: ParamRational,
    pub r: ParamRational,
}

impl RingParams {
    /// Fully symbolic parameters: results quantify over all `a > r > 0`.
    pub fn symbolic() -> Self {
        Self {
            a: ParamRational::from_poly(ParamPoly::var_a()),
            r: ParamRational::from_poly(ParamPoly::var_r()),
        }
    }

    /// Concrete rational parameters; requires `a > r > 0` so that the ring
    /// is an honest anchor ring and `γ` has no real zero.
    pub fn instantiated(a: Rational, r: Rational) -> Self {
        use num_traits::Zero;
        assert!(
            a > r && r > Rational::zero(),
            "anchor ring requires a > r > 0"
        );
        Self {
            a: ParamRational::from_rational(a),
            r: ParamRational::from_rational(r),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        !self.a.is_constant()
    }

    /// The value of `cos t` at which `γ` vanishes: `−a/r`. Residues of
    /// canonical numerators at this point witness pole minimality.
    pub fn gamma_root(&self) -> ParamRational {
        &(-&self.a) / &self.r
    }
}
