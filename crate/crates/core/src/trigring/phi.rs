//! First φ-harmonics over the trigonometric ring: `f0 + fc·cos φ + fs·sin φ`.
//!
//! Every coordinate of the position vector and the Gauss map lives in this
//! three-channel space, and the Beltrami operator preserves it: the
//! t-derivatives act channelwise, while `∂²/∂φ²` acts as 0 on the `f0`
//! channel and as −1 on the `fc` and `fs` channels.

use std::fmt;

use crate::exactnum::ParamRational;

use super::poly::TrigPoly;
use super::RingParams;

#[derive(Debug, Clone, PartialEq)]
pub struct PhiHarmonic {
    pub f0: TrigPoly,
    pub fc: TrigPoly,
    pub fs: TrigPoly,
}

impl PhiHarmonic {
    pub fn new(f0: TrigPoly, fc: TrigPoly, fs: TrigPoly) -> Self {
        Self { f0, fc, fs }
    }

    pub fn zero() -> Self {
        Self::new(TrigPoly::zero(), TrigPoly::zero(), TrigPoly::zero())
    }

    /// A φ-independent function.
    pub fn from_f0(f0: TrigPoly) -> Self {
        Self::new(f0, TrigPoly::zero(), TrigPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.fc.is_zero() && self.fs.is_zero()
    }

    pub fn add(&self, other: &Self, params: &RingParams) -> Self {
        Self::new(
            self.f0.add(&other.f0, params),
            self.fc.add(&other.fc, params),
            self.fs.add(&other.fs, params),
        )
    }

    pub fn sub(&self, other: &Self, params: &RingParams) -> Self {
        Self::new(
            self.f0.sub(&other.f0, params),
            self.fc.sub(&other.fc, params),
            self.fs.sub(&other.fs, params),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.f0.neg(), self.fc.neg(), self.fs.neg())
    }

    pub fn scale(&self, c: &ParamRational) -> Self {
        Self::new(self.f0.scale(c), self.fc.scale(c), self.fs.scale(c))
    }

    /// Multiplies all channels by a φ-independent factor.
    pub fn scale_poly(&self, f: &TrigPoly, params: &RingParams) -> Self {
        Self::new(
            self.f0.mul(f, params),
            self.fc.mul(f, params),
            self.fs.mul(f, params),
        )
    }

    /// Channelwise `∂/∂t`.
    pub fn ddt(&self, params: &RingParams) -> Self {
        Self::new(
            self.f0.ddt(params),
            self.fc.ddt(params),
            self.fs.ddt(params),
        )
    }

    /// `∂/∂φ`: rotates the harmonic channels and kills `f0`.
    pub fn dphi(&self) -> Self {
        Self::new(TrigPoly::zero(), self.fs.clone(), self.fc.neg())
    }

    /// `∂²/∂φ²`: multiplies the harmonic channels by −1 and kills `f0`.
    pub fn dphi2(&self) -> Self {
        Self::new(TrigPoly::zero(), self.fc.neg(), self.fs.neg())
    }

    pub fn evaluate_f64(&self, a: f64, r: f64, t: f64, phi: f64) -> f64 {
        self.f0.evaluate_f64(a, r, t)
            + self.fc.evaluate_f64(a, r, t) * phi.cos()
            + self.fs.evaluate_f64(a, r, t) * phi.sin()
    }
}

/// Renders the three channels with explicit `cos(phi)` / `sin(phi)` markers.
impl fmt::Display for PhiHarmonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.f0.is_zero() {
            parts.push(self.f0.to_string());
        }
        if !self.fc.is_zero() {
            parts.push(format!("({})*cos(phi)", self.fc));
        }
        if !self.fs.is_zero() {
            parts.push(format!("({})*sin(phi)", self.fs));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
