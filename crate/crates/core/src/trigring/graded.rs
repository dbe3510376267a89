//! The γ-graded presentation of ring elements and the deterministic text
//! rendering shared by all symbolic output.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactnum::{ParamPoly, ParamRational};

use super::num::TrigNum;
use super::poly::{RawTerm, TrigPoly};
use super::RingParams;

/// A sum `Σ_p D_p / γ^p` with one sine-reduced numerator per pole level.
///
/// Unlike [`TrigPoly`], levels are kept separate rather than brought over a
/// common denominator; this is the shape in which iterated operators
/// naturally produce their output (lower-level terms feed higher levels),
/// and the shape in which results are displayed. [`GradedTrig::flatten`]
/// recovers the canonical form, and the two presentations are checked
/// against each other wherever both are computed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradedTrig {
    levels: BTreeMap<u32, TrigNum>,
}

impl GradedTrig {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Adds `num / γ^pole` into the level map.
    pub fn add_level(&mut self, pole: u32, num: TrigNum) {
        if num.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.levels.entry(pole) {
            Entry::Vacant(slot) => {
                slot.insert(num);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&num);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    /// Levels in ascending pole order.
    pub fn levels(&self) -> impl Iterator<Item = (&u32, &TrigNum)> {
        self.levels.iter()
    }

    pub fn level(&self, pole: u32) -> Option<&TrigNum> {
        self.levels.get(&pole)
    }

    pub fn max_pole(&self) -> u32 {
        self.levels.keys().next_back().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, d) in &other.levels {
            out.add_level(p, d.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            levels: self.levels.iter().map(|(&p, d)| (p, d.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &ParamRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            levels: self.levels.iter().map(|(&p, d)| (p, d.scale(c))).collect(),
        }
    }

    /// Multiplies every level by a canonical element (`num/γ^q` shifts a
    /// level at `p` to `p + q`). Levels are not re-minimized: the graded
    /// presentation records what the operator application produced.
    pub fn mul_poly(&self, f: &TrigPoly) -> Self {
        let mut out = Self::zero();
        for (&p, d) in &self.levels {
            out.add_level(p + f.pole_order(), d.mul(f.num()));
        }
        out
    }

    /// Graded exact `d/dt`: a level `D/γ^p` contributes `D'` at `p` and
    /// `p·r·sin t·D` at `p + 1`.
    pub fn ddt(&self, params: &RingParams) -> Self {
        let mut out = Self::zero();
        for (&p, d) in &self.levels {
            out.add_level(p, d.ddt());
            if p > 0 {
                let shifted = TrigNum::sin()
                    .mul(d)
                    .scale(&params.r)
                    .scale(&ParamRational::from_int(p as i64));
                out.add_level(p + 1, shifted);
            }
        }
        out
    }

    /// Collapses to the canonical single-denominator form.
    pub fn flatten(&self, params: &RingParams) -> TrigPoly {
        let mut raw = Vec::new();
        for (&p, d) in &self.levels {
            for (e, c) in d.terms() {
                raw.push(RawTerm::new(e.sin_deg, e.cos_deg, p, c.clone()));
            }
        }
        TrigPoly::normalize(&raw, params)
    }

    pub fn evaluate_f64(&self, a: f64, r: f64, t: f64) -> f64 {
        let gamma = a + r * t.cos();
        self.levels
            .iter()
            .map(|(&p, d)| d.evaluate_f64(a, r, t) / gamma.powi(p as i32))
            .sum()
    }
}

/// One rendered term: its sign and the signless body.
fn term_strings(num: &TrigNum, pole: u32, out: &mut Vec<(bool, String)>) {
    for (exp, coeff) in num.terms() {
        let negative = coeff.leading_sign() < 0;
        let mag = coeff.abs_value();
        let mut factors: Vec<String> = Vec::new();
        if exp.sin_deg == 1 {
            factors.push("s".to_string());
        }
        match exp.cos_deg {
            0 => {}
            1 => factors.push("c".to_string()),
            k => factors.push(format!("c^{k}")),
        }
        if pole > 0 {
            factors.push(format!("g^-{pole}"));
        }
        let mag_str = if mag == ParamRational::one() && !factors.is_empty() {
            String::new()
        } else {
            // A bare polynomial sum needs parentheses when used as a factor.
            let rendered = mag.to_string();
            if mag.denom() == &ParamPoly::one() && mag.numer().num_terms() > 1 {
                format!("({rendered})")
            } else {
                rendered
            }
        };
        let body = if factors.is_empty() {
            mag_str
        } else if mag_str.is_empty() {
            factors.join("*")
        } else {
            format!("{}*{}", mag_str, factors.join("*"))
        };
        out.push((negative, body));
    }
}

fn join_terms(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                s.push('-');
            }
        } else if *neg {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        s.push_str(body);
    }
    s
}

/// Renders a single level, used by the [`TrigNum`] display.
pub(crate) fn render_level_terms(num: &TrigNum, pole: u32) -> String {
    let mut terms = Vec::new();
    term_strings(num, pole, &mut terms);
    join_terms(&terms)
}

/// Levels ascending by pole; `s` = sin t, `c` = cos t, `g` = γ,
/// e.g. `-1/r^2*s - 1/r*s*c*g^-1`.
impl fmt::Display for GradedTrig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (&p, d) in &self.levels {
            term_strings(d, p, &mut terms);
        }
        write!(f, "{}", join_terms(&terms))
    }
}
