//! Floating-point cross-checks for the exact engine: finite-difference
//! application of the surface operator, adjudication between competing
//! closed forms, and convergence-order diagnostics.
//!
//! Nothing in this module feeds back into the exact computation; it exists
//! to give every symbolic identity an independent numerical witness and to
//! settle printed-coefficient disputes by measurement.

use thiserror::Error;

use crate::surface::DiffOp;
use crate::trigring::PhiHarmonic;

#[derive(Debug, Error, PartialEq)]
pub enum NumericError {
    /// The anchor-ring geometry requires `a > r > 0`.
    #[error("inadmissible ring parameters: a = {a}, r = {r} (need a > r > 0)")]
    InadmissibleParams { a: f64, r: f64 },
}

/// One admissible evaluation point `(a, r, t, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub a: f64,
    pub r: f64,
    pub t: f64,
    pub phi: f64,
}

impl EvalPoint {
    pub fn new(a: f64, r: f64, t: f64, phi: f64) -> Result<Self, NumericError> {
        if !(a > r && r > 0.0) {
            return Err(NumericError::InadmissibleParams { a, r });
        }
        Ok(EvalPoint { a, r, t, phi })
    }

    /// `γ = a + r cos t` at this point.
    pub fn gamma(&self) -> f64 {
        self.a + self.r * self.t.cos()
    }
}

/// The documented sample set used throughout the reports: five profile
/// angles spread over both signs of `cos t`, at `φ = 0` on the ring
/// `(a, r) = (2, 1)`.
pub fn standard_points() -> Vec<EvalPoint> {
    use std::f64::consts::PI;
    [PI / 5.0, PI / 4.0, 2.0 * PI / 5.0, 3.0 * PI / 5.0, 7.0 * PI / 10.0]
        .into_iter()
        .map(|t| EvalPoint::new(2.0, 1.0, t, 0.0).expect("admissible by construction"))
        .collect()
}

/// Default central-difference step for adjudication runs.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Default adjudication tolerance on the maximal absolute deviation.
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// Evaluates a φ-harmonic value at a point. Term evaluation follows the
/// canonical map order, so results are bit-deterministic across runs.
pub fn eval_phi(f: &PhiHarmonic, p: &EvalPoint) -> f64 {
    f.evaluate_f64(p.a, p.r, p.t, p.phi)
}

/// Applies the operator to a black-box function by second-order central
/// differences in `t` and `φ`, with the operator's exact coefficient values
/// at the point.
pub fn fd_apply(op: &DiffOp, f: &dyn Fn(f64, f64) -> f64, p: &EvalPoint, h: f64) -> f64 {
    let att = op.a_tt.evaluate_f64(p.a, p.r, p.t);
    let at = op.a_t.evaluate_f64(p.a, p.r, p.t);
    let app = op.a_pp.evaluate_f64(p.a, p.r, p.t);
    let d2t = (f(p.t + h, p.phi) - 2.0 * f(p.t, p.phi) + f(p.t - h, p.phi)) / (h * h);
    let dt = (f(p.t + h, p.phi) - f(p.t - h, p.phi)) / (2.0 * h);
    let d2p = (f(p.t, p.phi + h) - 2.0 * f(p.t, p.phi) + f(p.t, p.phi - h)) / (h * h);
    att * d2t + at * dt + app * d2p
}

/// One Richardson extrapolation step over `fd_apply`: cancels the leading
/// `h²` error term, giving a fourth-order reference value.
pub fn fd_apply_refined(op: &DiffOp, f: &dyn Fn(f64, f64) -> f64, p: &EvalPoint, h: f64) -> f64 {
    (4.0 * fd_apply(op, f, p, h / 2.0) - fd_apply(op, f, p, h)) / 3.0
}

/// Observed convergence order of the central-difference application against
/// a known exact value: `log₂(err(h)/err(h/2))`. Returns `+∞` when the
/// refined error is exactly zero (the stencil is exact on the input).
pub fn convergence_order(
    op: &DiffOp,
    f: &dyn Fn(f64, f64) -> f64,
    exact: f64,
    p: &EvalPoint,
    h: f64,
) -> f64 {
    let coarse = (fd_apply(op, f, p, h) - exact).abs();
    let fine = (fd_apply(op, f, p, h / 2.0) - exact).abs();
    if fine == 0.0 {
        f64::INFINITY
    } else {
        (coarse / fine).log2()
    }
}

/// Per-candidate adjudication data.
#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub label: String,
    /// Exact evaluations of the candidate at each sample point.
    pub values: Vec<f64>,
    /// Maximal absolute deviation from the finite-difference reference.
    pub max_deviation: f64,
    pub within_tolerance: bool,
}

/// The full adjudication record: reference values, per-candidate deviations,
/// and the verdict. `winner == None` means the run was inconclusive — no
/// candidate stayed within tolerance — which is a first-class outcome, not
/// an error.
#[derive(Debug, Clone)]
pub struct FDReport {
    pub points: Vec<EvalPoint>,
    pub h: f64,
    pub tolerance: f64,
    pub reference: Vec<f64>,
    pub rows: Vec<CandidateReport>,
    pub winner: Option<String>,
}

/// Adjudicates between competing closed forms for the operator applied to
/// `prev`: the finite-difference application of `op` to the exact `prev` is
/// the referee, and each candidate is evaluated exactly at every point.
///
/// The winner is the candidate with the smallest maximal deviation among
/// those within tolerance; exact ties go to the earlier label in the input
/// order. At least five sample points are required.
pub fn adjudicate(
    op: &DiffOp,
    prev: &PhiHarmonic,
    candidates: &[(String, PhiHarmonic)],
    points: &[EvalPoint],
    h: f64,
    tolerance: f64,
) -> FDReport {
    assert!(
        points.len() >= 5,
        "adjudication requires at least five sample points"
    );
    let reference: Vec<f64> = points
        .iter()
        .map(|p| {
            let f = |t: f64, phi: f64| prev.evaluate_f64(p.a, p.r, t, phi);
            fd_apply_refined(op, &f, p, h)
        })
        .collect();
    let rows: Vec<CandidateReport> = candidates
        .iter()
        .map(|(label, value)| {
            let values: Vec<f64> = points.iter().map(|p| eval_phi(value, p)).collect();
            let max_deviation = values
                .iter()
                .zip(&reference)
                .map(|(v, r)| (v - r).abs())
                .fold(0.0f64, f64::max);
            CandidateReport {
                label: label.clone(),
                values,
                max_deviation,
                within_tolerance: max_deviation < tolerance,
            }
        })
        .collect();
    let winner = rows
        .iter()
        .filter(|r| r.within_tolerance)
        .min_by(|x, y| {
            x.max_deviation
                .partial_cmp(&y.max_deviation)
                .expect("deviations are finite")
        })
        .map(|r| r.label.clone());
    FDReport {
        points: points.to_vec(),
        h,
        tolerance,
        reference,
        rows,
        winner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat_int, ParamRational};
    use crate::finitetype::iterate;
    use crate::surface::build_anchor_ring;
    use crate::trigring::{RingParams, TrigPoly};
    use std::f64::consts::PI;

    fn instantiated_ctx() -> crate::surface::SurfaceContext {
        build_anchor_ring(RingParams::instantiated(rat_int(2), rat_int(1)))
    }

    #[test]
    fn gamma_at_the_inner_equator_top() {
        let p = EvalPoint::new(2.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.gamma(), 3.0);
    }

    #[test]
    fn inadmissible_parameters_are_rejected() {
        assert_eq!(
            EvalPoint::new(1.0, 2.0, 0.0, 0.0).unwrap_err(),
            NumericError::InadmissibleParams { a: 1.0, r: 2.0 }
        );
        assert!(EvalPoint::new(2.0, -1.0, 0.0, 0.0).is_err());
        assert!(EvalPoint::new(2.0, 2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn first_iterate_value_at_the_crown() {
        // Δn₃ = −sin t/r² − sin t cos t/(rγ) evaluates to −1 at t = π/2 on
        // the (2, 1) ring.
        let c = instantiated_ctx();
        let v = c.laplacian.apply(&c.gauss[2], &c.params);
        let p = EvalPoint::new(2.0, 1.0, PI / 2.0, 0.0).unwrap();
        assert!((eval_phi(&v, &p) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn stencil_annihilates_constants() {
        let c = instantiated_ctx();
        let f = |_: f64, _: f64| 42.0;
        for p in standard_points() {
            assert!(fd_apply(&c.laplacian, &f, &p, 1e-3).abs() < 1e-12);
        }
    }

    #[test]
    fn adjudication_settles_the_second_iterate_coefficient() {
        let c = instantiated_ctx();
        let trace = iterate(
            &c.laplacian,
            &c.gauss[2],
            "n3",
            0,
            2,
            200_000,
            &c.params,
        )
        .unwrap();
        let prev = trace.entries[1].value.clone();
        let engine = trace.entries[2].value.clone();
        // The published second iterate differs only in the γ³ coefficient:
        // −3·sin³t cos t/(rγ³) in place of the derived +1, i.e. an offset of
        // −4·sin³t cos t/(rγ³).
        let inv_r = &ParamRational::one() / &c.params.r;
        let offset = TrigPoly::term(3, 1, 3, (&inv_r).scale(&rat_int(-4)), &c.params);
        let published = crate::trigring::PhiHarmonic::from_f0(
            engine.f0.add(&offset, &c.params),
        );
        let candidates = vec![
            ("engine".to_string(), engine.clone()),
            ("published".to_string(), published),
        ];
        let report = adjudicate(
            &c.laplacian,
            &prev,
            &candidates,
            &standard_points(),
            DEFAULT_FD_STEP,
            DEFAULT_TOLERANCE,
        );
        assert_eq!(report.winner.as_deref(), Some("engine"));
        assert!(report.rows[0].within_tolerance);
        assert!(!report.rows[1].within_tolerance);

        // Frozen reference values of the finite-difference referee.
        let frozen = [
            -1.355029792503,
            -1.569756288270,
            -1.693145620764,
            -0.374356129766,
            0.778898026195,
        ];
        for (got, want) in report.reference.iter().zip(frozen) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }

        // The exact engine value at t = π/4 in closed form.
        let p = EvalPoint::new(2.0, 1.0, PI / 4.0, 0.0).unwrap();
        let golden = (-496.0 - 30.0 * 2.0f64.sqrt()) / 343.0;
        assert!((eval_phi(&engine, &p) - golden).abs() < 1e-12);
        assert!((golden - (-1.5697562882542067)).abs() < 1e-15);
    }

    #[test]
    fn adjudication_is_stable_under_candidate_permutation() {
        let c = instantiated_ctx();
        let trace = iterate(&c.laplacian, &c.gauss[2], "n3", 0, 2, 200_000, &c.params).unwrap();
        let prev = trace.entries[1].value.clone();
        let engine = trace.entries[2].value.clone();
        let inv_r = &ParamRational::one() / &c.params.r;
        let offset = TrigPoly::term(3, 1, 3, (&inv_r).scale(&rat_int(-4)), &c.params);
        let published =
            crate::trigring::PhiHarmonic::from_f0(engine.f0.add(&offset, &c.params));
        let forward = vec![
            ("engine".to_string(), engine.clone()),
            ("published".to_string(), published.clone()),
        ];
        let backward = vec![
            ("published".to_string(), published),
            ("engine".to_string(), engine),
        ];
        let pts = standard_points();
        let a = adjudicate(&c.laplacian, &prev, &forward, &pts, DEFAULT_FD_STEP, DEFAULT_TOLERANCE);
        let b = adjudicate(&c.laplacian, &prev, &backward, &pts, DEFAULT_FD_STEP, DEFAULT_TOLERANCE);
        assert_eq!(a.winner, b.winner);
    }

    #[test]
    fn tie_break_prefers_the_first_label() {
        let c = instantiated_ctx();
        let trace = iterate(&c.laplacian, &c.gauss[2], "n3", 0, 2, 200_000, &c.params).unwrap();
        let prev = trace.entries[1].value.clone();
        let engine = trace.entries[2].value.clone();
        let candidates = vec![
            ("alpha".to_string(), engine.clone()),
            ("beta".to_string(), engine),
        ];
        let report = adjudicate(
            &c.laplacian,
            &prev,
            &candidates,
            &standard_points(),
            DEFAULT_FD_STEP,
            DEFAULT_TOLERANCE,
        );
        assert_eq!(report.winner.as_deref(), Some("alpha"));
    }

    #[test]
    fn stencil_converges_at_second_order() {
        let c = instantiated_ctx();
        let trace = iterate(&c.laplacian, &c.gauss[2], "n3", 0, 2, 200_000, &c.params).unwrap();
        let prev = trace.entries[1].value.clone();
        let exact_next = trace.entries[2].value.clone();
        let p = EvalPoint::new(2.0, 1.0, PI / 4.0, 0.0).unwrap();
        let f = |t: f64, phi: f64| prev.evaluate_f64(p.a, p.r, t, phi);
        let exact = eval_phi(&exact_next, &p);
        let order = convergence_order(&c.laplacian, &f, exact, &p, 1e-2);
        assert!(
            (1.7..=2.3).contains(&order),
            "observed order {order} outside the second-order window"
        );
    }

    #[test]
    fn evaluation_is_deterministic_across_runs() {
        let c = instantiated_ctx();
        let v = c.laplacian.apply(&c.gauss[2], &c.params);
        let p = EvalPoint::new(2.0, 1.0, 0.83, 0.31).unwrap();
        let first = eval_phi(&v, &p);
        for _ in 0..10 {
            assert_eq!(eval_phi(&v, &p).to_bits(), first.to_bits());
        }
    }
}
