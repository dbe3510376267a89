//! The anchor-ring geometry: parametrization, metric, curvatures, Gauss map,
//! the Beltrami operator of the induced metric, and the structural identities
//! relating them.
//!
//! The surface is `x(t, φ) = (γ cos φ, γ sin φ, r sin t)` with
//! `γ = a + r cos t` and `a > r > 0`; its first fundamental form is
//! `I = r² dt² + γ² dφ²`. With the sign convention
//! `Δ = −(1/√g) ∂_j(√g g^{ij} ∂_i)`, the Beltrami operator is
//! `Δ = −(1/γ²) ∂²/∂φ² + (sin t/(rγ)) ∂/∂t − (1/r²) ∂²/∂t²`.

use crate::exactnum::ParamRational;
use crate::trigring::{GradedTrig, PhiHarmonic, RawTerm, RingParams, TrigPoly};

/// A second-order operator `L = a_tt·∂²/∂t² + a_t·∂/∂t + a_pp·∂²/∂φ²` with
/// φ-independent coefficients, acting on the φ-harmonic space.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    pub a_tt: TrigPoly,
    pub a_t: TrigPoly,
    pub a_pp: TrigPoly,
}

impl DiffOp {
    pub fn new(a_tt: TrigPoly, a_t: TrigPoly, a_pp: TrigPoly) -> Self {
        Self { a_tt, a_t, a_pp }
    }

    /// The anchor-ring Beltrami operator
    /// `−(1/r²)∂²/∂t² + (sin t/(rγ))∂/∂t − (1/γ²)∂²/∂φ²`.
    pub fn anchor_ring(params: &RingParams) -> Self {
        let inv_r = &ParamRational::one() / &params.r;
        Self::new(
            TrigPoly::constant(-&(&inv_r * &inv_r)),
            TrigPoly::term(1, 0, 1, inv_r, params),
            TrigPoly::gamma_inv(2).neg(),
        )
    }

    /// The diagnostic operator `−(1/r²)∂²/∂t²`, whose action on
    /// trigonometric targets is diagonal; used as a positive control for the
    /// annihilator search.
    pub fn flat_t_second_derivative(params: &RingParams) -> Self {
        let inv_r = &ParamRational::one() / &params.r;
        Self::new(
            TrigPoly::constant(-&(&inv_r * &inv_r)),
            TrigPoly::zero(),
            TrigPoly::zero(),
        )
    }

    /// Applies the operator to one channel on which `∂²/∂φ²` acts as
    /// multiplication by `phi_eigen` (0 for the φ-independent channel, −1
    /// for the `cos φ` / `sin φ` channels).
    pub fn apply_channel(&self, f: &TrigPoly, phi_eigen: i64, params: &RingParams) -> TrigPoly {
        let d1 = f.ddt(params);
        let d2 = d1.ddt(params);
        let mut out = self
            .a_tt
            .mul(&d2, params)
            .add(&self.a_t.mul(&d1, params), params);
        if phi_eigen != 0 {
            out = out.add(
                &self
                    .a_pp
                    .mul(f, params)
                    .scale(&ParamRational::from_int(phi_eigen)),
                params,
            );
        }
        out
    }

    /// Applies the operator to a φ-harmonic function channelwise.
    pub fn apply(&self, f: &PhiHarmonic, params: &RingParams) -> PhiHarmonic {
        PhiHarmonic::new(
            self.apply_channel(&f.f0, 0, params),
            self.apply_channel(&f.fc, -1, params),
            self.apply_channel(&f.fs, -1, params),
        )
    }

    /// The graded counterpart of [`DiffOp::apply_channel`]: levels are
    /// produced by the natural per-level action and never re-minimized, so
    /// the output records the per-pole structure of the application.
    pub fn apply_channel_graded(
        &self,
        f: &GradedTrig,
        phi_eigen: i64,
        params: &RingParams,
    ) -> GradedTrig {
        let d1 = f.ddt(params);
        let d2 = d1.ddt(params);
        let mut out = d2.mul_poly(&self.a_tt).add(&d1.mul_poly(&self.a_t));
        if phi_eigen != 0 {
            out = out.add(
                &f.mul_poly(&self.a_pp)
                    .scale(&ParamRational::from_int(phi_eigen)),
            );
        }
        out
    }
}

/// The fully built anchor-ring context: parametrization, Gauss map, metric,
/// curvatures, and the Beltrami operator, all over one parameter mode.
#[derive(Debug, Clone)]
pub struct SurfaceContext {
    pub params: RingParams,
    /// `x = (γ cos φ, γ sin φ, r sin t)`.
    pub position: [PhiHarmonic; 3],
    /// `n = (−cos t cos φ, −cos t sin φ, −sin t)`, the normalized
    /// `x_t × x_φ` for this parametrization.
    pub gauss: [PhiHarmonic; 3],
    /// First fundamental form `I = g_tt dt² + g_φφ dφ²` (the off-diagonal
    /// coefficient vanishes identically).
    pub g_tt: TrigPoly,
    pub g_phiphi: TrigPoly,
    /// Mean curvature `H = (a + 2r cos t)/(2rγ)`.
    pub mean_curvature: TrigPoly,
    /// Gauss curvature `K = cos t/(rγ)`.
    pub gauss_curvature: TrigPoly,
    /// The Beltrami operator of the induced metric.
    pub laplacian: DiffOp,
}

/// Builds the anchor ring over the given parameter mode (symbolic or
/// instantiated).
pub fn build_anchor_ring(params: RingParams) -> SurfaceContext {
    let p = &params;
    let gamma = TrigPoly::gamma(p);
    let position = [
        PhiHarmonic::new(TrigPoly::zero(), gamma.clone(), TrigPoly::zero()),
        PhiHarmonic::new(TrigPoly::zero(), TrigPoly::zero(), gamma.clone()),
        PhiHarmonic::from_f0(TrigPoly::sin().scale(&p.r)),
    ];
    let gauss = [
        PhiHarmonic::new(TrigPoly::zero(), TrigPoly::cos().neg(), TrigPoly::zero()),
        PhiHarmonic::new(TrigPoly::zero(), TrigPoly::zero(), TrigPoly::cos().neg()),
        PhiHarmonic::from_f0(TrigPoly::sin().neg()),
    ];
    let g_tt = TrigPoly::constant(&p.r * &p.r);
    let g_phiphi = gamma.mul(&gamma, p);
    let half_a_over_r = &p.a / &(&p.r + &p.r);
    let mean_curvature = TrigPoly::normalize(
        &[
            RawTerm::new(0, 0, 1, half_a_over_r),
            RawTerm::new(0, 1, 1, ParamRational::one()),
        ],
        p,
    );
    let gauss_curvature = TrigPoly::term(0, 1, 1, &ParamRational::one() / &p.r, p);
    let laplacian = DiffOp::anchor_ring(p);
    SurfaceContext {
        params,
        position,
        gauss,
        g_tt,
        g_phiphi,
        mean_curvature,
        gauss_curvature,
        laplacian,
    }
}

/// Derives the Beltrami operator from the general orthogonal-metric formula
/// `Δ = −(1/√g) [∂_t(√g g^{tt} ∂_t) + ∂_φ(√g g^{φφ} ∂_φ)]` given the two
/// diagonal metric coefficients and the area element `√g`.
///
/// Returns `None` when `√g² ≠ g_tt·g_φφ` or when a required reciprocal does
/// not exist in the algebra. For the anchor ring this reproduces the stored
/// operator coefficients exactly.
pub fn derive_from_metric(
    g_tt: &TrigPoly,
    g_phiphi: &TrigPoly,
    sqrt_g: &TrigPoly,
    params: &RingParams,
) -> Option<DiffOp> {
    if sqrt_g.mul(sqrt_g, params) != g_tt.mul(g_phiphi, params) {
        return None;
    }
    let inv_g_tt = g_tt.recip(params)?;
    let inv_g_phiphi = g_phiphi.recip(params)?;
    let inv_sqrt_g = sqrt_g.recip(params)?;
    let a_tt = inv_g_tt.neg();
    // −(1/√g)·d/dt(√g/g_tt); the metric is φ-independent so the φ branch
    // contributes no first-order term.
    let a_t = inv_sqrt_g
        .mul(&sqrt_g.mul(&inv_g_tt, params).ddt(params), params)
        .neg();
    let a_pp = inv_g_phiphi.neg();
    Some(DiffOp::new(a_tt, a_t, a_pp))
}

impl SurfaceContext {
    /// Surface gradient of a function of `t` alone:
    /// `grad f = (f′/g_tt)·x_t`, returned as a coordinate triple.
    pub fn grad_t(&self, f: &TrigPoly) -> [PhiHarmonic; 3] {
        let p = &self.params;
        let inv_r = &ParamRational::one() / &self.params.r;
        let factor = f.ddt(p).scale(&(&inv_r * &inv_r));
        self.position_ddt()
            .map(|x_t| x_t.scale_poly(&factor, p))
    }

    /// `x_t`, the tangent vector along `t`, as a coordinate triple.
    pub fn position_ddt(&self) -> [PhiHarmonic; 3] {
        let p = &self.params;
        [
            self.position[0].ddt(p),
            self.position[1].ddt(p),
            self.position[2].ddt(p),
        ]
    }

    /// `Δx_i + 2H·n_i` per coordinate; identically zero on the anchor ring.
    pub fn laplace_position_residual(&self) -> [PhiHarmonic; 3] {
        let p = &self.params;
        let two_h = self.mean_curvature.scale(&ParamRational::from_int(2));
        [0, 1, 2].map(|i| {
            self.laplacian
                .apply(&self.position[i], p)
                .add(&self.gauss[i].scale_poly(&two_h, p), p)
        })
    }

    /// Checks `Δx = −2Hn` as an exact identity of canonical forms.
    pub fn check_laplace_position(&self) -> bool {
        self.laplace_position_residual().iter().all(PhiHarmonic::is_zero)
    }

    /// `grad 2H + (4H² − 2K)n` per coordinate — the claimed value of `Δn`.
    pub fn laplace_gauss_rhs(&self) -> [PhiHarmonic; 3] {
        let p = &self.params;
        let two_h = self.mean_curvature.scale(&ParamRational::from_int(2));
        let grad = self.grad_t(&two_h);
        let four_h2_minus_2k = two_h
            .mul(&two_h, p)
            .sub(&self.gauss_curvature.scale(&ParamRational::from_int(2)), p);
        [0, 1, 2].map(|i| {
            grad[i]
                .add(&self.gauss[i].scale_poly(&four_h2_minus_2k, p), p)
        })
    }

    /// `Δn_i − grad(2H)_i − (4H² − 2K)n_i` per coordinate; identically zero
    /// on the anchor ring.
    pub fn laplace_gauss_residual(&self) -> [PhiHarmonic; 3] {
        let p = &self.params;
        let rhs = self.laplace_gauss_rhs();
        [0, 1, 2].map(|i| {
            self.laplacian
                .apply(&self.gauss[i], p)
                .sub(&rhs[i], p)
        })
    }

    /// Checks `Δn = grad 2H + (4H² − 2K)n` as an exact identity.
    pub fn check_laplace_gauss(&self) -> bool {
        self.laplace_gauss_residual().iter().all(PhiHarmonic::is_zero)
    }

    /// Replaces the stored mean curvature (falsification control).
    pub fn with_mean_curvature(mut self, h: TrigPoly) -> Self {
        self.mean_curvature = h;
        self
    }

    /// Replaces the stored Gauss curvature (falsification control).
    pub fn with_gauss_curvature(mut self, k: TrigPoly) -> Self {
        self.gauss_curvature = k;
        self
    }

    /// The Gauss-map coordinate `n₃ = −sin t` as a φ-harmonic, the main
    /// iteration target.
    pub fn gauss_third(&self) -> PhiHarmonic {
        self.gauss[2].clone()
    }
}
