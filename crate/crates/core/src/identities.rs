//! Residuals of the geometric identities satisfied by star-shaped surfaces in
//! a space form:
//!
//! * Hessian of the polar potential: `∇²Φ = φ′ g − u h`.
//! * Gradient relation `∇φ′ = −K ∇Φ` (from φ″ = −Kφ).
//! * Divergence-free Newton tensor: `∇_j σ₂^{ij}(W) = 0`.
//! * The four integral formulas for an identified isometric pair (M, M̃),
//!   obtained by contracting the Hessian identity with σ₂^{ij}(W) and
//!   σ₂^{ij}(W̃) and integrating by parts.
//!
//! Integral residuals are normalized as `|L − R| / (1 + |L| + |R|)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypersurface::{NodeGeometry, SurfaceGeometry};
use crate::linalg::{norm_covariant2, norm_covector2, Mat2};
use crate::pair::{isometry_residual, IdentifiedPair};

/// Default isometry gate for the integral formulas.
pub const INTEGRAL_ISOMETRY_GATE: f64 = 1e-8;

/// `(n − 1)` from contracting σ₂^{ij} with g_ij; the grid backend has n = 2.
const TRACE_FACTOR: f64 = 1.0;

fn relative(l: f64, r: f64) -> f64 {
    (l - r).abs() / (1.0 + l.abs() + r.abs())
}

/// Pointwise g-norm of `∇²Φ − (φ′g − uh)`.
pub fn hessian_identity_defects(geom: &SurfaceGeometry) -> Vec<f64> {
    let hess = geom.hessian_from_derivatives(geom.potential_derivatives());
    geom.nodes()
        .iter()
        .zip(&hess)
        .map(|(n, hs)| {
            let mut d = [[0.0; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    d[a][b] = hs[a][b] - (n.phi_prime * n.g[a][b] - n.support * n.h[a][b]);
                }
            }
            norm_covariant2(&d, &n.g_inv)
        })
        .collect()
}

pub fn hessian_identity_residual(geom: &SurfaceGeometry) -> f64 {
    max(&hessian_identity_defects(geom))
}

/// Pointwise g-norm of `∇φ′ + K∇Φ`, both gradients taken spectrally.
pub fn gradient_relation_defects(geom: &SurfaceGeometry) -> Vec<f64> {
    let k = geom.space_form().k();
    let dp = geom.phi_prime_derivatives();
    let dq = geom.potential_derivatives();
    geom.nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let v = [dp.t[i] + k * dq.t[i], dp.l[i] + k * dq.l[i]];
            norm_covector2(&v, &n.g_inv)
        })
        .collect()
}

pub fn gradient_relation_residual(geom: &SurfaceGeometry) -> f64 {
    max(&gradient_relation_defects(geom))
}

/// Lowered Newton tensor `T_ab = σ₁ g_ab − h_ab`.
fn newton_lowered(n: &NodeGeometry) -> Mat2 {
    let s1 = n.sigma1();
    [
        [s1 * n.g[0][0] - n.h[0][0], s1 * n.g[0][1] - n.h[0][1]],
        [s1 * n.g[1][0] - n.h[1][0], s1 * n.g[1][1] - n.h[1][1]],
    ]
}

/// Pointwise g-norm of the covariant divergence `g^{ac} ∇_c T_ab`.
pub fn codazzi_divergence_defects(geom: &SurfaceGeometry) -> Vec<f64> {
    let t: Vec<Mat2> = geom.nodes().iter().map(newton_lowered).collect();
    let dt = geom.covariant_derivative_sym2(&t);
    geom.nodes()
        .iter()
        .zip(&dt)
        .map(|(n, d)| {
            let mut div = [0.0; 2];
            for (b, v) in div.iter_mut().enumerate() {
                for a in 0..2 {
                    for c in 0..2 {
                        *v += n.g_inv[a][c] * d[c][a][b];
                    }
                }
            }
            norm_covector2(&div, &n.g_inv)
        })
        .collect()
}

pub fn codazzi_divergence_residual(geom: &SurfaceGeometry) -> f64 {
    max(&codazzi_divergence_defects(geom))
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// `Σ σ₂^{ij}(W) A_j B_i` in coordinates: `σ₁(W)⟨∇A, ∇B⟩ − A_a Wᵃ_b g^{bc} B_c`.
fn newton_contract(w: &Mat2, g_inv: &Mat2, a: [f64; 2], b: [f64; 2]) -> f64 {
    let s1 = w[0][0] + w[1][1];
    let b_up = [
        g_inv[0][0] * b[0] + g_inv[0][1] * b[1],
        g_inv[1][0] * b[0] + g_inv[1][1] * b[1],
    ];
    let ab = a[0] * b_up[0] + a[1] * b_up[1];
    let mut awb = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            awb += a[i] * w[i][j] * b_up[j];
        }
    }
    s1 * ab - awb
}

fn sigma11_2(w: &Mat2, wt: &Mat2) -> f64 {
    let s1 = w[0][0] + w[1][1];
    let s1t = wt[0][0] + wt[1][1];
    let tr = w[0][0] * wt[0][0] + w[0][1] * wt[1][0] + w[1][0] * wt[0][1] + w[1][1] * wt[1][1];
    0.5 * (s1 * s1t - tr)
}

fn det(w: &Mat2) -> f64 {
    w[0][0] * w[1][1] - w[0][1] * w[1][0]
}

/// Left and right sides of the four integral formulas and the combination
/// that yields the rigidity integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralFormulas {
    pub lhs: [f64; 4],
    pub rhs: [f64; 4],
    pub residuals: [f64; 4],
    /// (L₃ − L₁) + (L₂ − L₄); vanishes by symmetry of σ₂^{ij}.
    pub lhs_combination: f64,
    /// (R₃ − R₁) + (R₂ − R₄); equals 2 × rigidity integral when σ₂(W) = σ₂(W̃).
    pub rhs_combination: f64,
    pub rigidity_integral: f64,
    /// `|rhs_combination − 2·rigidity_integral| / (1 + |rhs_combination| + 2|rigidity_integral|)`.
    pub combination_defect: f64,
}

fn gate(pair: &IdentifiedPair, threshold: f64) -> Result<()> {
    let residual = isometry_residual(pair.m(), pair.m_tilde());
    if residual > threshold {
        return Err(Error::NotIsometric {
            residual,
            threshold,
        });
    }
    Ok(())
}

/// Evaluates the four integral formulas on an identified pair; refuses when the
/// metric defect exceeds `isometry_gate`.
pub fn integral_formula_residuals(
    pair: &IdentifiedPair,
    isometry_gate: f64,
) -> Result<IntegralFormulas> {
    gate(pair, isometry_gate)?;
    let m = pair.m();
    let mt = pair.m_tilde();
    let k = m.space_form().k();
    let dq = m.potential_derivatives();
    let dqt = mt.potential_derivatives();
    let weights = m.area_weights();

    let mut lhs = [0.0; 4];
    let mut rhs = [0.0; 4];
    let mut rig = 0.0;
    for (i, (n, nt)) in m.nodes().iter().zip(mt.nodes()).enumerate() {
        let w = weights[i];
        let grad = dq.gradient(i);
        let grad_t = dqt.gradient(i);
        let (wm, wt) = (&n.w, &nt.w);
        let (fp, fpt) = (n.phi_prime, nt.phi_prime);
        let (u, ut) = (n.support, nt.support);
        let s11 = sigma11_2(wm, wt);
        let (s1, s1t) = (wm[0][0] + wm[1][1], wt[0][0] + wt[1][1]);
        let (s2, s2t) = (det(wm), det(wt));

        lhs[0] += w * k * newton_contract(wm, &n.g_inv, grad_t, grad);
        lhs[1] += w * k * newton_contract(wt, &n.g_inv, grad_t, grad);
        lhs[2] += w * k * newton_contract(wm, &n.g_inv, grad, grad_t);
        lhs[3] += w * k * newton_contract(wt, &n.g_inv, grad, grad_t);

        rhs[0] += w * (TRACE_FACTOR * fpt * fp * s1 - 2.0 * fpt * u * s2);
        rhs[1] += w * (TRACE_FACTOR * fpt * fp * s1t - 2.0 * fpt * u * s11);
        rhs[2] += w * (TRACE_FACTOR * fp * fpt * s1 - 2.0 * fp * ut * s11);
        rhs[3] += w * (TRACE_FACTOR * fp * fpt * s1t - 2.0 * fp * ut * s2t);

        rig += w * (fpt * u + fp * ut) * (s2 - s11);
    }
    let residuals = [
        relative(lhs[0], rhs[0]),
        relative(lhs[1], rhs[1]),
        relative(lhs[2], rhs[2]),
        relative(lhs[3], rhs[3]),
    ];
    let lhs_combination = (lhs[2] - lhs[0]) + (lhs[1] - lhs[3]);
    let rhs_combination = (rhs[2] - rhs[0]) + (rhs[1] - rhs[3]);
    let combination_defect =
        (rhs_combination - 2.0 * rig).abs() / (1.0 + rhs_combination.abs() + 2.0 * rig.abs());
    Ok(IntegralFormulas {
        lhs,
        rhs,
        residuals,
        lhs_combination,
        rhs_combination,
        rigidity_integral: rig,
        combination_defect,
    })
}

/// Relative residual of the first integral formula with M̃ = M.
pub fn minkowski_residual(geom: &SurfaceGeometry) -> f64 {
    let k = geom.space_form().k();
    let dq = geom.potential_derivatives();
    let weights = geom.area_weights();
    let (mut l, mut r) = (0.0, 0.0);
    for (i, n) in geom.nodes().iter().enumerate() {
        let grad = dq.gradient(i);
        l += weights[i] * k * newton_contract(&n.w, &n.g_inv, grad, grad);
        r += weights[i]
            * (TRACE_FACTOR * n.phi_prime * n.phi_prime * n.sigma1()
                - 2.0 * n.phi_prime * n.support * n.sigma2());
    }
    relative(l, r)
}

/// Per-node `(φ̃′u + φ′ũ)(σ₂(W) − σ₁,₁(W, W̃))` with its integral over M.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityIntegrand {
    pub weight: Vec<f64>,
    pub gap: Vec<f64>,
    pub integrand: Vec<f64>,
    pub integral: f64,
}

impl RigidityIntegrand {
    pub fn max_abs(&self) -> f64 {
        self.integrand.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_gap(&self) -> f64 {
        self.gap.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn rigidity_integrand(pair: &IdentifiedPair, isometry_gate: f64) -> Result<RigidityIntegrand> {
    gate(pair, isometry_gate)?;
    rigidity_integrand_ungated(pair)
}

pub(crate) fn rigidity_integrand_ungated(pair: &IdentifiedPair) -> Result<RigidityIntegrand> {
    let m = pair.m();
    let mt = pair.m_tilde();
    let n_nodes = m.len();
    let mut weight = Vec::with_capacity(n_nodes);
    let mut gap = Vec::with_capacity(n_nodes);
    let mut integrand = Vec::with_capacity(n_nodes);
    for (node, (n, nt)) in m.nodes().iter().zip(mt.nodes()).enumerate() {
        let wgt = nt.phi_prime * n.support + n.phi_prime * nt.support;
        if !(wgt > 0.0) {
            return Err(Error::NonPositiveWeight { node, weight: wgt });
        }
        let g = det(&n.w) - sigma11_2(&n.w, &nt.w);
        weight.push(wgt);
        gap.push(g);
        integrand.push(wgt * g);
    }
    let integral = m.integrate(&integrand);
    Ok(RigidityIntegrand {
        weight,
        gap,
        integrand,
        integral,
    })
}

/// Residuals for a single surface and, optionally, an identified pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub curvature: i32,
    pub n_colat: usize,
    pub n_lon: usize,
    pub hessian_max: f64,
    pub grad_relation_max: f64,
    pub codazzi_div_max: f64,
    pub codazzi_symmetry_max: f64,
    pub minkowski_residual: f64,
    pub pair: Option<PairReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub isometry_residual: f64,
    /// `None` when the pair failed the isometry gate.
    pub formulas: Option<IntegralFormulas>,
    pub rigidity_integral: Option<f64>,
    pub max_rigidity_integrand: Option<f64>,
}

impl IdentityReport {
    pub fn single(geom: &SurfaceGeometry) -> Self {
        IdentityReport {
            curvature: geom.space_form().curvature().as_int(),
            n_colat: geom.grid().n_colat(),
            n_lon: geom.grid().n_lon(),
            hessian_max: hessian_identity_residual(geom),
            grad_relation_max: gradient_relation_residual(geom),
            codazzi_div_max: codazzi_divergence_residual(geom),
            codazzi_symmetry_max: geom.codazzi_defect(),
            minkowski_residual: minkowski_residual(geom),
            pair: None,
        }
    }

    pub fn with_pair(pair: &IdentifiedPair, isometry_gate: f64) -> Self {
        let mut report = Self::single(pair.m());
        let iso = isometry_residual(pair.m(), pair.m_tilde());
        let formulas = integral_formula_residuals(pair, isometry_gate).ok();
        let rig = rigidity_integrand(pair, isometry_gate).ok();
        report.pair = Some(PairReport {
            isometry_residual: iso,
            formulas,
            rigidity_integral: rig.as_ref().map(|r| r.integral),
            max_rigidity_integrand: rig.as_ref().map(RigidityIntegrand::max_abs),
        });
        report
    }
}
