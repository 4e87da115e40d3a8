//! Report documents (TOML). Every report carries the resolved scenario and the
//! conventions it was computed with; nothing time-dependent is written, so the
//! same input gives byte-identical output.

use serde::Serialize;

use rigidlab_core::identities::{IdentityReport, IntegralFormulas};
use rigidlab_core::pair::{CongruenceVerdict, HypothesisFailure, RecoveredIsometry};
use rigidlab_core::{Curvature, SpaceForm};

use crate::config::ScenarioConfig;

#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub harmonics: &'static str,
    pub grid: &'static str,
    pub model: String,
    pub normal: &'static str,
    pub norms: &'static str,
    pub integral_residual: &'static str,
    pub trace_factor: &'static str,
}

impl Conventions {
    pub fn for_space_form(sf: &SpaceForm) -> Self {
        let model = match sf.curvature() {
            Curvature::Flat => "K = 0: R^3, X = rho theta, V = X".to_string(),
            Curvature::Spherical => {
                "K = +1: unit S^3 in R^4, X = (cos rho, sin rho theta), V = x0 X - e0, rho < pi/2"
                    .to_string()
            }
            Curvature::Hyperbolic => {
                "K = -1: hyperboloid in R^{1,3}, X = (cosh rho, sinh rho theta), V = x0 X - e0"
                    .to_string()
            }
        };
        Conventions {
            harmonics: "real Y_lm, unit L2 norm on S^2, no Condon-Shortley phase; m > 0 uses sqrt2 cos(m lambda), m < 0 uses sqrt2 sin(|m| lambda)",
            grid: "Gauss-Legendre in cos(theta) (theta ascending) x uniform longitude; node = ring * n_lon + col",
            model,
            normal: "outward unit normal; h_ab = -<X_ab, nu>, W = g^-1 h, u = <V, nu>",
            norms: "covariant tensors in the g-norm; mixed tensors in the orthonormal-frame Frobenius norm",
            integral_residual: "|L - R| / (1 + |L| + |R|)",
            trace_factor: "sigma2^{ij} g_ij = (n - 1) sigma1; n = 2 on the grid, so the factor is 1",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    pub hessian_max: f64,
    pub grad_relation_max: f64,
    pub codazzi_div_max: f64,
    pub codazzi_symmetry_max: f64,
    pub minkowski_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceSummary {
    pub area: f64,
    pub min_rho: f64,
    pub max_rho: f64,
    pub min_support: f64,
    pub min_support_node: usize,
    pub min_sigma2: f64,
    pub min_sigma2_node: usize,
    pub min_scalar_curvature: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FormulaTable {
    pub lhs: [f64; 4],
    pub rhs: [f64; 4],
    pub residuals: [f64; 4],
    pub lhs_combination: f64,
    pub rhs_combination: f64,
    /// `rhs_combination − 2 · rigidity_integral`, relative.
    pub subtraction_defect: f64,
}

impl From<&IntegralFormulas> for FormulaTable {
    fn from(f: &IntegralFormulas) -> Self {
        FormulaTable {
            lhs: f.lhs,
            rhs: f.rhs,
            residuals: f.residuals,
            lhs_combination: f.lhs_combination,
            rhs_combination: f.rhs_combination,
            subtraction_defect: f.combination_defect,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairSection {
    pub identification: String,
    pub isometry_residual: f64,
    pub isometry_gate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rigidity_integral: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rigidity_integrand: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formulas: Option<FormulaTable>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub report: &'static str,
    pub curvature: i32,
    pub n_colat: usize,
    pub n_lon: usize,
    pub residuals: Residuals,
    pub surface: SurfaceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSection>,
    pub conventions: Conventions,
    pub config: ScenarioConfig,
}

impl Residuals {
    pub fn from_report(r: &IdentityReport) -> Self {
        Residuals {
            hessian_max: r.hessian_max,
            grad_relation_max: r.grad_relation_max,
            codazzi_div_max: r.codazzi_div_max,
            codazzi_symmetry_max: r.codazzi_symmetry_max,
            minkowski_residual: r.minkowski_residual,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveredSection {
    pub dim: usize,
    pub matrix: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
    pub fit_residual: f64,
    /// Largest entry difference to the configured isometry, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_to_applied: Option<f64>,
    /// max |Aᵀ J A − J| for K = −1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lorentz_defect: Option<f64>,
}

impl RecoveredSection {
    pub fn new(r: &RecoveredIsometry, distance: Option<f64>, lorentz: Option<f64>) -> Self {
        RecoveredSection {
            dim: r.dim,
            matrix: r.matrix.chunks(r.dim).map(<[f64]>::to_vec).collect(),
            translation: r.translation.clone(),
            fit_residual: r.fit_residual,
            distance_to_applied: distance,
            lorentz_defect: lorentz,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureSection {
    pub kind: &'static str,
    /// 0 for M, 1 for M̃.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<u8>,
    pub node: usize,
    pub ring: usize,
    pub col: usize,
    pub values: Vec<(String, f64)>,
}

impl FailureSection {
    pub fn new(f: &HypothesisFailure, n_lon: usize) -> Self {
        match *f {
            HypothesisFailure::OutsideGardingCone {
                surface,
                node,
                sigma1,
                sigma2,
            } => FailureSection {
                kind: "outside Garding cone (sigma1 <= 0 or sigma2 <= 0, i.e. R <= K)",
                surface: Some(surface),
                node,
                ring: node / n_lon,
                col: node % n_lon,
                values: vec![("sigma1".into(), sigma1), ("sigma2".into(), sigma2)],
            },
            HypothesisFailure::NonPositiveWeight { node, weight } => FailureSection {
                kind: "non-positive weight phi~' u + phi' u~",
                surface: None,
                node,
                ring: node / n_lon,
                col: node % n_lon,
                values: vec![("weight".into(), weight)],
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Thresholds {
    pub isometry: f64,
    pub gap: f64,
    pub w_match: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub report: &'static str,
    pub status: &'static str,
    pub exit_code: i32,
    pub curvature: i32,
    pub n_colat: usize,
    pub n_lon: usize,
    pub identification: String,
    pub thresholds: Thresholds,
    pub isometry_residual: f64,
    pub min_sigma2: f64,
    pub min_sigma2_node: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rigidity_integral: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rigidity_relative: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_w_difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered: Option<RecoveredSection>,
    pub conventions: Conventions,
    pub config: ScenarioConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_tilde: Option<ScenarioConfig>,
}

impl VerdictReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        v: &CongruenceVerdict,
        sf: &SpaceForm,
        n_colat: usize,
        n_lon: usize,
        identification: String,
        recovered: Option<RecoveredSection>,
        config: ScenarioConfig,
        config_tilde: Option<ScenarioConfig>,
    ) -> Self {
        VerdictReport {
            report: "congruence",
            status: v.status.as_str(),
            exit_code: v.status.exit_code(),
            curvature: sf.curvature().as_int(),
            n_colat,
            n_lon,
            identification,
            thresholds: Thresholds {
                isometry: v.tolerances.isometry,
                gap: v.tolerances.gap,
                w_match: v.tolerances.w_match,
            },
            isometry_residual: v.isometry_residual,
            min_sigma2: v.min_sigma2,
            min_sigma2_node: v.min_sigma2_node,
            rigidity_integral: v.rigidity_integral,
            rigidity_relative: v.rigidity_relative,
            max_gap: v.max_gap,
            max_w_difference: v.max_w_difference,
            failure: v.failure.as_ref().map(|f| FailureSection::new(f, n_lon)),
            recovered,
            conventions: Conventions::for_space_form(sf),
            config,
            config_tilde,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n_colat: usize,
    pub n_lon: usize,
    pub hessian: f64,
    pub grad_relation: f64,
    pub codazzi_div: f64,
    pub minkowski: f64,
    /// log2 ratio against the previous level; "N/A" when either value is at the rounding floor.
    pub order_hessian: String,
    pub order_grad_relation: String,
    pub order_codazzi_div: String,
    pub order_minkowski: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub report: &'static str,
    pub curvature: i32,
    pub rounding_floor: f64,
    pub levels: Vec<ConvergenceRow>,
    pub conventions: Conventions,
    pub config: ScenarioConfig,
}

pub fn to_toml<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(toml::to_string(value)?)
}
