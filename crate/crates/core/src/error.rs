use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("curvature must be -1, 0 or +1, got {0}")]
    InvalidCurvature(i32),

    #[error("radius {rho} outside the admissible range [0, {rho_max})")]
    RadiusOutOfDomain { rho: f64, rho_max: f64 },

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnitDirection { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "grid resolution ({n_colat}, {n_lon}) below floor: need n_colat >= 8, n_lon >= 8 and even"
    )]
    Resolution { n_colat: usize, n_lon: usize },

    #[error("field and grid disagree")]
    GridMismatch,

    #[error("non-finite value at node {node}")]
    NonFinite { node: usize },

    #[error("radius {rho} at node {node} outside the admissible range (0, {rho_max})")]
    NodeOutOfDomain { node: usize, rho: f64, rho_max: f64 },

    #[error("point at node {node} is off the model (defect {defect:e})")]
    OffModel { node: usize, defect: f64 },

    #[error("not star-shaped: support function {support:e} <= 0 at node {node}")]
    NotStarShaped { node: usize, support: f64 },

    #[error("degenerate metric at node {node} (det {det:e})")]
    SingularMetric { node: usize, det: f64 },

    #[error("ray-surface intersection not bracketed in direction of node {node}")]
    RootNotBracketed { node: usize },

    #[error(
        "image is not star-shaped about the origin: ray at node {node} meets it {crossings} times"
    )]
    StarShapeLost { node: usize, crossings: usize },

    #[error("invalid isometry: {0}")]
    InvalidIsometry(&'static str),

    #[error("surfaces are not isometric under the identification (metric defect {residual:e} > {threshold:e})")]
    NotIsometric { residual: f64, threshold: f64 },

    #[error("weight phi'~ u + phi' u~ = {weight:e} <= 0 at node {node}")]
    NonPositiveWeight { node: usize, weight: f64 },

    #[error("surfaces live in different space forms")]
    SpaceFormMismatch,

    #[error("singular linear system")]
    Singular,
}
