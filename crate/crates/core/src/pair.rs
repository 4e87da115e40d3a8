//! Identified pairs of surfaces and the congruence pipeline.
//!
//! An [`IdentifiedPair`] holds the geometry of M and of M̃ over the same
//! parameter grid, with node k of M identified with node k of M̃. When M̃ is
//! obtained from M by an ambient isometry A, M̃ is re-parametrized so that
//! node k sits at the point A·X(θ_k): its radius is resampled spectrally at
//! the direction of A·X(θ_k) and its coordinates are differentiated on the
//! grid of M.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

// inherent f64 math only exists when std is linked
use crate::error::{Error, Result};
use crate::grid::{Parity, ScalarField};
use crate::hypersurface::{RadialGraph, SurfaceGeometry};
use crate::identities::{rigidity_integrand_ungated, RigidityIntegrand};
use crate::linalg::{
    inverse, matmul, norm_covariant2, norm_mixed2, polar_orthogonal, sub2, transpose,
};
use crate::spaceform::{Curvature, SpaceForm};
#[allow(unused_imports)]
use num_traits::Float;

const ORTHO_TOL: f64 = 1e-12;

/// Isometry of the ambient space form that fixes the polar origin, or (K = 0
/// only) a translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmbientIsometry {
    Identity,
    /// Rotation by `angle` about the polar axis (the e₃ direction of θ).
    PoleRotation {
        angle: f64,
    },
    /// Proper rotation of the direction sphere, row-major.
    Rotation {
        matrix: [[f64; 3]; 3],
    },
    Translation {
        offset: [f64; 3],
    },
}

impl AmbientIsometry {
    pub fn rotation(matrix: [[f64; 3]; 3]) -> Result<Self> {
        let mut defect = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| matrix[k][i] * matrix[k][j]).sum();
                defect = defect.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        if defect > ORTHO_TOL || matrix.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidIsometry("matrix is not orthogonal"));
        }
        if det3(&matrix) < 0.0 {
            return Err(Error::InvalidIsometry("rotation must be proper (det = +1)"));
        }
        Ok(AmbientIsometry::Rotation { matrix })
    }

    /// Rodrigues rotation about a (not necessarily unit) axis.
    pub fn axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(len > 0.0) || !angle.is_finite() {
            return Err(Error::InvalidIsometry("rotation axis must be non-zero"));
        }
        let [x, y, z] = [axis[0] / len, axis[1] / len, axis[2] / len];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        let m = [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ];
        Self::rotation(m)
    }

    pub fn translation(offset: [f64; 3]) -> Result<Self> {
        if offset.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidIsometry("translation must be finite"));
        }
        Ok(AmbientIsometry::Translation { offset })
    }

    pub fn check_space_form(&self, sf: &SpaceForm) -> Result<()> {
        match self {
            AmbientIsometry::Translation { .. } if sf.curvature() != Curvature::Flat => {
                Err(Error::InvalidIsometry("translations exist only for K = 0"))
            }
            _ => Ok(()),
        }
    }

    /// Rotation part acting on directions.
    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        match *self {
            AmbientIsometry::PoleRotation { angle } => {
                let (s, c) = angle.sin_cos();
                [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
            }
            AmbientIsometry::Rotation { matrix } => matrix,
            _ => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn offset(&self) -> [f64; 3] {
        match *self {
            AmbientIsometry::Translation { offset } => offset,
            _ => [0.0; 3],
        }
    }

    /// Model-space action as `(A, t)`, `x ↦ A x + t`, with A of size `dim × dim`.
    pub fn model_matrix(&self, sf: &SpaceForm) -> (Vec<f64>, Vec<f64>) {
        let r = self.rotation_matrix();
        match sf.curvature() {
            Curvature::Flat => {
                let a = r.iter().flatten().copied().collect();
                (a, self.offset().to_vec())
            }
            _ => {
                let mut a = vec![0.0; 16];
                a[0] = 1.0;
                for i in 0..3 {
                    for j in 0..3 {
                        a[(i + 1) * 4 + j + 1] = r[i][j];
                    }
                }
                (a, vec![0.0; 4])
            }
        }
    }

    /// Image of a model point (4-slot layout used by the geometry code).
    pub fn apply_point(&self, sf: &SpaceForm, x: &[f64; 4]) -> [f64; 4] {
        let r = self.rotation_matrix();
        let rot = |v: [f64; 3]| {
            [
                r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
                r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
                r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
            ]
        };
        match sf.curvature() {
            Curvature::Flat => {
                let y = rot([x[0], x[1], x[2]]);
                let t = self.offset();
                [y[0] + t[0], y[1] + t[1], y[2] + t[2], 0.0]
            }
            _ => {
                let y = rot([x[1], x[2], x[3]]);
                [x[0], y[0], y[1], y[2]]
            }
        }
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Radial graph of the image `A(M)`.
///
/// Rotations resample ρ̃(θ) = ρ(R⁻¹θ) spectrally (a pole rotation by a multiple
/// of the longitude spacing is an exact column shift). Translations solve the
/// ray–surface intersection along every node direction.
pub fn apply_isometry(rg: &RadialGraph, iso: &AmbientIsometry) -> Result<RadialGraph> {
    let sf = rg.space_form();
    iso.check_space_form(&sf)?;
    let grid = Arc::clone(rg.grid());
    let rho = rg.rho().values();
    let values: Vec<f64> = match *iso {
        AmbientIsometry::Identity => rho.to_vec(),
        AmbientIsometry::PoleRotation { angle } => {
            let nl = grid.n_lon();
            let steps = angle / (2.0 * PI / nl as f64);
            let shift = steps.round();
            if (steps - shift).abs() < 1e-12 {
                let shift = (shift as i64).rem_euclid(nl as i64) as usize;
                (0..grid.len())
                    .map(|k| {
                        let (ring, col) = (k / nl, k % nl);
                        rho[ring * nl + (col + nl - shift) % nl]
                    })
                    .collect()
            } else {
                (0..grid.len())
                    .map(|k| {
                        let (t, l) = grid.angles(k);
                        grid.interpolate(rho, Parity::Even, t, l - angle)
                    })
                    .collect()
            }
        }
        AmbientIsometry::Rotation { matrix } => (0..grid.len())
            .map(|k| {
                let d = grid.direction(k);
                // Rᵀ θ
                let pre: Vec<f64> = (0..3)
                    .map(|i| (0..3).map(|j| matrix[j][i] * d[j]).sum())
                    .collect();
                grid.interpolate_direction(rho, &pre)
            })
            .collect(),
        AmbientIsometry::Translation { offset } => translate_radii(rg, offset)?,
    };
    let field = ScalarField::new(grid, values)?;
    RadialGraph::new(sf, field)
}

const RAY_SAMPLES: usize = 24;

fn translate_radii(rg: &RadialGraph, t: [f64; 3]) -> Result<Vec<f64>> {
    let grid = rg.grid();
    let rho = rg.rho().values();
    let (_, rho_max) = rg.rho().max();
    let t_norm = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
    let s_max = t_norm + rho_max * 1.5 + 1e-3;
    let mut out = Vec::with_capacity(grid.len());
    for node in 0..grid.len() {
        let theta = grid.direction(node);
        // F(s) = |sθ − t| − ρ(dir(sθ − t)); negative inside the translated surface
        let f = |s: f64| {
            let p = [
                s * theta[0] - t[0],
                s * theta[1] - t[1],
                s * theta[2] - t[2],
            ];
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if r == 0.0 {
                return -rho[0].abs();
            }
            r - grid.interpolate_direction(rho, &[p[0] / r, p[1] / r, p[2] / r])
        };
        let mut prev_s = 0.0;
        let mut prev_f = f(0.0);
        if !(prev_f < 0.0) {
            return Err(Error::RootNotBracketed { node });
        }
        let mut crossings = 0;
        let mut bracket = None;
        for i in 1..=RAY_SAMPLES {
            let s = s_max * i as f64 / RAY_SAMPLES as f64;
            let fs = f(s);
            if (prev_f < 0.0) != (fs < 0.0) {
                crossings += 1;
                if bracket.is_none() {
                    bracket = Some((prev_s, prev_f, s, fs));
                }
            }
            prev_s = s;
            prev_f = fs;
        }
        if crossings != 1 {
            return Err(Error::StarShapeLost { node, crossings });
        }
        let (mut a, mut fa, mut b, mut fb) = bracket.ok_or(Error::RootNotBracketed { node })?;
        // Illinois regula falsi
        let mut side = 0i8;
        let mut root = 0.5 * (a + b);
        for _ in 0..200 {
            let c = (a * fb - b * fa) / (fb - fa);
            let fc = f(c);
            root = c;
            if fc == 0.0 || (b - a).abs() < 1e-15 * b.abs().max(1.0) {
                break;
            }
            if (fc < 0.0) == (fa < 0.0) {
                a = c;
                fa = fc;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                b = c;
                fb = fc;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
            if fc.abs() < 1e-15 {
                break;
            }
        }
        out.push(root);
    }
    Ok(out)
}

/// Largest relative metric defect ‖g − g̃‖_g / ‖g‖_g over nodes.
pub fn isometry_residual(m: &SurfaceGeometry, mt: &SurfaceGeometry) -> f64 {
    m.nodes()
        .iter()
        .zip(mt.nodes())
        .map(|(n, nt)| {
            let d = sub2(&nt.g, &n.g);
            norm_covariant2(&d, &n.g_inv) / norm_covariant2(&n.g, &n.g_inv)
        })
        .fold(0.0, f64::max)
}

/// Geometries of M and M̃ over a shared grid, identified node by node.
#[derive(Debug, Clone)]
pub struct IdentifiedPair {
    m: SurfaceGeometry,
    mt: SurfaceGeometry,
}

impl IdentifiedPair {
    pub fn new(m: SurfaceGeometry, mt: SurfaceGeometry) -> Result<Self> {
        if m.space_form() != mt.space_form() {
            return Err(Error::SpaceFormMismatch);
        }
        if !Arc::ptr_eq(m.grid(), mt.grid())
            && (m.grid().n_colat() != mt.grid().n_colat() || m.grid().n_lon() != mt.grid().n_lon())
        {
            return Err(Error::GridMismatch);
        }
        Ok(IdentifiedPair { m, mt })
    }

    /// Same parameter point on both graphs.
    pub fn nodewise(rg: &RadialGraph, rgt: &RadialGraph) -> Result<Self> {
        Self::new(
            SurfaceGeometry::compute(rg)?,
            SurfaceGeometry::compute(rgt)?,
        )
    }

    /// Node θ of M is identified with the point of M̃ in direction of `iso(X(θ))`.
    pub fn by_isometry(rg: &RadialGraph, rgt: &RadialGraph, iso: &AmbientIsometry) -> Result<Self> {
        let sf = rg.space_form();
        if sf != rgt.space_form() {
            return Err(Error::SpaceFormMismatch);
        }
        iso.check_space_form(&sf)?;
        let grid = Arc::clone(rg.grid());
        let tgrid = rgt.grid();
        let dim = sf.ambient_dim(2);
        let positions: Vec<[f64; 4]> = rg
            .positions()
            .iter()
            .map(|x| {
                let y = iso.apply_point(&sf, x);
                let dir = sf.direction_of(&y[..dim]);
                let r = tgrid.interpolate_direction(rgt.rho().values(), &dir);
                let p = sf.embed(r, &dir)?;
                let mut out = [0.0; 4];
                out[..dim].copy_from_slice(&p.coords);
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let m = SurfaceGeometry::compute(rg)?;
        let mt = SurfaceGeometry::from_positions(sf, grid, &positions)?;
        Self::new(m, mt)
    }

    /// M and its image under `iso`, constructed as a radial graph and identified back.
    pub fn congruent_copy(rg: &RadialGraph, iso: &AmbientIsometry) -> Result<Self> {
        let image = apply_isometry(rg, iso)?;
        Self::by_isometry(rg, &image, iso)
    }

    pub fn m(&self) -> &SurfaceGeometry {
        &self.m
    }

    pub fn m_tilde(&self) -> &SurfaceGeometry {
        &self.mt
    }

    /// Largest orthonormal-frame norm of W − W̃.
    pub fn max_weingarten_difference(&self) -> f64 {
        self.m
            .nodes()
            .iter()
            .zip(self.mt.nodes())
            .map(|(n, nt)| norm_mixed2(&sub2(&n.w, &nt.w), &n.g, &n.g_inv))
            .fold(0.0, f64::max)
    }
}

/// Least-squares model-space map carrying M onto M̃.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredIsometry {
    pub dim: usize,
    /// Row-major `dim × dim`.
    pub matrix: Vec<f64>,
    pub translation: Vec<f64>,
    /// Largest |A x + t − x̃| over nodes.
    pub fit_residual: f64,
}

impl RecoveredIsometry {
    /// Largest entry difference against the model action of `iso`.
    pub fn distance_to(&self, iso: &AmbientIsometry, sf: &SpaceForm) -> f64 {
        let (a, t) = iso.model_matrix(sf);
        let da = self
            .matrix
            .iter()
            .zip(&a)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        let dt = self
            .translation
            .iter()
            .zip(&t)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        da.max(dt)
    }
}

/// Orthogonal (K = 0, +1) or Lorentz-linear (K = −1) fit of the identified
/// embeddings, weighted by the area element of M.
pub fn recover_isometry(pair: &IdentifiedPair) -> Result<RecoveredIsometry> {
    let sf = pair.m().space_form();
    let dim = sf.ambient_dim(2);
    let w = pair.m().area_weights();
    let xs: Vec<&[f64]> = pair
        .m()
        .nodes()
        .iter()
        .map(|n| &n.position[..dim])
        .collect();
    let ys: Vec<&[f64]> = pair
        .m_tilde()
        .nodes()
        .iter()
        .map(|n| &n.position[..dim])
        .collect();
    let total: f64 = w.iter().sum();

    let (matrix, translation) = match sf.curvature() {
        Curvature::Flat => {
            let mut cx = vec![0.0; dim];
            let mut cy = vec![0.0; dim];
            for ((x, y), wi) in xs.iter().zip(&ys).zip(&w) {
                for i in 0..dim {
                    cx[i] += wi * x[i] / total;
                    cy[i] += wi * y[i] / total;
                }
            }
            let mut h = vec![0.0; dim * dim];
            for ((x, y), wi) in xs.iter().zip(&ys).zip(&w) {
                for i in 0..dim {
                    for j in 0..dim {
                        h[i * dim + j] += wi * (y[i] - cy[i]) * (x[j] - cx[j]);
                    }
                }
            }
            let q = polar_orthogonal(&h, dim)?;
            let t: Vec<f64> = (0..dim)
                .map(|i| cy[i] - (0..dim).map(|j| q[i * dim + j] * cx[j]).sum::<f64>())
                .collect();
            (q, t)
        }
        _ => {
            let mut yx = vec![0.0; dim * dim];
            let mut xx = vec![0.0; dim * dim];
            for ((x, y), wi) in xs.iter().zip(&ys).zip(&w) {
                for i in 0..dim {
                    for j in 0..dim {
                        yx[i * dim + j] += wi * y[i] * x[j];
                        xx[i * dim + j] += wi * x[i] * x[j];
                    }
                }
            }
            let a = matmul(&yx, &inverse(&xx, dim)?, dim);
            let a = if sf.curvature() == Curvature::Spherical {
                polar_orthogonal(&a, dim)?
            } else {
                a
            };
            (a, vec![0.0; dim])
        }
    };

    let fit_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            (0..dim)
                .map(|i| {
                    let ax: f64 = (0..dim).map(|j| matrix[i * dim + j] * x[j]).sum();
                    (ax + translation[i] - y[i]).abs()
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    Ok(RecoveredIsometry {
        dim,
        matrix,
        translation,
        fit_residual,
    })
}

/// Lorentz-orthogonality defect max|AᵀJA − J| of a recovered hyperbolic map.
pub fn lorentz_defect(a: &[f64], dim: usize) -> f64 {
    let mut ja = a.to_vec();
    for j in 0..dim {
        ja[j] = -ja[j];
    }
    let p = matmul(&transpose(a, dim), &ja, dim);
    let mut d = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let want = if i == j {
                if i == 0 {
                    -1.0
                } else {
                    1.0
                }
            } else {
                0.0
            };
            d = d.max((p[i * dim + j] - want).abs());
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Isometry gate on the relative metric defect.
    pub isometry: f64,
    /// Bound on the pointwise Gårding gap and the normalized rigidity integral.
    pub gap: f64,
    /// Bound on max ‖W − W̃‖.
    pub w_match: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            isometry: 1e-6,
            gap: 1e-5,
            w_match: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CongruenceStatus {
    Congruent,
    NotIsometric,
    HypothesisFail,
    Undecided,
}

impl CongruenceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CongruenceStatus::Congruent => "CONGRUENT",
            CongruenceStatus::NotIsometric => "NOT_ISOMETRIC",
            CongruenceStatus::HypothesisFail => "HYPOTHESIS_FAIL",
            CongruenceStatus::Undecided => "UNDECIDED",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            CongruenceStatus::Congruent => 0,
            CongruenceStatus::NotIsometric => 2,
            CongruenceStatus::HypothesisFail => 3,
            CongruenceStatus::Undecided => 4,
        }
    }
}

/// Which hypothesis failed, and where.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypothesisFailure {
    /// σ₂ ≤ 0 (so R ≤ K) or σ₁ ≤ 0 at `node` of M (`surface = 0`) or M̃ (`surface = 1`).
    OutsideGardingCone {
        surface: u8,
        node: usize,
        sigma1: f64,
        sigma2: f64,
    },
    /// φ̃′u + φ′ũ ≤ 0.
    NonPositiveWeight { node: usize, weight: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceVerdict {
    pub status: CongruenceStatus,
    pub tolerances: Tolerances,
    pub isometry_residual: f64,
    pub min_sigma2: f64,
    pub min_sigma2_node: usize,
    pub failure: Option<HypothesisFailure>,
    pub rigidity_integral: Option<f64>,
    /// Rigidity integral divided by ∫ weight·|σ₂| dμ.
    pub rigidity_relative: Option<f64>,
    pub max_gap: Option<f64>,
    pub max_w_difference: Option<f64>,
    pub recovered: Option<RecoveredIsometry>,
}

/// Runs the gates in order: isometry, Gårding-cone hypothesis, rigidity
/// integral and pointwise gap, Weingarten match.
pub fn congruence_test(pair: &IdentifiedPair, tol: &Tolerances) -> CongruenceVerdict {
    let iso = isometry_residual(pair.m(), pair.m_tilde());
    let (mut min_s2, mut min_node) = (f64::INFINITY, 0);
    let mut failure = None;
    for (surface, geom) in [pair.m(), pair.m_tilde()].iter().enumerate() {
        for (node, n) in geom.nodes().iter().enumerate() {
            let (s1, s2) = (n.sigma1(), n.sigma2());
            if s2 < min_s2 {
                min_s2 = s2;
                min_node = node;
            }
            if failure.is_none() && !(s1 > 0.0 && s2 > 0.0) {
                failure = Some(HypothesisFailure::OutsideGardingCone {
                    surface: surface as u8,
                    node,
                    sigma1: s1,
                    sigma2: s2,
                });
            }
        }
    }
    let mut verdict = CongruenceVerdict {
        status: CongruenceStatus::Undecided,
        tolerances: *tol,
        isometry_residual: iso,
        min_sigma2: min_s2,
        min_sigma2_node: min_node,
        failure: None,
        rigidity_integral: None,
        rigidity_relative: None,
        max_gap: None,
        max_w_difference: None,
        recovered: None,
    };
    if !(iso <= tol.isometry) {
        verdict.status = CongruenceStatus::NotIsometric;
        return verdict;
    }
    if failure.is_some() {
        verdict.status = CongruenceStatus::HypothesisFail;
        verdict.failure = failure;
        return verdict;
    }
    let rig: RigidityIntegrand = match rigidity_integrand_ungated(pair) {
        Ok(r) => r,
        Err(Error::NonPositiveWeight { node, weight }) => {
            verdict.status = CongruenceStatus::HypothesisFail;
            verdict.failure = Some(HypothesisFailure::NonPositiveWeight { node, weight });
            return verdict;
        }
        Err(_) => return verdict,
    };
    let scale: Vec<f64> = pair
        .m()
        .nodes()
        .iter()
        .zip(&rig.weight)
        .map(|(n, w)| w * n.sigma2().abs())
        .collect();
    let rel = rig.integral.abs() / pair.m().integrate(&scale);
    let max_gap = rig.max_abs_gap();
    let w_diff = pair.max_weingarten_difference();
    verdict.rigidity_integral = Some(rig.integral);
    verdict.rigidity_relative = Some(rel);
    verdict.max_gap = Some(max_gap);
    verdict.max_w_difference = Some(w_diff);
    if rel <= tol.gap && max_gap <= tol.gap && w_diff <= tol.w_match {
        verdict.status = CongruenceStatus::Congruent;
        verdict.recovered = recover_isometry(pair).ok();
    }
    verdict
}

/// Builds the pair (node-wise, or through `identification`) and runs
/// [`congruence_test`].
pub fn congruence_test_graphs(
    rg: &RadialGraph,
    rgt: &RadialGraph,
    identification: Option<&AmbientIsometry>,
    tol: &Tolerances,
) -> Result<CongruenceVerdict> {
    if rg.space_form() != rgt.space_form() {
        return Err(Error::SpaceFormMismatch);
    }
    let pair = match identification {
        Some(iso) => IdentifiedPair::by_isometry(rg, rgt, iso)?,
        None => IdentifiedPair::nodewise(rg, rgt)?,
    };
    Ok(congruence_test(&pair, tol))
}
