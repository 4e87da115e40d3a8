//! Extrinsic and intrinsic geometry of star-shaped surfaces in a space form.
//!
//! Everything is computed in the flat model space (Euclidean R³, Euclidean R⁴
//! or Minkowski R¹'³). The unit normal ν is orthogonal to both tangent vectors
//! and, on the curved models, to the position vector; its sign follows the
//! orientation of the (ϑ, λ) parametrization, which is outward for radial
//! graphs. The second fundamental form is `h_ab = −⟨∂_a∂_b X, ν⟩`, so round
//! spheres have positive principal curvatures.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

// inherent f64 math only exists when std is linked
use crate::error::{Error, Result};
use crate::grid::{Derivatives, Parity, ScalarField, SphereGrid};
use crate::linalg::{cross3, cross4, det2, eigenvalues2, inv2, mul2, Mat2};
use crate::sigma::{self, MixedTensor};
use crate::spaceform::{killing_field_coords, Curvature, SpaceForm};
#[allow(unused_imports)]
use num_traits::Float;

const MODEL_TOL: f64 = 1e-9;

/// Star-shaped surface given by its geodesic radius over the parameter sphere.
#[derive(Debug, Clone)]
pub struct RadialGraph {
    rho: ScalarField,
    space_form: SpaceForm,
}

impl RadialGraph {
    pub fn new(space_form: SpaceForm, rho: ScalarField) -> Result<Self> {
        for (node, &r) in rho.values().iter().enumerate() {
            if !(r > 0.0 && r < space_form.rho_max()) {
                return Err(Error::NodeOutOfDomain {
                    node,
                    rho: r,
                    rho_max: space_form.rho_max(),
                });
            }
        }
        Ok(RadialGraph { rho, space_form })
    }

    pub fn constant(space_form: SpaceForm, grid: Arc<SphereGrid>, radius: f64) -> Result<Self> {
        Self::new(space_form, ScalarField::constant(grid, radius))
    }

    pub fn from_fn(
        space_form: SpaceForm,
        grid: &Arc<SphereGrid>,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let rho = grid.sample(f);
        ScalarField::new(Arc::clone(grid), rho.into_values())
            .and_then(|rho| Self::new(space_form, rho))
    }

    pub fn rho(&self) -> &ScalarField {
        &self.rho
    }

    pub fn space_form(&self) -> SpaceForm {
        self.space_form
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        self.rho.grid()
    }

    /// Model positions `embed(ρ(θ), θ)` at every node.
    pub fn positions(&self) -> Vec<[f64; 4]> {
        let grid = self.grid();
        (0..grid.len())
            .map(|k| {
                let r = self.rho.values()[k];
                let theta = grid.direction(k);
                let phi = self.space_form.warp_unchecked(r);
                pack(
                    self.space_form.curvature(),
                    self.space_form.warp_prime_unchecked(r),
                    scale3(&theta, phi),
                )
            })
            .collect()
    }

    /// Embedding and its parameter derivatives by the chain rule through ρ.
    fn jets(&self) -> Vec<Jet> {
        let grid = self.grid();
        let sf = self.space_form;
        let curv = sf.curvature();
        let k = sf.k();
        let d = self.rho.differentiate();
        (0..grid.len())
            .map(|node| {
                let r = self.rho.values()[node];
                let [th, th_t, th_l, th_tt, th_tl, th_ll] = grid.direction_jet(node);
                let phi = sf.warp_unchecked(r);
                let fp = sf.warp_prime_unchecked(r);
                let fpp = -k * phi;
                // pole coordinate a(ρ) = φ′(ρ) on the curved models; a′ = −Kφ, a″ = −Kφ′
                let (a, a1, a2) = (fp, -k * phi, -k * fp);
                let (rt, rl) = (d.t[node], d.l[node]);
                let (rtt, rtl, rll) = (d.tt[node], d.tl[node], d.ll[node]);

                let first = |ra: f64, th_a: &[f64; 3]| {
                    pack(
                        curv,
                        a1 * ra,
                        add3(&scale3(&th, fp * ra), &scale3(th_a, phi)),
                    )
                };
                let second = |ra: f64,
                              rb: f64,
                              rab: f64,
                              th_a: &[f64; 3],
                              th_b: &[f64; 3],
                              th_ab: &[f64; 3]| {
                    let spatial = add3(
                        &add3(&scale3(&th, fpp * ra * rb + fp * rab), &scale3(th_ab, phi)),
                        &add3(&scale3(th_b, fp * ra), &scale3(th_a, fp * rb)),
                    );
                    pack(curv, a2 * ra * rb + a1 * rab, spatial)
                };
                Jet {
                    x: pack(curv, a, scale3(&th, phi)),
                    xt: first(rt, &th_t),
                    xl: first(rl, &th_l),
                    xtt: second(rt, rt, rtt, &th_t, &th_t, &th_tt),
                    xtl: second(rt, rl, rtl, &th_t, &th_l, &th_tl),
                    xll: second(rl, rl, rll, &th_l, &th_l, &th_ll),
                }
            })
            .collect()
    }
}

fn pack(curv: Curvature, first: f64, spatial: [f64; 3]) -> [f64; 4] {
    match curv {
        Curvature::Flat => [spatial[0], spatial[1], spatial[2], 0.0],
        _ => [first, spatial[0], spatial[1], spatial[2]],
    }
}

fn scale3(v: &[f64; 3], s: f64) -> [f64; 3] {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn add3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[derive(Debug, Clone, Copy)]
struct Jet {
    x: [f64; 4],
    xt: [f64; 4],
    xl: [f64; 4],
    xtt: [f64; 4],
    xtl: [f64; 4],
    xll: [f64; 4],
}

/// Geometry at one grid node. Tensor indices refer to the (ϑ, λ) parameter basis.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeGeometry {
    /// Model position (for K = 0 the fourth slot is unused).
    pub position: [f64; 4],
    /// `[X_ϑ, X_λ]`.
    pub tangents: [[f64; 4]; 2],
    /// `[X_ϑϑ, X_ϑλ, X_λλ]`.
    pub second_derivatives: [[f64; 4]; 3],
    pub normal: [f64; 4],
    pub killing: [f64; 4],
    pub g: Mat2,
    pub g_inv: Mat2,
    pub h: Mat2,
    /// Weingarten map Wᵃ_b = g^{ac} h_cb.
    pub w: Mat2,
    /// `christoffel[c][a][b]` = Γᶜ_ab.
    pub christoffel: [Mat2; 2],
    pub support: f64,
    pub rho: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub potential: f64,
    pub sqrt_det_g: f64,
}

impl NodeGeometry {
    pub fn weingarten(&self) -> MixedTensor {
        MixedTensor::from(self.w)
    }

    pub fn sigma1(&self) -> f64 {
        self.w[0][0] + self.w[1][1]
    }

    pub fn sigma2(&self) -> f64 {
        det2(&self.w)
    }

    pub fn principal_curvatures(&self) -> (f64, f64) {
        eigenvalues2(&self.w)
    }
}

/// Per-node geometry of a surface over a [`SphereGrid`].
#[derive(Debug, Clone)]
pub struct SurfaceGeometry {
    grid: Arc<SphereGrid>,
    space_form: SpaceForm,
    nodes: Vec<NodeGeometry>,
    potential_derivs: Derivatives,
    phi_prime_derivs: Derivatives,
}

/// Result of [`star_shaped_certificate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarShapeCertificate {
    pub star_shaped: bool,
    pub min_support: f64,
    pub min_node: usize,
}

impl SurfaceGeometry {
    /// Full geometry of a radial graph; rejects u ≤ 0 and degenerate metrics.
    pub fn compute(rg: &RadialGraph) -> Result<Self> {
        let geom = Self::build(rg.space_form, Arc::clone(rg.grid()), rg.jets())?;
        geom.check_support()?;
        Ok(geom)
    }

    /// Geometry of an arbitrary parametrization of a surface in the model,
    /// given by its positions at the grid nodes. Coordinates are differentiated
    /// spectrally, so positions must come from a smooth map of S².
    pub fn from_positions(
        space_form: SpaceForm,
        grid: Arc<SphereGrid>,
        positions: &[[f64; 4]],
    ) -> Result<Self> {
        if positions.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: positions.len(),
            });
        }
        let dim = space_form.ambient_dim(2);
        for (node, p) in positions.iter().enumerate() {
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { node });
            }
            let defect = space_form.model_defect(&p[..dim]);
            if defect > MODEL_TOL {
                return Err(Error::OffModel { node, defect });
            }
            let rho = space_form.radius_of(&p[..dim]);
            if !(rho > 0.0 && rho < space_form.rho_max()) {
                return Err(Error::NodeOutOfDomain {
                    node,
                    rho,
                    rho_max: space_form.rho_max(),
                });
            }
        }
        let mut jets: Vec<Jet> = positions
            .iter()
            .map(|&x| Jet {
                x,
                xt: [0.0; 4],
                xl: [0.0; 4],
                xtt: [0.0; 4],
                xtl: [0.0; 4],
                xll: [0.0; 4],
            })
            .collect();
        let mut comp = vec![0.0; grid.len()];
        for c in 0..dim {
            for (v, p) in comp.iter_mut().zip(positions) {
                *v = p[c];
            }
            let d = grid.differentiate(&comp, Parity::Even);
            for (k, jet) in jets.iter_mut().enumerate() {
                jet.xt[c] = d.t[k];
                jet.xl[c] = d.l[k];
                jet.xtt[c] = d.tt[k];
                jet.xtl[c] = d.tl[k];
                jet.xll[c] = d.ll[k];
            }
        }
        let geom = Self::build(space_form, grid, jets)?;
        geom.check_support()?;
        Ok(geom)
    }

    fn check_support(&self) -> Result<()> {
        match self.nodes.iter().position(|n| !(n.support > 0.0)) {
            Some(node) => Err(Error::NotStarShaped {
                node,
                support: self.nodes[node].support,
            }),
            None => Ok(()),
        }
    }

    fn build(sf: SpaceForm, grid: Arc<SphereGrid>, jets: Vec<Jet>) -> Result<Self> {
        let curv = sf.curvature();
        let dim = sf.ambient_dim(2);
        let ip = |a: &[f64; 4], b: &[f64; 4]| sf.inner_unchecked(&a[..dim], &b[..dim]);

        let mut nodes = Vec::with_capacity(jets.len());
        for (node, j) in jets.iter().enumerate() {
            let g = [
                [ip(&j.xt, &j.xt), ip(&j.xt, &j.xl)],
                [ip(&j.xl, &j.xt), ip(&j.xl, &j.xl)],
            ];
            let det = det2(&g);
            if !(det > 0.0) || !det.is_finite() {
                return Err(Error::SingularMetric { node, det });
            }
            let g_inv = inv2(&g).ok_or(Error::SingularMetric { node, det })?;

            let raw = match curv {
                Curvature::Flat => {
                    let c = cross3(&[j.xt[0], j.xt[1], j.xt[2]], &[j.xl[0], j.xl[1], j.xl[2]]);
                    [c[0], c[1], c[2], 0.0]
                }
                Curvature::Spherical => {
                    let c = cross4(&j.x, &j.xt, &j.xl);
                    [-c[0], -c[1], -c[2], -c[3]]
                }
                Curvature::Hyperbolic => {
                    // Minkowski-orthogonal: flip the timelike slot of the Euclidean cross product
                    let c = cross4(&j.x, &j.xt, &j.xl);
                    [c[0], -c[1], -c[2], -c[3]]
                }
            };
            let len = ip(&raw, &raw).sqrt();
            if !(len > 0.0) {
                return Err(Error::SingularMetric { node, det });
            }
            let normal = [raw[0] / len, raw[1] / len, raw[2] / len, raw[3] / len];

            let h = [
                [-ip(&j.xtt, &normal), -ip(&j.xtl, &normal)],
                [-ip(&j.xtl, &normal), -ip(&j.xll, &normal)],
            ];
            let w = mul2(&g_inv, &h);

            let kv = killing_field_coords(curv, &j.x[..dim]);
            let mut killing = [0.0; 4];
            killing[..dim].copy_from_slice(&kv);
            let support = ip(&killing, &normal);

            let rho = sf.radius_of(&j.x[..dim]);
            nodes.push(NodeGeometry {
                position: j.x,
                tangents: [j.xt, j.xl],
                second_derivatives: [j.xtt, j.xtl, j.xll],
                normal,
                killing,
                g,
                g_inv,
                h,
                w,
                christoffel: [[[0.0; 2]; 2]; 2],
                support,
                rho,
                phi: sf.warp_unchecked(rho),
                phi_prime: sf.warp_prime_unchecked(rho),
                potential: sf.potential_unchecked(rho),
                sqrt_det_g: det.sqrt(),
            });
        }

        // Γ_{d,ab} = ⟨X_ab, X_d⟩: the model spaces sit flat in their ambient space
        for (n, j) in nodes.iter_mut().zip(&jets) {
            let second = |a: usize, b: usize| match a + b {
                0 => &j.xtt,
                1 => &j.xtl,
                _ => &j.xll,
            };
            let tangent = |d: usize| if d == 0 { &j.xt } else { &j.xl };
            let mut lower = [[[0.0; 2]; 2]; 2];
            for (d, ld) in lower.iter_mut().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        ld[a][b] = ip(second(a, b), tangent(d));
                    }
                }
            }
            for c in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        n.christoffel[c][a][b] =
                            n.g_inv[c][0] * lower[0][a][b] + n.g_inv[c][1] * lower[1][a][b];
                    }
                }
            }
        }

        let comp = |nodes: &[NodeGeometry], f: &dyn Fn(&NodeGeometry) -> f64| {
            nodes.iter().map(f).collect::<Vec<f64>>()
        };
        let potential_derivs = grid.differentiate(&comp(&nodes, &|n| n.potential), Parity::Even);
        let phi_prime_derivs = grid.differentiate(&comp(&nodes, &|n| n.phi_prime), Parity::Even);

        Ok(SurfaceGeometry {
            grid,
            space_form: sf,
            nodes,
            potential_derivs,
            phi_prime_derivs,
        })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn space_form(&self) -> SpaceForm {
        self.space_form
    }

    pub fn nodes(&self) -> &[NodeGeometry] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> &NodeGeometry {
        &self.nodes[k]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Parameter derivatives of the polar potential Φ(ρ) restricted to the surface.
    pub fn potential_derivatives(&self) -> &Derivatives {
        &self.potential_derivs
    }

    /// Parameter derivatives of φ′(ρ) restricted to the surface.
    pub fn phi_prime_derivatives(&self) -> &Derivatives {
        &self.phi_prime_derivs
    }

    fn field(&self, f: impl Fn(&NodeGeometry) -> f64) -> ScalarField {
        let values = self.nodes.iter().map(f).collect();
        ScalarField::new(Arc::clone(&self.grid), values).expect("geometry fields are finite")
    }

    pub fn support(&self) -> ScalarField {
        self.field(|n| n.support)
    }

    pub fn rho(&self) -> ScalarField {
        self.field(|n| n.rho)
    }

    pub fn sigma1(&self) -> ScalarField {
        self.field(NodeGeometry::sigma1)
    }

    pub fn sigma2(&self) -> ScalarField {
        self.field(NodeGeometry::sigma2)
    }

    /// κ₁ ≤ κ₂ at every node.
    pub fn principal_curvatures(&self) -> (ScalarField, ScalarField) {
        (
            self.field(|n| n.principal_curvatures().0),
            self.field(|n| n.principal_curvatures().1),
        )
    }

    /// Quadrature weights for ∫_M: grid weight × √det g / sin ϑ.
    pub fn area_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(k, n)| self.grid.weights()[k] * n.sqrt_det_g / self.grid.sin_colatitude(k))
            .collect()
    }

    /// ∫_M f dμ for nodal values `f`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.area_weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }

    pub fn area(&self) -> f64 {
        self.area_weights().iter().sum()
    }

    /// ∇_a∇_b f = ∂_a∂_b f − Γᶜ_ab ∂_c f at every node.
    pub fn covariant_hessian(&self, f: &[f64]) -> Vec<Mat2> {
        let d = self.grid.differentiate(f, Parity::Even);
        self.hessian_from_derivatives(&d)
    }

    pub(crate) fn hessian_from_derivatives(&self, d: &Derivatives) -> Vec<Mat2> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(k, n)| {
                let grad = d.gradient(k);
                let second = d.hessian(k);
                let mut out = [[0.0; 2]; 2];
                for a in 0..2 {
                    for b in 0..2 {
                        out[a][b] = second[a][b]
                            - n.christoffel[0][a][b] * grad[0]
                            - n.christoffel[1][a][b] * grad[1];
                    }
                }
                out
            })
            .collect()
    }

    /// Covariant derivative ∇_c T_ab of a symmetric covariant 2-tensor field,
    /// returned as `[c][a][b]` per node.
    pub fn covariant_derivative_sym2(&self, t: &[Mat2]) -> Vec<[Mat2; 2]> {
        let comp = |a: usize, b: usize| t.iter().map(|m| m[a][b]).collect::<Vec<f64>>();
        let d00 = self.grid.differentiate(&comp(0, 0), Parity::Even);
        let d01 = self.grid.differentiate(&comp(0, 1), Parity::Odd);
        let d11 = self.grid.differentiate(&comp(1, 1), Parity::Even);
        self.nodes
            .iter()
            .enumerate()
            .map(|(k, n)| {
                let partial = |c: usize, a: usize, b: usize| {
                    let d = match (a, b) {
                        (0, 0) => &d00,
                        (1, 1) => &d11,
                        _ => &d01,
                    };
                    if c == 0 {
                        d.t[k]
                    } else {
                        d.l[k]
                    }
                };
                let tk = &t[k];
                let gam = &n.christoffel;
                let mut out = [[[0.0; 2]; 2]; 2];
                for c in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            let mut v = partial(c, a, b);
                            for e in 0..2 {
                                v -= gam[e][c][a] * tk[e][b] + gam[e][c][b] * tk[a][e];
                            }
                            out[c][a][b] = v;
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// Largest g-norm of ∇_a h_bc − ∇_b h_ac over nodes.
    pub fn codazzi_defect(&self) -> f64 {
        let h: Vec<Mat2> = self.nodes.iter().map(|n| n.h).collect();
        let dh = self.covariant_derivative_sym2(&h);
        self.nodes
            .iter()
            .zip(&dh)
            .map(|(n, d)| {
                // only the (ϑ, λ) antisymmetric part is independent in 2D
                let mut s = 0.0;
                for c in 0..2 {
                    for c2 in 0..2 {
                        let diff = d[0][1][c] - d[1][0][c];
                        let diff2 = d[0][1][c2] - d[1][0][c2];
                        s += n.g_inv[c][c2] * diff * diff2;
                    }
                }
                // one factor of det g⁻¹ for the antisymmetric pair (a, b)
                (s.max(0.0) / det2(&n.g)).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Largest |(g W) − (g W)ᵀ| entry, i.e. asymmetry of h recovered from W.
    pub fn weingarten_asymmetry(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| {
                let gw = mul2(&n.g, &n.w);
                (gw[0][1] - gw[1][0]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Per-node σ₂ via the general-n algebra (cross-check of the 2×2 determinant).
    pub fn sigma2_general(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .map(|n| sigma::sigma2(&n.weingarten()))
            .collect()
    }
}

/// Support-function verdict for a radial graph; never errors on u ≤ 0.
pub fn star_shaped_certificate(rg: &RadialGraph) -> Result<StarShapeCertificate> {
    let geom = SurfaceGeometry::build(rg.space_form, Arc::clone(rg.grid()), rg.jets())?;
    let (min_node, min_support) = geom.support().min();
    Ok(StarShapeCertificate {
        star_shaped: min_support > 0.0,
        min_support,
        min_node,
    })
}
