//! Gauss–Legendre × uniform-longitude grid on the parameter sphere S².
//!
//! Nodes sit at colatitudes ϑᵢ = arccos xᵢ, with xᵢ the Gauss–Legendre nodes
//! ordered so that ϑ increases, and at longitudes λⱼ = 2πj/n_lon. No node lies
//! on a pole. Node `k = i * n_lon + j`.
//!
//! Longitude derivatives use periodic spectral differentiation on each ring.
//! Colatitude derivatives use a double-covering trick: pairing the ring
//! values at λ and λ+π gives, along each great circle through the poles, an
//! even part (a smooth function of x = cos ϑ) and an odd part (sin ϑ times a
//! smooth function of x). Both are differentiated with barycentric polynomial
//! differentiation on the Gauss–Legendre nodes.
//!
//! Coordinate components of tensors are not scalar fields: a component with
//! an odd number of ϑ-indices changes sign when the meridian is continued
//! through the pole. [`Parity`] carries that information.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

// inherent f64 math only exists when std is linked
use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Behaviour of a field under continuation of a meridian through a pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Scalars and tensor components with an even number of ϑ-indices.
    Even,
    /// Tensor components with an odd number of ϑ-indices.
    Odd,
}

impl Parity {
    /// Parity of a lower-index component with `theta_indices` slots equal to ϑ.
    pub fn of_component(theta_indices: usize) -> Self {
        if theta_indices % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Gauss–Legendre nodes and weights on (−1, 1), nodes in decreasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone)]
pub struct SphereGrid {
    n_colat: usize,
    n_lon: usize,
    x: Vec<f64>,
    theta: Vec<f64>,
    sin_theta: Vec<f64>,
    lon: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
    dx: Vec<f64>,
    dxx: Vec<f64>,
    dl: Vec<f64>,
    dll: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_colat: usize, n_lon: usize) -> Result<Self> {
        if n_colat < 8 || n_lon < 8 || n_lon % 2 != 0 {
            return Err(Error::Resolution { n_colat, n_lon });
        }
        let (x, gl_w) = gauss_legendre(n_colat);
        let theta: Vec<f64> = x.iter().map(|x| x.acos()).collect();
        let sin_theta: Vec<f64> = x.iter().map(|x| (1.0 - x * x).sqrt()).collect();
        let h = 2.0 * PI / n_lon as f64;
        let lon: Vec<f64> = (0..n_lon).map(|j| h * j as f64).collect();
        let mut weights = Vec::with_capacity(n_colat * n_lon);
        for w in &gl_w {
            for _ in 0..n_lon {
                weights.push(w * h);
            }
        }

        let bary = barycentric_weights(&x);
        let (dx, dxx) = polynomial_diff_matrices(&x, &bary);
        let (dl, dll) = periodic_diff_matrices(n_lon);

        Ok(SphereGrid {
            n_colat,
            n_lon,
            x,
            theta,
            sin_theta,
            lon,
            weights,
            bary,
            dx,
            dxx,
            dl,
            dll,
        })
    }

    /// Shared handle, the form fields and geometries hold.
    pub fn shared(n_colat: usize, n_lon: usize) -> Result<Arc<Self>> {
        Self::new(n_colat, n_lon).map(Arc::new)
    }

    pub fn n_colat(&self) -> usize {
        self.n_colat
    }

    pub fn n_lon(&self) -> usize {
        self.n_lon
    }

    pub fn len(&self) -> usize {
        self.n_colat * self.n_lon
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, ring: usize, col: usize) -> usize {
        ring * self.n_lon + col
    }

    /// (ϑ, λ) of node `k`.
    pub fn angles(&self, k: usize) -> (f64, f64) {
        (self.theta[k / self.n_lon], self.lon[k % self.n_lon])
    }

    pub fn colatitudes(&self) -> &[f64] {
        &self.theta
    }

    pub fn longitudes(&self) -> &[f64] {
        &self.lon
    }

    pub fn cos_colatitudes(&self) -> &[f64] {
        &self.x
    }

    pub fn sin_colatitude(&self, k: usize) -> f64 {
        self.sin_theta[k / self.n_lon]
    }

    /// Quadrature weight per node; the weights integrate dA of the unit sphere.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Unit direction θ of node `k`.
    pub fn direction(&self, k: usize) -> [f64; 3] {
        let (t, l) = self.angles(k);
        direction(t, l)
    }

    /// Direction θ and its first and second parameter derivatives at node `k`:
    /// `[θ, θ_ϑ, θ_λ, θ_ϑϑ, θ_ϑλ, θ_λλ]`.
    pub fn direction_jet(&self, k: usize) -> [[f64; 3]; 6] {
        let (t, l) = self.angles(k);
        let (st, ct) = (t.sin(), t.cos());
        let (sl, cl) = (l.sin(), l.cos());
        [
            [st * cl, st * sl, ct],
            [ct * cl, ct * sl, -st],
            [-st * sl, st * cl, 0.0],
            [-st * cl, -st * sl, -ct],
            [-ct * sl, ct * cl, 0.0],
            [-st * cl, -st * sl, 0.0],
        ]
    }

    /// Σ weights · values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Field sampled from a function of (ϑ, λ).
    pub fn sample(self: &Arc<Self>, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        let values = (0..self.len())
            .map(|k| {
                let (t, l) = self.angles(k);
                f(t, l)
            })
            .collect();
        ScalarField {
            grid: Arc::clone(self),
            values,
        }
    }

    /// First and second parameter derivatives of nodal values.
    pub fn differentiate(&self, values: &[f64], parity: Parity) -> Derivatives {
        let n = self.len();
        assert_eq!(values.len(), n, "field size does not match grid");
        let mut d_l = vec![0.0; n];
        let mut d_ll = vec![0.0; n];
        for ring in 0..self.n_colat {
            let row = &values[ring * self.n_lon..(ring + 1) * self.n_lon];
            let out_l = &mut d_l[ring * self.n_lon..(ring + 1) * self.n_lon];
            mat_vec(&self.dl, row, out_l);
            let out_ll = &mut d_ll[ring * self.n_lon..(ring + 1) * self.n_lon];
            mat_vec(&self.dll, row, out_ll);
        }
        let (d_t, d_tt) = self.colatitude_derivatives(values, parity, true);
        let (d_tl, _) = self.colatitude_derivatives(&d_l, parity, false);
        Derivatives {
            t: d_t,
            l: d_l,
            tt: d_tt,
            tl: d_tl,
            ll: d_ll,
        }
    }

    /// First and (optionally) second ϑ-derivatives.
    fn colatitude_derivatives(
        &self,
        values: &[f64],
        parity: Parity,
        second: bool,
    ) -> (Vec<f64>, Vec<f64>) {
        let nc = self.n_colat;
        let nl = self.n_lon;
        let half = nl / 2;
        let p = parity.sign();
        let mut d_t = vec![0.0; nc * nl];
        let mut d_tt = if second {
            vec![0.0; nc * nl]
        } else {
            Vec::new()
        };

        let mut even = vec![0.0; nc];
        let mut odd = vec![0.0; nc];
        let mut even_x = vec![0.0; nc];
        let mut odd_x = vec![0.0; nc];
        let mut even_xx = vec![0.0; nc];
        let mut odd_xx = vec![0.0; nc];
        for j in 0..half {
            let jj = j + half;
            for i in 0..nc {
                let a = values[i * nl + j];
                let b = values[i * nl + jj];
                even[i] = 0.5 * (a + p * b);
                odd[i] = 0.5 * (a - p * b) / self.sin_theta[i];
            }
            mat_vec(&self.dx, &even, &mut even_x);
            mat_vec(&self.dx, &odd, &mut odd_x);
            if second {
                mat_vec(&self.dxx, &even, &mut even_xx);
                mat_vec(&self.dxx, &odd, &mut odd_xx);
            }
            for i in 0..nc {
                let x = self.x[i];
                let s = self.sin_theta[i];
                let s2 = s * s;
                let even_t = -s * even_x[i];
                let odd_t = x * odd[i] - s2 * odd_x[i];
                d_t[i * nl + j] = even_t + odd_t;
                d_t[i * nl + jj] = p * (even_t - odd_t);
                if second {
                    let even_tt = -x * even_x[i] + s2 * even_xx[i];
                    let odd_tt = -s * odd[i] - 3.0 * s * x * odd_x[i] + s2 * s * odd_xx[i];
                    d_tt[i * nl + j] = even_tt + odd_tt;
                    d_tt[i * nl + jj] = p * (even_tt - odd_tt);
                }
            }
        }
        (d_t, d_tt)
    }

    /// Spectral interpolation of nodal values at an arbitrary (ϑ, λ).
    pub fn interpolate(&self, values: &[f64], parity: Parity, theta: f64, lambda: f64) -> f64 {
        let weights_a = self.trig_weights(lambda);
        let weights_b = self.trig_weights(lambda + PI);
        let p = parity.sign();
        let nl = self.n_lon;
        let mut even = vec![0.0; self.n_colat];
        let mut odd = vec![0.0; self.n_colat];
        for i in 0..self.n_colat {
            let row = &values[i * nl..(i + 1) * nl];
            let a = apply_trig(&weights_a, row);
            let b = apply_trig(&weights_b, row);
            even[i] = 0.5 * (a + p * b);
            odd[i] = 0.5 * (a - p * b) / self.sin_theta[i];
        }
        let x = theta.cos();
        let bw = self.poly_weights(x);
        apply_trig(&bw, &even) + theta.sin() * apply_trig(&bw, &odd)
    }

    /// Interpolation at a unit direction vector.
    pub fn interpolate_direction(&self, values: &[f64], dir: &[f64]) -> f64 {
        let z = dir[2].clamp(-1.0, 1.0);
        let theta = z.acos();
        let lambda = dir[1].atan2(dir[0]);
        self.interpolate(values, Parity::Even, theta, lambda)
    }

    /// Normalized barycentric weights of the periodic interpolant at λ.
    fn trig_weights(&self, lambda: f64) -> TrigWeights {
        let h = 2.0 * PI / self.n_lon as f64;
        let mut w = vec![0.0; self.n_lon];
        let mut total = 0.0;
        for (j, wj) in w.iter_mut().enumerate() {
            let d = 0.5 * (lambda - h * j as f64);
            let s = d.sin();
            if s.abs() < 1e-14 {
                return TrigWeights::Node(j);
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            *wj = sign * d.cos() / s;
            total += *wj;
        }
        w.iter_mut().for_each(|v| *v /= total);
        TrigWeights::Mixed(w)
    }

    fn poly_weights(&self, x: f64) -> TrigWeights {
        let mut w = vec![0.0; self.n_colat];
        let mut total = 0.0;
        for (i, wi) in w.iter_mut().enumerate() {
            let d = x - self.x[i];
            if d.abs() < 1e-15 {
                return TrigWeights::Node(i);
            }
            *wi = self.bary[i] / d;
            total += *wi;
        }
        w.iter_mut().for_each(|v| *v /= total);
        TrigWeights::Mixed(w)
    }
}

enum TrigWeights {
    Node(usize),
    Mixed(Vec<f64>),
}

fn apply_trig(w: &TrigWeights, values: &[f64]) -> f64 {
    match w {
        TrigWeights::Node(j) => values[*j],
        TrigWeights::Mixed(w) => w.iter().zip(values).map(|(a, b)| a * b).sum(),
    }
}

pub fn direction(theta: f64, lambda: f64) -> [f64; 3] {
    let st = theta.sin();
    [st * lambda.cos(), st * lambda.sin(), theta.cos()]
}

fn mat_vec(m: &[f64], v: &[f64], out: &mut [f64]) {
    let n = v.len();
    for (i, o) in out.iter_mut().enumerate() {
        let row = &m[i * n..(i + 1) * n];
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

fn barycentric_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    // scaled by 2 per factor so the products stay O(1) for large n
    let mut w: Vec<f64> = (0..n)
        .map(|j| {
            let prod: f64 = (0..n)
                .filter(|&k| k != j)
                .map(|k| 2.0 * (x[j] - x[k]))
                .product();
            1.0 / prod
        })
        .collect();
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    w.iter_mut().for_each(|v| *v /= scale);
    w
}

/// First and second barycentric differentiation matrices (row-major).
fn polynomial_diff_matrices(x: &[f64], w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let mut d1 = vec![0.0; n * n];
    let mut d2 = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (x[i] - x[j]);
                d1[i * n + j] = v;
                diag -= v;
            }
        }
        d1[i * n + i] = diag;
    }
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = 2.0 * d1[i * n + j] * (d1[i * n + i] - 1.0 / (x[i] - x[j]));
                d2[i * n + j] = v;
                diag -= v;
            }
        }
        d2[i * n + i] = diag;
    }
    (d1, d2)
}

/// Periodic spectral differentiation matrices for an even number of points.
fn periodic_diff_matrices(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * PI / n as f64;
    let mut d1 = vec![0.0; n * n];
    let mut d2 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let k = (i as isize - j as isize).rem_euclid(n as isize) as usize;
            if k == 0 {
                d2[i * n + j] = -PI * PI / (3.0 * h * h) - 1.0 / 6.0;
                continue;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let half = 0.5 * k as f64 * h;
            d1[i * n + j] = 0.5 * sign / half.tan();
            let s = half.sin();
            d2[i * n + j] = -0.5 * sign / (s * s);
        }
    }
    (d1, d2)
}

/// Parameter derivatives of a field at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives {
    pub t: Vec<f64>,
    pub l: Vec<f64>,
    pub tt: Vec<f64>,
    pub tl: Vec<f64>,
    pub ll: Vec<f64>,
}

impl Derivatives {
    /// Gradient `[∂_ϑ, ∂_λ]` at node `k`.
    pub fn gradient(&self, k: usize) -> [f64; 2] {
        [self.t[k], self.l[k]]
    }

    /// Matrix of second partials at node `k`.
    pub fn hessian(&self, k: usize) -> [[f64; 2]; 2] {
        [[self.tt[k], self.tl[k]], [self.tl[k], self.ll[k]]]
    }
}

/// One value per grid node.
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node });
        }
        Ok(ScalarField { grid, values })
    }

    pub fn constant(grid: Arc<SphereGrid>, c: f64) -> Self {
        let values = vec![c; grid.len()];
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn integrate(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    pub fn differentiate(&self) -> Derivatives {
        self.grid.differentiate(&self.values, Parity::Even)
    }

    pub fn interpolate(&self, theta: f64, lambda: f64) -> f64 {
        self.grid
            .interpolate(&self.values, Parity::Even, theta, lambda)
    }

    pub fn min(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (k, v)| if v < acc.1 { (k, v) } else { acc },
            )
    }

    pub fn max(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, v)| if v > acc.1 { (k, v) } else { acc },
            )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nc: usize, nl: usize) -> Arc<SphereGrid> {
        SphereGrid::shared(nc, nl).unwrap()
    }

    fn max_err(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn resolution_floor() {
        assert!(SphereGrid::new(7, 16).is_err());
        assert!(SphereGrid::new(8, 6).is_err());
        assert!(SphereGrid::new(8, 9).is_err());
        assert_eq!(SphereGrid::new(8, 8).unwrap().len(), 64);
        assert_eq!(SphereGrid::new(16, 32).unwrap().len(), 512);
    }

    #[test]
    fn gauss_legendre_small_cases() {
        let (x, w) = gauss_legendre(3);
        let r = (0.6f64).sqrt();
        assert!((x[0] - r).abs() < 1e-15 && x[1].abs() < 1e-15 && (x[2] + r).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        // exact for degree 2n-1
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        for (nc, nl) in [(8, 8), (16, 32), (33, 64)] {
            let g = SphereGrid::new(nc, nl).unwrap();
            let s: f64 = g.weights().iter().sum();
            assert!((s - 4.0 * PI).abs() < 1e-12);
            assert!(g.colatitudes().iter().all(|&t| t > 0.0 && t < PI));
            assert!(g.colatitudes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn integrate_examples() {
        let g = grid(16, 32);
        let c2 = g.sample(|t, _| t.cos().powi(2));
        assert!((c2.integrate() - 4.0 * PI / 3.0).abs() < 1e-13);
        let y20 = g.sample(|t, _| (5.0 / (16.0 * PI)).sqrt() * (3.0 * t.cos().powi(2) - 1.0));
        assert!(y20.integrate().abs() < 1e-12);
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let g = grid(16, 32);
        let d = ScalarField::constant(Arc::clone(&g), 2.5).differentiate();
        for v in [&d.t, &d.l, &d.tt, &d.tl, &d.ll] {
            assert!(v.iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn cos_theta_derivative() {
        let g = grid(16, 32);
        let d = g.sample(|t, _| t.cos()).differentiate();
        let want: Vec<f64> = (0..g.len()).map(|k| -g.angles(k).0.sin()).collect();
        assert!(max_err(&d.t, &want) < 1e-10);
        let want2: Vec<f64> = (0..g.len()).map(|k| -g.angles(k).0.cos()).collect();
        assert!(max_err(&d.tt, &want2) < 1e-10);
    }

    #[test]
    fn mixed_derivative_of_odd_mode() {
        let g = grid(16, 32);
        let d = g.sample(|t, l| t.sin() * l.cos()).differentiate();
        let tl: Vec<f64> = (0..g.len())
            .map(|k| {
                let (t, l) = g.angles(k);
                -t.cos() * l.sin()
            })
            .collect();
        assert!(max_err(&d.tl, &tl) < 1e-10);
        let tt: Vec<f64> = (0..g.len())
            .map(|k| {
                let (t, l) = g.angles(k);
                -t.sin() * l.cos()
            })
            .collect();
        assert!(max_err(&d.tt, &tt) < 1e-10);
        let ll: Vec<f64> = (0..g.len())
            .map(|k| {
                let (t, l) = g.angles(k);
                -t.sin() * l.cos()
            })
            .collect();
        assert!(max_err(&d.ll, &ll) < 1e-10);
    }

    #[test]
    fn analytic_field_derivatives_converge() {
        // smooth, not band-limited
        let f = |t: f64, l: f64| (0.7 * t.sin() * l.cos() + 0.4 * t.cos()).exp();
        let ft = |t: f64, l: f64| f(t, l) * (0.7 * t.cos() * l.cos() - 0.4 * t.sin());
        let mut prev = f64::INFINITY;
        for (nc, nl) in [(8, 16), (16, 32), (32, 64)] {
            let g = grid(nc, nl);
            let d = g.sample(f).differentiate();
            let want: Vec<f64> = (0..g.len())
                .map(|k| {
                    let (t, l) = g.angles(k);
                    ft(t, l)
                })
                .collect();
            let err = max_err(&d.t, &want);
            assert!(err < prev / 10.0 || err < 1e-12, "{nc}: {err} vs {prev}");
            prev = err;
        }
        assert!(prev < 1e-11);
    }

    #[test]
    fn odd_parity_component() {
        // g_ϑλ-like component: ∂_ϑ of a scalar is odd
        let g = grid(16, 32);
        let f = |t: f64, l: f64| t.sin() * t.cos() * (2.0 * l).sin() + t.cos();
        let scalar = g.sample(f);
        let first = scalar.differentiate();
        let second = g.differentiate(&first.t, Parity::Odd);
        assert!(max_err(&second.t, &scalar.differentiate().tt) < 1e-9);
        // ∂_λ∂_ϑ f == ∂_ϑ∂_λ f
        assert!(max_err(&second.l, &first.tl) < 1e-9);
    }

    #[test]
    fn interpolation_is_spectral() {
        let g = grid(16, 32);
        let f = |t: f64, l: f64| (0.5 * t.sin() * (l - 0.3).cos() + 0.2 * t.cos()).exp();
        let field = g.sample(f);
        for &(t, l) in &[(0.01, 0.1), (1.0, 2.0), (2.9, 5.5), (PI / 2.0, 0.0)] {
            let v = field.interpolate(t, l);
            assert!((v - f(t, l)).abs() < 1e-11);
        }
        // exact at nodes
        let k = g.node(3, 5);
        let (t, l) = g.angles(k);
        assert_eq!(field.interpolate(t, l), field.values()[k]);
    }

    #[test]
    fn periodic_derivative_integrates_to_zero() {
        let g = grid(16, 32);
        let field = g.sample(|t, l| (t.sin() * l.sin()).exp() * (1.0 + t.cos()));
        let d = field.differentiate();
        assert!(g.integrate(&d.l).abs() < 1e-10);
    }
}
