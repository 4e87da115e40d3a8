//! Space forms N(K) for K ∈ {−1, 0, +1} in geodesic polar coordinates
//! `ds² = dρ² + φ(ρ)² dθ²`, realized extrinsically:
//!
//! * K = 0: Euclidean space, `X = ρθ`.
//! * K = +1: unit sphere in Euclidean space, `X = (cos ρ, sin ρ θ)`.
//! * K = −1: upper sheet of the unit hyperboloid in Minkowski space with
//!   signature (−, +, …, +), `X = (cosh ρ, sinh ρ θ)`.
//!
//! For K = +1 the admissible radii are restricted to the open hemisphere
//! ρ < π/2, so that φ′ > 0 everywhere.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

// inherent f64 math only exists when std is linked
use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    Hyperbolic,
    Flat,
    Spherical,
}

impl Curvature {
    pub fn from_int(k: i32) -> Result<Self> {
        match k {
            -1 => Ok(Curvature::Hyperbolic),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Spherical),
            other => Err(Error::InvalidCurvature(other)),
        }
    }

    pub fn as_int(self) -> i32 {
        match self {
            Curvature::Hyperbolic => -1,
            Curvature::Flat => 0,
            Curvature::Spherical => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.as_int() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    curvature: Curvature,
    rho_max: f64,
}

impl SpaceForm {
    pub fn new(curvature: Curvature) -> Self {
        let rho_max = match curvature {
            Curvature::Spherical => FRAC_PI_2,
            _ => f64::INFINITY,
        };
        SpaceForm { curvature, rho_max }
    }

    pub fn from_int(k: i32) -> Result<Self> {
        Curvature::from_int(k).map(Self::new)
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// K as a float.
    pub fn k(&self) -> f64 {
        self.curvature.as_f64()
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    /// Length of an ambient coordinate vector for a hypersurface of dimension `n`.
    pub fn ambient_dim(&self, n: usize) -> usize {
        match self.curvature {
            Curvature::Flat => n + 1,
            _ => n + 2,
        }
    }

    pub fn check_radius(&self, rho: f64) -> Result<()> {
        if rho.is_finite() && rho >= 0.0 && rho < self.rho_max {
            Ok(())
        } else {
            Err(Error::RadiusOutOfDomain {
                rho,
                rho_max: self.rho_max,
            })
        }
    }

    /// φ(ρ): ρ, sin ρ or sinh ρ.
    pub fn warp(&self, rho: f64) -> Result<f64> {
        self.check_radius(rho)?;
        Ok(self.warp_unchecked(rho))
    }

    /// φ′(ρ): 1, cos ρ or cosh ρ.
    pub fn warp_prime(&self, rho: f64) -> Result<f64> {
        self.check_radius(rho)?;
        Ok(self.warp_prime_unchecked(rho))
    }

    /// Φ(ρ) = ∫₀^ρ φ: ρ²/2, 1 − cos ρ or cosh ρ − 1.
    pub fn potential(&self, rho: f64) -> Result<f64> {
        self.check_radius(rho)?;
        Ok(self.potential_unchecked(rho))
    }

    pub(crate) fn warp_unchecked(&self, rho: f64) -> f64 {
        match self.curvature {
            Curvature::Flat => rho,
            Curvature::Spherical => rho.sin(),
            Curvature::Hyperbolic => rho.sinh(),
        }
    }

    pub(crate) fn warp_prime_unchecked(&self, rho: f64) -> f64 {
        match self.curvature {
            Curvature::Flat => 1.0,
            Curvature::Spherical => rho.cos(),
            Curvature::Hyperbolic => rho.cosh(),
        }
    }

    pub(crate) fn potential_unchecked(&self, rho: f64) -> f64 {
        match self.curvature {
            Curvature::Flat => 0.5 * rho * rho,
            // 1 − cos ρ = 2 sin²(ρ/2), cosh ρ − 1 = 2 sinh²(ρ/2); no cancellation near 0
            Curvature::Spherical => {
                let s = (0.5 * rho).sin();
                2.0 * s * s
            }
            Curvature::Hyperbolic => {
                let s = (0.5 * rho).sinh();
                2.0 * s * s
            }
        }
    }

    /// Model point at geodesic distance `rho` from the pole in direction `theta`.
    pub fn embed(&self, rho: f64, theta: &[f64]) -> Result<AmbientPoint> {
        self.check_radius(rho)?;
        let norm = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitDirection { norm });
        }
        let phi = self.warp_unchecked(rho);
        let coords = match self.curvature {
            Curvature::Flat => theta.iter().map(|t| rho * t).collect(),
            _ => {
                let mut c = Vec::with_capacity(theta.len() + 1);
                c.push(self.warp_prime_unchecked(rho));
                c.extend(theta.iter().map(|t| phi * t));
                c
            }
        };
        Ok(AmbientPoint { coords })
    }

    /// Signature-aware bilinear form: Euclidean for K ∈ {0, +1}, Minkowski for K = −1.
    pub fn ambient_inner(&self, v: &[f64], w: &[f64]) -> Result<f64> {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: w.len(),
            });
        }
        Ok(self.inner_unchecked(v, w))
    }

    pub(crate) fn inner_unchecked(&self, v: &[f64], w: &[f64]) -> f64 {
        let euclid: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
        match self.curvature {
            Curvature::Hyperbolic => euclid - 2.0 * v[0] * w[0],
            _ => euclid,
        }
    }

    /// V = φ(ρ)∂_ρ in model coordinates: `p` for K = 0, `φ′(ρ) p − e₀` otherwise.
    pub fn killing_field(&self, p: &AmbientPoint) -> Vec<f64> {
        killing_field_coords(self.curvature, &p.coords)
    }

    /// Geodesic distance of a model point from the pole.
    pub fn radius_of(&self, p: &[f64]) -> f64 {
        match self.curvature {
            Curvature::Flat => p.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Curvature::Spherical => {
                let s = p[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
                s.atan2(p[0])
            }
            Curvature::Hyperbolic => {
                let s = p[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
                s.asinh()
            }
        }
    }

    /// Unit direction of a model point seen from the pole.
    pub fn direction_of(&self, p: &[f64]) -> Vec<f64> {
        let spatial = match self.curvature {
            Curvature::Flat => p,
            _ => &p[1..],
        };
        let s = spatial.iter().map(|x| x * x).sum::<f64>().sqrt();
        spatial.iter().map(|x| x / s).collect()
    }

    /// Deviation of `p` from the model constraint (unit sphere or unit hyperboloid).
    pub fn model_defect(&self, p: &[f64]) -> f64 {
        match self.curvature {
            Curvature::Flat => 0.0,
            Curvature::Spherical => (self.inner_unchecked(p, p) - 1.0).abs(),
            Curvature::Hyperbolic => {
                let d = (self.inner_unchecked(p, p) + 1.0).abs();
                if p[0] < 1.0 - UNIT_TOL {
                    d.max(1.0 - p[0])
                } else {
                    d
                }
            }
        }
    }
}

pub(crate) fn killing_field_coords(curvature: Curvature, p: &[f64]) -> Vec<f64> {
    match curvature {
        Curvature::Flat => p.to_vec(),
        _ => {
            // φ′(ρ) is the pole coordinate on both curved models
            let fp = p[0];
            let mut v: Vec<f64> = p.iter().map(|x| fp * x).collect();
            v[0] -= 1.0;
            v
        }
    }
}

/// A point of the model realization of N(K).
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientPoint {
    pub coords: Vec<f64>,
}

impl AmbientPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        AmbientPoint { coords }
    }

    /// The pole (origin of polar coordinates) for hypersurface dimension `n`.
    pub fn pole(sf: &SpaceForm, n: usize) -> Self {
        let mut coords = vec![0.0; sf.ambient_dim(n)];
        if sf.curvature() != Curvature::Flat {
            coords[0] = 1.0;
        }
        AmbientPoint { coords }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn all() -> [SpaceForm; 3] {
        [
            SpaceForm::new(Curvature::Hyperbolic),
            SpaceForm::new(Curvature::Flat),
            SpaceForm::new(Curvature::Spherical),
        ]
    }

    #[test]
    fn warp_examples() {
        let flat = SpaceForm::from_int(0).unwrap();
        let sph = SpaceForm::from_int(1).unwrap();
        let hyp = SpaceForm::from_int(-1).unwrap();
        assert_eq!(flat.warp(2.0).unwrap(), 2.0);
        assert_eq!(sph.warp(0.0).unwrap(), 0.0);
        // sinh 1 by its power series
        let series: f64 = (0..12)
            .map(|k| {
                let n = 2 * k + 1;
                1.0 / (1..=n).map(|i| i as f64).product::<f64>()
            })
            .sum();
        assert!((hyp.warp(1.0).unwrap() - series).abs() < 1e-14);
        assert!((series - 1.17520).abs() < 1e-5);
    }

    #[test]
    fn potential_examples() {
        let flat = SpaceForm::from_int(0).unwrap();
        let sph = SpaceForm::from_int(1).unwrap();
        let hyp = SpaceForm::from_int(-1).unwrap();
        assert_eq!(flat.potential(2.0).unwrap(), 2.0);
        assert!((sph.potential(PI / 2.0 - 1e-15).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(hyp.potential(0.0).unwrap(), 0.0);
        assert_eq!(hyp.warp_prime(0.0).unwrap(), 1.0);
    }

    #[test]
    fn domain_is_enforced() {
        let sph = SpaceForm::from_int(1).unwrap();
        assert!(matches!(
            sph.warp(PI / 2.0),
            Err(Error::RadiusOutOfDomain { .. })
        ));
        assert!(sph.warp(-0.1).is_err());
        assert!(SpaceForm::from_int(0).unwrap().warp(f64::NAN).is_err());
        assert!(SpaceForm::from_int(-1).unwrap().warp(50.0).is_ok());
        assert_eq!(SpaceForm::from_int(2), Err(Error::InvalidCurvature(2)));
    }

    #[test]
    fn potential_derivative_is_warp() {
        let h = 1e-5;
        for sf in all() {
            for i in 1..15 {
                let rho = 0.1 * i as f64;
                let fd =
                    (sf.potential(rho + h).unwrap() - sf.potential(rho - h).unwrap()) / (2.0 * h);
                assert!((fd - sf.warp(rho).unwrap()).abs() < 1e-9, "{sf:?} {rho}");
            }
        }
    }

    #[test]
    fn warp_second_derivative() {
        let h = 1e-4;
        for sf in all() {
            for i in 1..15 {
                let rho = 0.1 * i as f64;
                let w = |r: f64| sf.warp(r).unwrap();
                let fd2 = (w(rho + h) - 2.0 * w(rho) + w(rho - h)) / (h * h);
                assert!((fd2 + sf.k() * w(rho)).abs() < 1e-6);
                let wp = (w(rho + h) - w(rho - h)) / (2.0 * h);
                assert!((wp - sf.warp_prime(rho).unwrap()).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn embed_examples() {
        let e1 = [1.0, 0.0, 0.0];
        let flat = SpaceForm::from_int(0).unwrap();
        assert_eq!(flat.embed(1.0, &e1).unwrap().coords, vec![1.0, 0.0, 0.0]);

        let sph = SpaceForm::from_int(1).unwrap();
        let p = sph.embed(PI / 3.0, &e1).unwrap();
        let want = [0.5, 3f64.sqrt() / 2.0, 0.0, 0.0];
        for (a, b) in p.coords.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }

        let hyp = SpaceForm::from_int(-1).unwrap();
        let theta = [0.0, 0.6, 0.8];
        assert_eq!(
            hyp.embed(0.0, &theta).unwrap().coords,
            vec![1.0, 0.0, 0.0, 0.0]
        );
        assert!(hyp.embed(1.0, &[1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn inner_examples() {
        let flat = SpaceForm::from_int(0).unwrap();
        let hyp = SpaceForm::from_int(-1).unwrap();
        assert_eq!(
            flat.ambient_inner(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0])
                .unwrap(),
            1.0
        );
        assert_eq!(
            hyp.ambient_inner(&[1.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0])
                .unwrap(),
            -1.0
        );
        let p = hyp.embed(1.3, &[0.0, 0.6, 0.8]).unwrap();
        assert!((hyp.ambient_inner(&p.coords, &p.coords).unwrap() + 1.0).abs() < 1e-13);
        assert!(matches!(
            hyp.ambient_inner(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn killing_field_examples() {
        let flat = SpaceForm::from_int(0).unwrap();
        let p = AmbientPoint::new(vec![3.0, 0.0, 0.0]);
        assert_eq!(flat.killing_field(&p), vec![3.0, 0.0, 0.0]);

        let sph = SpaceForm::from_int(1).unwrap();
        let q = AmbientPoint::new(vec![0.0, 1.0, 0.0, 0.0]); // ρ = π/2
        let v = sph.killing_field(&q);
        assert_eq!(v, vec![-1.0, 0.0, 0.0, 0.0]);
        assert_eq!(sph.ambient_inner(&v, &q.coords).unwrap(), 0.0);

        let hyp = SpaceForm::from_int(-1).unwrap();
        let pole = AmbientPoint::pole(&hyp, 2);
        assert!(hyp.killing_field(&pole).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn killing_field_is_phi_times_radial_derivative() {
        let theta = [0.48, 0.6, 0.64];
        let h = 1e-6;
        for sf in all() {
            let rho = 0.9;
            let p = sf.embed(rho, &theta).unwrap();
            let a = sf.embed(rho + h, &theta).unwrap().coords;
            let b = sf.embed(rho - h, &theta).unwrap().coords;
            let phi = sf.warp(rho).unwrap();
            let v = sf.killing_field(&p);
            for i in 0..v.len() {
                let want = phi * (a[i] - b[i]) / (2.0 * h);
                assert!((v[i] - want).abs() < 1e-8);
            }
            // tangent to the curved models
            if sf.curvature() != Curvature::Flat {
                assert!(sf.ambient_inner(&v, &p.coords).unwrap().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn radius_and_direction_round_trip() {
        let theta = [0.48, 0.6, 0.64];
        for sf in all() {
            let p = sf.embed(1.2, &theta).unwrap();
            assert!((sf.radius_of(&p.coords) - 1.2).abs() < 1e-13);
            let d = sf.direction_of(&p.coords);
            for (a, b) in d.iter().zip(theta) {
                assert!((a - b).abs() < 1e-14);
            }
            assert!(sf.model_defect(&p.coords) < 1e-13);
        }
    }
}
