//! Real spherical harmonics, unit-normalized over S², without the
//! Condon–Shortley phase:
//!
//! * `Y_l^0 = N_l0 P_l(cos ϑ)`
//! * `Y_l^m = √2 N_lm P_l^m(cos ϑ) cos(mλ)` for m > 0
//! * `Y_l^m = √2 N_l|m| P_l^|m|(cos ϑ) sin(|m|λ)` for m < 0
//!
//! with `N_lm = √((2l+1)/(4π) · (l−m)!/(l+m)!)`.

use core::f64::consts::PI;

// inherent f64 math only exists when std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Associated Legendre function P_l^m(x), m ≥ 0, without Condon–Shortley phase.
pub fn associated_legendre(l: u32, m: u32, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= (2 * i + 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * p - (ll + m - 1) as f64 * p_prev) / (ll - m) as f64;
        p_prev = p;
        p = next;
    }
    p
}

fn normalization(l: u32, m: u32) -> f64 {
    // (l−m)!/(l+m)! as a product to avoid overflow
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio /= k as f64;
    }
    ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt()
}

/// Real spherical harmonic Y_l^m at colatitude `theta`, longitude `lambda`.
pub fn real_sph_harm(l: u32, m: i32, theta: f64, lambda: f64) -> f64 {
    let am = m.unsigned_abs();
    if am > l {
        return 0.0;
    }
    let p = associated_legendre(l, am, theta.cos());
    let n = normalization(l, am);
    match m {
        0 => n * p,
        m if m > 0 => core::f64::consts::SQRT_2 * n * p * (am as f64 * lambda).cos(),
        _ => core::f64::consts::SQRT_2 * n * p * (am as f64 * lambda).sin(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SphereGrid;

    #[test]
    fn closed_forms() {
        let t = 0.7f64;
        let x = t.cos();
        let y20 = (5.0 / (16.0 * PI)).sqrt() * (3.0 * x * x - 1.0);
        assert!((real_sph_harm(2, 0, t, 0.3) - y20).abs() < 1e-15);
        let y11 = (3.0 / (4.0 * PI)).sqrt() * t.sin() * 0.3f64.cos();
        assert!((real_sph_harm(1, 1, t, 0.3) - y11).abs() < 1e-15);
        let y40 = 3.0 / (16.0 * PI.sqrt()) * (35.0 * x.powi(4) - 30.0 * x * x + 3.0);
        assert!((real_sph_harm(4, 0, t, 0.0) - y40).abs() < 1e-14);
    }

    #[test]
    fn orthonormal_on_grid() {
        let g = SphereGrid::shared(16, 32).unwrap();
        let modes = [
            (0u32, 0i32),
            (1, -1),
            (1, 1),
            (2, 0),
            (2, 1),
            (3, -2),
            (4, 3),
        ];
        let fields: alloc::vec::Vec<_> = modes
            .iter()
            .map(|&(l, m)| g.sample(|t, lam| real_sph_harm(l, m, t, lam)))
            .collect();
        for (i, a) in fields.iter().enumerate() {
            for (j, b) in fields.iter().enumerate() {
                let prod: alloc::vec::Vec<f64> = a
                    .values()
                    .iter()
                    .zip(b.values())
                    .map(|(x, y)| x * y)
                    .collect();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g.integrate(&prod) - want).abs() < 1e-13,
                    "{:?} {:?}",
                    modes[i],
                    modes[j]
                );
            }
        }
    }
}
