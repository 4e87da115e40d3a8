//! Small dense linear algebra: 2×2 tensors for the surface, row-major square
//! matrices for the ambient fits.

use alloc::vec;
use alloc::vec::Vec;

// inherent f64 math only exists when std is linked
use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

pub type Mat2 = [[f64; 2]; 2];

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inv2(m: &Mat2) -> Option<Mat2> {
    let d = det2(m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    Some([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn transpose2(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn trace2(a: &Mat2) -> f64 {
    a[0][0] + a[1][1]
}

pub fn sub2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

/// `sqrt(g^{ac} g^{bd} A_ab A_cd)` for a covariant 2-tensor `A`.
pub fn norm_covariant2(a: &Mat2, g_inv: &Mat2) -> f64 {
    let ga = mul2(g_inv, a);
    let gat = mul2(g_inv, &transpose2(a));
    // tr(g⁻¹ A g⁻¹ Aᵀ)
    let m = mul2(&ga, &gat);
    trace2(&m).max(0.0).sqrt()
}

/// Orthonormal-frame Frobenius norm of a mixed tensor `D` (Dᵃ_b) w.r.t. `g`.
pub fn norm_mixed2(d: &Mat2, g: &Mat2, g_inv: &Mat2) -> f64 {
    let m = mul2(&mul2(&mul2(d, g_inv), &transpose2(d)), g);
    trace2(&m).max(0.0).sqrt()
}

/// `sqrt(g^{ab} v_a v_b)` for a covector.
pub fn norm_covector2(v: &[f64; 2], g_inv: &Mat2) -> f64 {
    let s = g_inv[0][0] * v[0] * v[0] + 2.0 * g_inv[0][1] * v[0] * v[1] + g_inv[1][1] * v[1] * v[1];
    s.max(0.0).sqrt()
}

/// Real eigenvalues (ascending) of a 2×2 matrix similar to a symmetric one.
pub fn eigenvalues2(m: &Mat2) -> (f64, f64) {
    let half_tr = 0.5 * trace2(m);
    let half_diff = 0.5 * (m[0][0] - m[1][1]);
    let disc = (half_diff * half_diff + m[0][1] * m[1][0]).max(0.0);
    let r = disc.sqrt();
    (half_tr - r, half_tr + r)
}

/// Row-major n×n matrix product.
pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

pub fn transpose(a: &[f64], n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

pub fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn inverse(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut m = a.to_vec();
    let mut inv = identity(n);
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
            .unwrap_or(col);
        let p = m[pivot * n + col];
        if p.abs() <= 1e-14 * scale || !p.is_finite() {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                m.swap(pivot * n + j, col * n + j);
                inv.swap(pivot * n + j, col * n + j);
            }
        }
        for j in 0..n {
            m[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[i * n + col];
            if f != 0.0 {
                for j in 0..n {
                    m[i * n + j] -= f * m[col * n + j];
                    inv[i * n + j] -= f * inv[col * n + j];
                }
            }
        }
    }
    Ok(inv)
}

/// Orthogonal factor of the polar decomposition `A = Q S`, by Newton's iteration
/// `Q ← (Q + Q⁻ᵀ)/2`. This is the Procrustes solution when `A` is a
/// cross-covariance matrix.
pub fn polar_orthogonal(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut q = a.to_vec();
    for _ in 0..100 {
        let inv_t = transpose(&inverse(&q, n)?, n);
        let next: Vec<f64> = q.iter().zip(&inv_t).map(|(x, y)| 0.5 * (x + y)).collect();
        let delta = next
            .iter()
            .zip(&q)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        q = next;
        if delta < 1e-15 {
            break;
        }
    }
    Ok(q)
}

/// Vector orthogonal (Euclidean) to three vectors in R⁴, by cofactor expansion
/// of `det[e, a, b, c]`.
pub fn cross4(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
        let m = |r: &[f64; 4], i: usize| r[cols[i]];
        m(a, 0) * (m(b, 1) * m(c, 2) - m(b, 2) * m(c, 1))
            - m(a, 1) * (m(b, 0) * m(c, 2) - m(b, 2) * m(c, 0))
            + m(a, 2) * (m(b, 0) * m(c, 1) - m(b, 1) * m(c, 0))
    };
    [minor(0), -minor(1), minor(2), -minor(3)]
}

pub fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = [
            4.0, 1.0, 0.5, 0.0, 2.0, 3.0, 1.0, 0.0, 0.0, 1.0, 5.0, 2.0, 1.0, 0.0, 0.0, 3.0,
        ];
        let inv = inverse(&a, 4).unwrap();
        let p = matmul(&a, &inv, 4);
        let id = identity(4);
        assert!(p.iter().zip(&id).all(|(x, y)| (x - y).abs() < 1e-14));
        assert_eq!(inverse(&[1.0, 2.0, 2.0, 4.0], 2), Err(Error::Singular));
    }

    #[test]
    fn polar_recovers_rotation() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let r = [c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0];
        let spd = [2.0, 0.3, 0.1, 0.3, 1.5, 0.0, 0.1, 0.0, 1.0];
        let a = matmul(&r, &spd, 3);
        let q = polar_orthogonal(&a, 3).unwrap();
        assert!(q.iter().zip(&r).all(|(x, y)| (x - y).abs() < 1e-13));
    }

    #[test]
    fn cross4_is_orthogonal() {
        let a = [1.0, 0.2, -0.3, 0.5];
        let b = [0.1, 1.0, 0.4, -0.2];
        let c = [0.3, -0.1, 1.0, 0.7];
        let n = cross4(&a, &b, &c);
        for v in [a, b, c] {
            let d: f64 = v.iter().zip(&n).map(|(x, y)| x * y).sum();
            assert!(d.abs() < 1e-14);
        }
        // standard basis orientation: det[e_3 slot, e0, e1, e2]
        let e = |i: usize| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            v
        };
        assert_eq!(cross4(&e(0), &e(1), &e(2)), [0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        assert_eq!(eigenvalues2(&[[3.0, 0.0], [0.0, 1.0]]), (1.0, 3.0));
    }

    #[test]
    fn tensor_norms_are_frame_free() {
        let g = [[4.0, 0.0], [0.0, 9.0]];
        let gi = inv2(&g).unwrap();
        // A = g has norm sqrt(2)
        assert!((norm_covariant2(&g, &gi) - 2f64.sqrt()).abs() < 1e-15);
        // identity mixed tensor has norm sqrt(2)
        let id = [[1.0, 0.0], [0.0, 1.0]];
        assert!((norm_mixed2(&id, &g, &gi) - 2f64.sqrt()).abs() < 1e-15);
        assert!((norm_covector2(&[2.0, 0.0], &gi) - 1.0).abs() < 1e-15);
    }
}
