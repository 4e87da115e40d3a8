//! σ₁, σ₂ and their polarization for n×n Weingarten-type tensors.
//!
//! Entries are read in a fixed orthonormal frame, `w[i][j]`. All routines are
//! dimension-generic; the surface backend uses n = 2.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Mat2;

/// Relative tolerance for "σ₂(W) = σ₂(W̃)" in the Gårding preconditions.
pub const SIGMA2_MATCH_RTOL: f64 = 1e-9;

/// Square matrix of a mixed (1,1) tensor, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTensor {
    n: usize,
    w: Vec<f64>,
}

impl MixedTensor {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(MixedTensor { n, w: entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut w = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            w.extend_from_slice(r);
        }
        Ok(MixedTensor { n, w })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut w = vec![0.0; n * n];
        for (i, v) in d.iter().enumerate() {
            w[i * n + i] = *v;
        }
        MixedTensor { n, w }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.w[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.w
    }

    pub fn scaled(&self, s: f64) -> Self {
        MixedTensor {
            n: self.n,
            w: self.w.iter().map(|v| v * s).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_dim(other)?;
        Ok(MixedTensor {
            n: self.n,
            w: self
                .w
                .iter()
                .zip(&other.w)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .w
            .iter()
            .zip(&other.w)
            .fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs())))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

impl From<Mat2> for MixedTensor {
    fn from(m: Mat2) -> Self {
        MixedTensor {
            n: 2,
            w: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }
}

pub fn sigma1(w: &MixedTensor) -> f64 {
    (0..w.n).map(|i| w.get(i, i)).sum()
}

/// σ₂ = Σ_{i<j} (w_ii w_jj − w_ij w_ji).
pub fn sigma2(w: &MixedTensor) -> f64 {
    let mut s = 0.0;
    for i in 0..w.n {
        for j in (i + 1)..w.n {
            s += w.get(i, i) * w.get(j, j) - w.get(i, j) * w.get(j, i);
        }
    }
    s
}

/// Newton tensor σ₂^{ij} = ∂σ₂/∂w_ij = σ₁ δ_ij − w_ji.
pub fn sigma2_gradient(w: &MixedTensor) -> MixedTensor {
    let n = w.n;
    let s1 = sigma1(w);
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = if i == j { s1 } else { 0.0 } - w.get(j, i);
        }
    }
    MixedTensor { n, w: out }
}

/// Polarization σ₁,₁(W, W̃) = ½(σ₁(W)σ₁(W̃) − tr(W W̃)).
pub fn sigma11(w: &MixedTensor, wt: &MixedTensor) -> Result<f64> {
    w.check_dim(wt)?;
    let n = w.n;
    let mut tr = 0.0;
    for i in 0..n {
        for k in 0..n {
            tr += w.get(i, k) * wt.get(k, i);
        }
    }
    Ok(0.5 * (sigma1(w) * sigma1(wt) - tr))
}

/// Membership in the Gårding cone Γ₂ = {σ₁ > 0, σ₂ > 0}.
pub fn in_gamma2(w: &MixedTensor) -> bool {
    sigma1(w) > 0.0 && sigma2(w) > 0.0
}

/// Outcome of [`garding_gap`]: the gap is always returned; `preconditions_hold`
/// records whether both tensors lie in Γ₂ with matching σ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GardingGap {
    pub gap: f64,
    pub preconditions_hold: bool,
}

/// σ₂(W) − σ₁,₁(W, W̃); non-positive when both lie in Γ₂ with σ₂(W) = σ₂(W̃).
pub fn garding_gap(w: &MixedTensor, wt: &MixedTensor) -> Result<GardingGap> {
    let s2 = sigma2(w);
    let s2t = sigma2(wt);
    let gap = s2 - sigma11(w, wt)?;
    let matched =
        (s2 - s2t).abs() <= SIGMA2_MATCH_RTOL * s2.abs().max(s2t.abs()).max(f64::MIN_POSITIVE);
    Ok(GardingGap {
        gap,
        preconditions_hold: in_gamma2(w) && in_gamma2(wt) && matched,
    })
}

/// Normalized scalar curvature R = K + 2σ₂ / (n(n−1)).
pub fn scalar_curvature(k: f64, sigma2_value: f64, n: usize) -> f64 {
    assert!(n >= 2, "hypersurface dimension must be at least 2");
    let nf = n as f64;
    k + 2.0 * sigma2_value / (nf * (nf - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let id = MixedTensor::identity(2);
        assert_eq!(sigma1(&id), 2.0);
        assert_eq!(sigma2(&id), 1.0);
        assert_eq!(sigma2(&MixedTensor::diagonal(&[2.0, 3.0])), 6.0);
    }

    #[test]
    fn gradient_examples() {
        let g = sigma2_gradient(&MixedTensor::diagonal(&[2.0, 3.0]));
        assert_eq!(
            (g.get(0, 0), g.get(1, 1), g.get(0, 1), g.get(1, 0)),
            (3.0, 2.0, 0.0, 0.0)
        );
        let w = MixedTensor::new(2, vec![1.0, 5.0, 0.0, 2.0]).unwrap();
        let g = sigma2_gradient(&w);
        assert_eq!(g.get(0, 1), 0.0);
        assert_eq!(g.get(1, 0), -5.0);
    }

    #[test]
    fn polarization_examples() {
        let id = MixedTensor::identity(2);
        let wt = MixedTensor::diagonal(&[0.5, 2.0]);
        assert!((sigma11(&id, &wt).unwrap() - 1.25).abs() < 1e-15);
        let gap = garding_gap(&id, &wt).unwrap();
        assert!(gap.preconditions_hold);
        assert!((gap.gap + 0.25).abs() < 1e-15);
        let same = garding_gap(&id, &id).unwrap();
        assert_eq!(same.gap, 0.0);
        assert!(sigma11(&id, &MixedTensor::identity(3)).is_err());
    }

    #[test]
    fn cone_examples() {
        assert!(in_gamma2(&MixedTensor::identity(2)));
        assert!(!in_gamma2(&MixedTensor::diagonal(&[1.0, -2.0])));
        assert!(!in_gamma2(&MixedTensor::diagonal(&[3.0, -1.0])));
        let outside = garding_gap(
            &MixedTensor::diagonal(&[3.0, -1.0]),
            &MixedTensor::identity(2),
        )
        .unwrap();
        assert!(!outside.preconditions_hold);
    }

    #[test]
    fn scalar_curvature_examples() {
        assert_eq!(scalar_curvature(0.0, 1.0, 2), 1.0);
        assert_eq!(scalar_curvature(-1.0, 0.0, 3), -1.0);
        let r: f64 = 0.8;
        let coth = 1.0 / r.tanh();
        let got = scalar_curvature(-1.0, coth * coth, 2);
        assert!((got - 1.0 / r.sinh().powi(2)).abs() < 1e-14);
    }
}
