//! Numerical laboratory for star-shaped hypersurfaces in the three space forms.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`spaceform`]: warping function, polar potential, model embeddings and the
//!   conformal Killing field of hyperbolic space, Euclidean space and the sphere.
//! * [`grid`]: a Gauss–Legendre × uniform-longitude grid on S² with spectral
//!   differentiation, interpolation and quadrature.
//! * [`hypersurface`]: first and second fundamental forms, Weingarten map,
//!   support function and Christoffel symbols of radial graphs.
//! * [`sigma`]: σ₁, σ₂, the Newton tensor, the polarization σ₁,₁ and the
//!   Gårding cone Γ₂ for general dimension.
//! * [`identities`]: pointwise and integral residuals of the Hessian identity of
//!   the polar potential, the Codazzi divergence and the four integral formulas.
//! * [`pair`]: ambient isometries, identified pairs and the congruence pipeline.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod grid;
pub mod harmonics;
pub mod hypersurface;
pub mod identities;
pub mod linalg;
pub mod pair;
pub mod sigma;
pub mod spaceform;

pub use error::{Error, Result};
pub use grid::{Derivatives, Parity, ScalarField, SphereGrid};
pub use hypersurface::{RadialGraph, SurfaceGeometry};
pub use identities::IdentityReport;
pub use pair::{AmbientIsometry, CongruenceStatus, CongruenceVerdict, IdentifiedPair, Tolerances};
pub use sigma::MixedTensor;
pub use spaceform::{AmbientPoint, Curvature, SpaceForm};
