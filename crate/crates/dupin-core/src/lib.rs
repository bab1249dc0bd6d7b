//! Numerical Lie sphere geometry for Dupin hypersurfaces in the unit sphere.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`indefinite`]: vectors and matrices over the signature `(n+1, 2)` form and
//!   the group `O(n+1, 2)` of Lie sphere transformations;
//! * [`lie_sphere`]: oriented spheres as points of the Lie quadric, Legendre
//!   lifts, curvature spheres and Lie curvatures (cross ratios);
//! * [`isoparametric`]: the principal curvatures, mean and scalar curvature of
//!   isoparametric families with `g` distinct principal curvatures;
//! * [`polygon`]: the `2g` points where a hypersurface meets a normal geodesic,
//!   their angle tables, the normalized angle systems and the conformal
//!   reduction on the geodesic circle;
//! * [`derivatives`]: linear systems in the derivatives `d_ji = e_j(λ_i)` of the
//!   principal curvatures and their kernels.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod dense;
mod error;
mod lsq;
mod math;

pub mod derivatives;
pub mod indefinite;
pub mod isoparametric;
pub mod lie_sphere;
pub mod polygon;

pub use dense::{kernel, Kernel, Matrix};
pub use error::{Error, Result};
