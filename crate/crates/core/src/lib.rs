//! Zero mean curvature surfaces with planar curvature lines in isotropic
//! 3-space, their conjugate (affine minimal) surfaces, and the deformation
//! families connecting them.
//!
//! The crate is organised bottom-up:
//!
//! - [`isotropic`]: the Minkowski model of isotropic space and parabolic rotations.
//! - [`weierstrass`]: Weierstrass data `(h, eta)`, contour integration, Gauss map,
//!   Hopf differential and recovery of `eta` from its modulus.
//! - [`catalog`]: closed-form conformal factors `(omega, f, g)`, the case
//!   classification, explicit parametrizations and deformation data.
//! - [`diffgeo`]: numerical jets, fundamental forms, planarity, axial directions,
//!   affine quantities and the aggregated invariant suite.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalog;
pub mod diffgeo;
pub mod error;
pub mod isotropic;
pub mod quadrature;
pub mod weierstrass;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use isotropic::{IsoPoint3, Isometry4, PlaneCarrier, Vec4};
pub use weierstrass::{Family, FamilyKind, QuadratureConfig};
