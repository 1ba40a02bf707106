//! Quaternionic integral representations of electromagnetic fields in chiral
//! media.
//!
//! The crate is organised bottom-up:
//!
//! - [`quaternion`]: complex quaternions `H(C)` and complex 3-vectors.
//! - [`geometry`]: surface meshes, Gauss-Legendre rules and volume quadrature.
//! - [`kernels`]: fundamental solutions `Θ_α`, `Υ_{±α}` and finite-difference
//!   operators.
//! - [`operators`]: discrete Teodorescu and Cauchy-type operators.
//! - [`fields`]: closed-form test fields with exact derivatives.
//! - [`chiral`]: chiral media, field splitting, reconstruction and the
//!   extendibility test.

pub mod chiral;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod kernels;
pub mod operators;
pub mod quaternion;

pub use error::{Error, Result};
pub use quaternion::{Complex, ComplexQuaternion, ComplexVector3};
