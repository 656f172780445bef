//! Exact autocorrelations of characteristic polynomials over the classical compact groups.

pub mod contour;
pub mod error;
pub mod haar;
pub mod identities;
pub mod linalg;
pub mod orthogonal;
pub mod scalar;
pub mod symcore;
pub mod symplectic;
pub mod unitary;

pub use error::{Error, Result};
pub use scalar::{Mp, Real, C64};
