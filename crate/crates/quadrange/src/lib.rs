//! Joint ranges of quadratic pairs F = (f, g): R^n → R².
//!
//! Exact rational decision procedures (inertia, kernels, convexity of the
//! joint range, S-lemma certificates, Lagrangian duality) cross-checked by a
//! floating-point sampling oracle.

pub mod analysis;
pub mod convexity;
pub mod corpus;
pub mod core;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod oracle;
pub mod pencil;
pub mod plot;
pub mod problem;
pub mod random;
pub mod range;
pub mod report;
pub mod scalar;

pub use crate::core::*;
pub use crate::error::{QrError, Result};
pub use crate::scalar::{Rat, Scalar};
