//! Exact convexity certificates for level sets of general inverse
//! sigma_k equations `sigma_n(l) - sum_k c_k sigma_k(l) = 0`.

pub mod analysis;
pub mod error;
pub mod noetherian;
pub mod poly;
pub mod presets;
pub mod report;
pub mod resultant;
pub mod roots;
pub mod scalar;
pub mod sigma;
pub mod sturm;

pub use error::{Error, Result};
pub use poly::Poly;
pub use roots::{AlgebraicNumber, IsolatingInterval};
pub use scalar::{ExactRational, Scalar};
pub use sigma::SigmaKPolynomial;
