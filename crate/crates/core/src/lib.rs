//! Lawrence 3-algebras: axiom residuals, Frobenius compatibility, full
//! 3-algebras, two-dimensional pentagon solutions and lens-space state sums.

pub mod cli;
pub mod compose;
pub mod error;
pub mod families;
pub mod frobenius;
pub mod io;
pub mod lawrence;
pub mod lens;
pub mod pentagon;
pub mod random;
pub mod tensor;

pub use error::{Error, Result};
pub use frobenius::{BilinearForm, FrobeniusAlgebra, FullThreeAlgebra};
pub use lawrence::{AxiomId, ThreeAlgebra};
pub use lens::ContractionNetwork;
pub use tensor::{BasisPermutation, DenseTensor, Leg, Scalar};

/// Comparison tolerance used when none is given.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Environment variable overriding [`DEFAULT_TOL`].
pub const TOL_ENV: &str = "TRIQAL_TOL";

/// [`DEFAULT_TOL`], or the value of `TRIQAL_TOL` when it parses as a
/// non-negative finite number.
pub fn default_tolerance() -> f64 {
    std::env::var(TOL_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t >= 0.0)
        .unwrap_or(DEFAULT_TOL)
}
