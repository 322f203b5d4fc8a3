//! Exact Drazin inverses of square matrices over the Gaussian rationals.
//!
//! Every element of the algebra is a dense [`Matrix`] of
//! [`GaussianRational`] entries, so quasinilpotent means nilpotent and all
//! identities are checked with exact equality. On top of the Drazin kernel
//! the crate builds certificate-producing decompositions
//! ([`decompositions`]), the anti-triangular block-matrix chains
//! ([`anti_triangular`]), a seeded instance generator ([`instance_gen`]) and
//! the verification harness driven by the `gdrazin` binary ([`harness`]).

pub mod anti_triangular;
pub mod decompositions;
pub mod drazin;
pub mod error;
pub mod exactnum;
pub mod harness;
pub mod instance_gen;
pub mod matrix;

pub use drazin::{drazin_inverse, verify_drazin_axioms, DrazinResult};
pub use error::{Error, Result};
pub use exactnum::GaussianRational;
pub use matrix::Matrix;
