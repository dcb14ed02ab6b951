//! Stability analysis for sparse convolutions on the integers.
//!
//! The library represents finitely supported complex sequences, reduces the
//! squared convolution norm to Hermitian Toeplitz quadratic forms, compresses
//! supports through Freiman isomorphisms, and produces upper and lower bounds
//! on the stability constant α(s,f) of the inequality
//! α‖x‖‖y‖ ≤ ‖x*y‖ ≤ β‖x‖‖y‖ with β = √min(s,f).

pub mod alpha_bounds;
pub mod autocorr_toeplitz;
pub mod error;
pub mod freiman;
pub mod sparse_seq;

pub use alpha_bounds::{
    alpha_lower_detbound, alpha_upper_alternating, beta, monotonicity_table, random_instance,
    verify_inequality, AlphaUpper, DetBoundEstimate, InequalityReport, MonotonicityTable,
};
pub use autocorr_toeplitz::{
    autocorrelation, smallest_eigenpair, AutocorrToeplitz, SymbolCoefficients,
};
pub use error::{Error, Result};
pub use freiman::{
    compress_support, dimension_bound, embed, is_freiman_homomorphism, is_freiman_isomorphism,
    CompressionResult, FreimanMap,
};
pub use sparse_seq::{circular_convolve, convolve, SparseSequence, SupportSet};
