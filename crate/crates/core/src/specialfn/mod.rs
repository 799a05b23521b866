//! Special functions used throughout the crate.
//!
//! Everything here is pure and allocation-free apart from the lazily built
//! log-factorial table, so all functions can be called from any thread.

mod elliptic;
mod factorial;
mod hermite;
mod laguerre;

pub use elliptic::{
    elliptic_e_complete, elliptic_e_incomplete, elliptic_e_incomplete_carlson,
    elliptic_e_incomplete_with_error, EllipticParameter,
};
pub use factorial::{ln_binomial, ln_factorial};
pub use hermite::{hermite_at_zero_loglike, hermite_function, hermite_functions, hermite_series};
pub use laguerre::laguerre;

/// Largest Hermite / Laguerre order (and Fock truncation index) supported.
pub const MAX_ORDER: usize = 512;
