//! `tomoarea` computes the homodyne-tomographic nonclassicality measure of
//! pure single-mode states of light.
//!
//! The measure integrates the standard deviation of the rotated quadrature
//! over the local-oscillator phase, `σ = ∫₀^{2π} ΔX_θ dθ`, and reports the
//! excess `σ − √2π` over the value shared by all coherent states. The crate
//! offers several routes to `σ` that check one another:
//!
//! * [`area::sigma_numeric`]: θ-quadrature of the spread profile, with the
//!   profile taken either from ladder-operator moments or from moments of the
//!   optical tomogram itself;
//! * [`area::sigma_analytic`]: closed forms for coherent, Fock and squeezed
//!   families (incomplete elliptic integrals for the squeezed ones);
//! * [`homodyne::estimate_area`]: an estimator working only from simulated
//!   balanced-homodyne samples.

pub mod analysis;
pub mod area;
pub mod checks;
pub mod error;
pub mod homodyne;
pub mod quadrature;
pub mod quadrep;
pub mod specialfn;
pub mod states;
pub mod sweep;
mod theta_rule;

pub use area::{sigma_analytic, sigma_numeric, AreaMethod, AreaOptions, AreaResult, CLASSICAL_SIGMA};
pub use error::{Error, Result};
pub use states::{expand, ladder_moments, FockExpansion, LadderMoments, StateSpec, Squeezing};

pub use num_complex::Complex64;
