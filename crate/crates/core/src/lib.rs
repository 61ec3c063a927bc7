//! Localization analysis for functions on the n-dimensional unit sphere.
//!
//! Given a square-integrable function `F` on the sphere `S^n` in terms of its
//! hyperspherical-harmonic Fourier coefficients, this crate computes
//!
//! * the center of gravity `xi_O(F) = ∫ x |F(x)|² dσ / ‖F‖²`,
//! * the space variance `var_S(F) = (1 − ‖xi_O‖²) / ‖xi_O‖²`,
//! * the momentum variance `var_M(F) = Σ l(l+2λ) |F̂_l^k|² / ‖F‖²`,
//! * the uncertainty product `U(F) = sqrt(var_S · var_M)`, bounded below by `n/2`,
//!
//! entirely through series over the coefficient support: the coupling integrals
//! `∫ x · conj(Y_l^k) · Y_{l'}^m dσ` reduce to closed-form products of
//! one-dimensional Gegenbauer integrals, and only conjugate index pairs
//! (entries differing by ±1 in a leading block and equal afterwards) contribute.
//!
//! The [`quadrature`] module provides a brute-force tensor-product rule over the
//! sphere that serves as an independent cross-check for every closed form, and
//! [`poisson`] implements a worked example: the second directional derivative of
//! the Poisson wavelet, with exact series and small-scale asymptotics.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature only
//! adds `std::error::Error` for [`Error`].

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

use core::fmt;

pub mod kahan;
mod math;
pub mod poisson;
pub mod quadrature;
pub mod special;
pub mod sphere;
pub mod uncertainty;

pub use num_complex::Complex64;

/// Error type shared by all modules of this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter is outside the mathematical domain of the operation.
    Domain(&'static str),
    /// A multi-index violates the non-increasing index constraints.
    InvalidIndex(&'static str),
    /// The function has zero norm, so normalized quantities are undefined.
    ZeroNorm,
    /// The center of gravity vanishes, so the space variance is undefined.
    ZeroGravityCenter,
    /// An index pair without conjugate structure was passed to the coupling integral.
    NonConjugatePair,
    /// An adaptive series did not converge within its degree cap.
    Convergence(&'static str),
    /// A non-finite value was encountered during evaluation.
    NonFinite(&'static str),
    /// A resource limit (grid size) would be exceeded.
    Resource(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidIndex(msg) => write!(f, "invalid multi-index: {msg}"),
            Error::ZeroNorm => write!(f, "function norm is zero"),
            Error::ZeroGravityCenter => write!(f, "gravity center is zero"),
            Error::NonConjugatePair => write!(f, "index pair is not conjugate"),
            Error::Convergence(msg) => write!(f, "series did not converge: {msg}"),
            Error::NonFinite(msg) => write!(f, "non-finite value: {msg}"),
            Error::Resource(msg) => write!(f, "resource limit exceeded: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
