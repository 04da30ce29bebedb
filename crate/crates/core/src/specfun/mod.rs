//! Special functions: deformed hyperbolics, complex log-gamma, Gauss and
//! Kummer hypergeometric series, Whittaker functions and spherical harmonics.
//!
//! Everything here is a pure function of its arguments.

mod gamma;
mod harmonics;
mod hyperbolic;
mod hypergeometric;
mod whittaker;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use harmonics::spherical_harmonic;
pub use hyperbolic::{cosh_q, deformed_hyperbolic, sinh_q, tanh_q, Deformation, HyperbolicKind};
pub use hypergeometric::{
    gauss_2f1, gauss_2f1_derivative, gauss_connection, kummer_1f1, kummer_1f1_derivative,
    ConnectionSides,
};
pub use whittaker::{
    whittaker, whittaker_m, whittaker_m_derivative, whittaker_w, whittaker_w_connection,
    WhittakerKind,
};

pub use num_complex::Complex64;

/// Failure modes of the special-function layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("gamma function pole at z = {0}")]
    GammaPole(Complex64),
    #[error("lower parameter {0} is a non-positive integer")]
    ParameterPole(Complex64),
    #[error("series did not converge after {terms} terms (last term {last_term:e}, partial sum {partial_sum})")]
    NonConvergence {
        terms: usize,
        last_term: f64,
        partial_sum: Complex64,
    },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("invalid spherical harmonic indices l = {l}, m = {m}")]
    InvalidHarmonic { l: i32, m: i32 },
    #[error("non-finite value produced")]
    NonFinite,
}

pub(crate) fn finite(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(SpecFunError::NonFinite)
    }
}

/// True when `z` is 0, -1, -2, ...
pub(crate) fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Distance from a real number to the nearest integer.
pub(crate) fn integer_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}
