//! Relativistic spin-½ bound states in the deformed Hulthén potential
//! `V(r) = -V0 / (e^{r/a} - q)`.
//!
//! The crate evaluates the closed-form Dirac spectrum and Green's functions
//! obtained with the Pekeris-type centrifugal approximation, and ships an
//! independent Numerov eigenvalue solver that certifies them.
//!
//! ```
//! use dirac_hulthen::{bound_energies, PotentialParams, QuantumNumbers, Sign};
//!
//! let p = PotentialParams::new(1.0, 0.016, 50.0, 1.0)?;
//! let qn = QuantumNumbers::channel(-1, Sign::Minus, &p)?;
//! let levels = bound_energies(&qn, &p, 10)?;
//! assert!(levels[0].energy < 1.0);
//! # Ok::<(), dirac_hulthen::Error>(())
//! ```
//!
//! Units are natural, `ħ = c = 1`: lengths are inverse energies.

pub mod angular;
pub mod cli;
mod error;
pub mod greens;
pub mod oracle;
pub mod potential;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use potential::{PotentialParams, RadialChannel};
pub use spectrum::{
    bound_energies, coulomb_energies, standard_hulthen_energies, EnergyState, HalfInt,
    QuantumNumbers, Sign,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/potential.md")]
    mod potential {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/greens.md")]
    mod greens {}
    #[doc = include_str!("../../../book/src/coulomb.md")]
    mod coulomb {}
    #[doc = include_str!("../../../book/src/angular.md")]
    mod angular {}
    #[doc = include_str!("../../../book/src/special-functions.md")]
    mod special_functions {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
