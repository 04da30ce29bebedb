use crate::specfun::SpecFunError;

/// Errors raised by the physics layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("radius {r} is not above the singular radius {r0}")]
    OutsideDomain { r: f64, r0: f64 },
    #[error("supercritical coupling: (aV0/q)^2 = {coupling_sq} >= kappa^2 = {kappa_sq}")]
    Supercritical { coupling_sq: f64, kappa_sq: f64 },
    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("energy {energy} is outside the bound-state regime: {reason}")]
    Unbound { energy: f64, reason: &'static str },
    #[error("energy {energy} sits on the Green's function pole with n_r = {n_r}")]
    AtPole { energy: f64, n_r: u32 },
    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
