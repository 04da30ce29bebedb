//! Quantum-number algebra and the closed-form bound-state spectrum.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::potential::{kernel_numbers, PotentialParams, RadialChannel};
use crate::{Error, Result};

/// A sign, `-1` or `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn of_int(x: i32) -> Self {
        if x < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl TryFrom<i32> for Sign {
    type Error = String;

    fn try_from(v: i32) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(Sign::Minus),
            1 => Ok(Sign::Plus),
            _ => Err(format!("expected -1 or 1, got {v}")),
        }
    }
}

impl From<Sign> for i32 {
    fn from(s: Sign) -> i32 {
        match s {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", i32::from(*self))
    }
}

/// A half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `γ = sign √(κ² - (aV0/q)²)`.
pub fn gamma_eigenvalue(kappa: i32, sign: Sign, p: &PotentialParams) -> Result<f64> {
    signed_root(kappa, p.coupling(), sign)
}

fn signed_root(kappa: i32, coupling: f64, sign: Sign) -> Result<f64> {
    if kappa == 0 {
        return Err(Error::QuantumNumbers("kappa must be nonzero".into()));
    }
    let kappa_sq = (kappa * kappa) as f64;
    let coupling_sq = coupling * coupling;
    if coupling_sq >= kappa_sq {
        return Err(Error::Supercritical { coupling_sq, kappa_sq });
    }
    Ok(sign.value() * (kappa_sq - coupling_sq).sqrt())
}

/// `λ = |γ| + (sign γ - 1)/2`.
pub fn lambda_of_gamma(gamma: f64) -> Result<f64> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::ZeroGamma);
    }
    Ok(if gamma > 0.0 { gamma } else { -gamma - 1.0 })
}

/// The sign of `γ` tied to `κ` and `β̃`: `sgn κ = ±sgn γ` for `β̃ = ∓1`.
pub fn linked_sign_gamma(kappa: i32, beta_tilde: Sign) -> Sign {
    -(beta_tilde * Sign::of_int(kappa))
}

/// Labels of one partial wave plus the derived `γ` and `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumNumbers {
    kappa: i32,
    m: HalfInt,
    beta_tilde: Sign,
    sign_gamma: Sign,
    gamma: f64,
    lambda: f64,
    coupling: f64,
}

impl QuantumNumbers {
    /// Full validation, including the `κ`, `β̃`, sign `γ` linkage.
    pub fn new(kappa: i32, m: HalfInt, beta_tilde: Sign, sign_gamma: Sign, p: &PotentialParams) -> Result<Self> {
        if kappa != 0 && sign_gamma != linked_sign_gamma(kappa, beta_tilde) {
            return Err(Error::QuantumNumbers(format!(
                "sign gamma = {sign_gamma} is incompatible with kappa = {kappa}, beta = {beta_tilde}"
            )));
        }
        Self::build(kappa, m, beta_tilde, sign_gamma, p)
    }

    /// The physical channel for `(κ, β̃)` with `m = j`.
    pub fn channel(kappa: i32, beta_tilde: Sign, p: &PotentialParams) -> Result<Self> {
        let m = HalfInt::from_twice(2 * kappa.abs() - 1);
        Self::new(kappa, m, beta_tilde, linked_sign_gamma(kappa, beta_tilde), p)
    }

    /// A channel of the radial equation with either sign of `γ`.
    ///
    /// Skips the linkage check, so the second-order radial problem can be
    /// studied for both roots `γ = ±√(κ² - (aV0/q)²)`.
    pub fn radial(kappa: i32, beta_tilde: Sign, sign_gamma: Sign, p: &PotentialParams) -> Result<Self> {
        let m = HalfInt::from_twice(2 * kappa.abs() - 1);
        Self::build(kappa, m, beta_tilde, sign_gamma, p)
    }

    fn build(kappa: i32, m: HalfInt, beta_tilde: Sign, sign_gamma: Sign, p: &PotentialParams) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::QuantumNumbers("kappa must be nonzero".into()));
        }
        let two_j = 2 * kappa.abs() - 1;
        if m.twice().abs() > two_j || m.twice() % 2 == 0 {
            return Err(Error::QuantumNumbers(format!("m = {m} is not a projection of j = {two_j}/2")));
        }
        let gamma = gamma_eigenvalue(kappa, sign_gamma, p)?;
        let lambda = lambda_of_gamma(gamma)?;
        Ok(QuantumNumbers {
            kappa,
            m,
            beta_tilde,
            sign_gamma,
            gamma,
            lambda,
            coupling: p.coupling(),
        })
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(2 * self.kappa.abs() - 1)
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    pub fn beta_tilde(&self) -> Sign {
        self.beta_tilde
    }

    pub fn sign_gamma(&self) -> Sign {
        self.sign_gamma
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `κ(κ - β̃)`.
    pub fn kappa_shift(&self) -> i32 {
        self.kappa * (self.kappa - i32::from(self.beta_tilde))
    }

    pub fn radial_channel(&self) -> RadialChannel {
        RadialChannel::from(self)
    }

    pub(crate) fn check_potential(&self, p: &PotentialParams) -> Result<()> {
        if (self.coupling - p.coupling()).abs() <= 1e-14 * self.coupling.abs().max(1.0) {
            Ok(())
        } else {
            Err(Error::QuantumNumbers(format!(
                "channel was built for aV0/q = {}, potential has {}",
                self.coupling,
                p.coupling()
            )))
        }
    }
}

/// One bound level with its kernel numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyState {
    pub n_r: u32,
    pub energy: f64,
    pub epsilon_tilde: f64,
    pub omega_sq: f64,
    /// Violation of the unsquared quantization condition.
    pub residual: f64,
}

/// Levels whose quantization residual exceeds this are rejected.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// `ε̃ = a √(μ² - E² + κ(κ-β̃)/12a²)`.
pub fn epsilon_tilde(energy: f64, qn: &QuantumNumbers, p: &PotentialParams) -> Result<f64> {
    Ok(kernel_numbers(energy, &qn.radial_channel(), p)?.0)
}

/// `ω² = a² V0 (V0/q - 2E)`, signed.
pub fn omega_sq(energy: f64, p: &PotentialParams) -> f64 {
    p.a() * p.a() * p.v0() * (p.v0() / p.q() - 2.0 * energy)
}

/// `|1 + λ + ε̃ - √(ε̃² - ω²/q) + n_r|`.
pub fn quantization_residual(energy: f64, n_r: u32, qn: &QuantumNumbers, p: &PotentialParams) -> Result<f64> {
    Ok((gamma_argument(energy, &qn.radial_channel(), p)? + n_r as f64).abs())
}

/// `1 + λ + ε̃ - √(ε̃² - ω²/q)`; bound levels sit where it equals `-n_r`.
pub fn gamma_argument(energy: f64, channel: &RadialChannel, p: &PotentialParams) -> Result<f64> {
    let (eps, omega_sq) = kernel_numbers(energy, channel, p)?;
    let radicand = eps * eps - omega_sq / p.q();
    if radicand < 0.0 {
        return Err(Error::Unbound {
            energy,
            reason: "eps^2 - omega^2/q is negative",
        });
    }
    Ok(1.0 + channel.lambda + eps - radicand.sqrt())
}

/// Closed-form bound levels `n_r = 0..=n_r_max` of one channel.
///
/// The level formula is quadratic in `E`, so each `n_r` yields two
/// candidates; only the one satisfying the unsquared quantization condition
/// with `ω² < 0` and `ε̃ > 0` is kept. Enumeration stops at the first `n_r`
/// without a physical candidate.
pub fn bound_energies(qn: &QuantumNumbers, p: &PotentialParams, n_r_max: u32) -> Result<Vec<EnergyState>> {
    qn.check_potential(p)?;
    let rho = p.coupling();
    let mass_sq = (p.a() * p.mu()).powi(2) + qn.kappa_shift() as f64 / 12.0;
    collect_levels(qn, p, n_r_max, |n| {
        // (aE - ρ/2)² = N²/(N² + ρ²) (a²μ² + κ(κ-β̃)/12) - N²/4
        let rhs = n * n / (n * n + rho * rho) * mass_sq - n * n / 4.0;
        (rhs >= 0.0).then(|| {
            let root = rhs.sqrt();
            [(0.5 * rho + root) / p.a(), (0.5 * rho - root) / p.a()]
        })
    })
}

/// Levels of the undeformed (`q = 1`) well from its own closed form.
pub fn standard_hulthen_energies(qn: &QuantumNumbers, p: &PotentialParams, n_r_max: u32) -> Result<Vec<EnergyState>> {
    if p.q() != 1.0 {
        return Err(Error::InvalidParameter {
            name: "q",
            value: p.q(),
            reason: "the standard Hulthen spectrum needs q = 1",
        });
    }
    qn.check_potential(p)?;
    let (a, v0, mu) = (p.a(), p.v0(), p.mu());
    let shift = qn.kappa_shift() as f64 / (12.0 * a * a);
    collect_levels(qn, p, n_r_max, |n| {
        let av0 = a * v0;
        let rhs = n * n / (n * n + av0 * av0) * (mu * mu + shift) - n * n / (4.0 * a * a);
        (rhs >= 0.0).then(|| [v0 / 2.0 + rhs.sqrt(), v0 / 2.0 - rhs.sqrt()])
    })
}

fn collect_levels(
    qn: &QuantumNumbers,
    p: &PotentialParams,
    n_r_max: u32,
    candidates: impl Fn(f64) -> Option<[f64; 2]>,
) -> Result<Vec<EnergyState>> {
    let mut levels: Vec<EnergyState> = Vec::new();
    for n_r in 0..=n_r_max {
        let n = n_r as f64 + qn.lambda() + 1.0;
        let Some(pair) = candidates(n) else { break };
        let Some(level) = pair.into_iter().find_map(|e| physical_level(e, n_r, qn, p)) else {
            break;
        };
        if levels.last().is_some_and(|prev| prev.energy >= level.energy) {
            break;
        }
        levels.push(level);
    }
    Ok(levels)
}

fn physical_level(energy: f64, n_r: u32, qn: &QuantumNumbers, p: &PotentialParams) -> Option<EnergyState> {
    let (eps, omega_sq) = kernel_numbers(energy, &qn.radial_channel(), p).ok()?;
    if !(eps > 0.0 && omega_sq < 0.0) {
        return None;
    }
    let residual = quantization_residual(energy, n_r, qn, p).ok()?;
    (residual < RESIDUAL_TOLERANCE).then_some(EnergyState {
        n_r,
        energy,
        epsilon_tilde: eps,
        omega_sq,
        residual,
    })
}

/// Dirac–Coulomb levels `E = μ [1 + (Ze²)² / (n_r + λ₀ + 1)²]^{-1/2}`.
///
/// `λ₀` follows the same convention as `λ`, with `γ₀ = ±√(κ² - (Ze²)²)`.
pub fn coulomb_energies(kappa: i32, sign_gamma: Sign, ze2: f64, mu: f64, n_r_max: u32) -> Result<Vec<f64>> {
    if !(ze2.is_finite() && ze2 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "ze2",
            value: ze2,
            reason: "must be finite and non-negative",
        });
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "must be positive",
        });
    }
    let lambda0 = lambda_of_gamma(signed_root(kappa, ze2, sign_gamma)?)?;
    Ok((0..=n_r_max)
        .map(|n_r| {
            let n = n_r as f64 + lambda0 + 1.0;
            mu / (1.0 + ze2 * ze2 / (n * n)).sqrt()
        })
        .collect())
}
