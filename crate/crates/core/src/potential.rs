//! The deformed Hulthén well, its centrifugal approximant and the change of
//! variables onto a Rosen–Morse problem.
//!
//! Internally radii are measured from the singular surface `r0 = a ln q` in
//! units of `a`; with `s = (r - r0)/a` one has `e^{r/a} - q = q (e^s - 1)`,
//! which keeps every expression accurate close to the wall.

use serde::Serialize;

use crate::specfun::{cosh_q, tanh_q};
use crate::spectrum::QuantumNumbers;
use crate::{Error, Result};

/// Physical inputs of the potential, in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams {
    mu: f64,
    v0: f64,
    a: f64,
    q: f64,
}

impl PotentialParams {
    /// Mass `mu`, depth `v0`, range `a` and deformation `q`.
    pub fn new(mu: f64, v0: f64, a: f64, q: f64) -> Result<Self> {
        let check = |name, value: f64, ok: bool, reason| {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, value, reason })
            }
        };
        check("mu", mu, mu > 0.0, "must be positive")?;
        check("v0", v0, v0 > 0.0, "must be positive")?;
        check("a", a, a > 0.0, "must be positive")?;
        check("q", q, q >= 1.0, "must be at least 1")?;
        Ok(PotentialParams { mu, v0, a, q })
    }

    /// Build from the dimensionless products `a·mu` and `a·V0`.
    pub fn from_dimensionless(a_mu: f64, a_v0: f64, a: f64, q: f64) -> Result<Self> {
        Self::new(a_mu / a, a_v0 / a, a, q)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `r0 = a ln q`, where the potential is singular.
    pub fn singular_radius(&self) -> f64 {
        self.a * self.q.ln()
    }

    /// `a·V0/q`, the coupling that enters the Dirac eigenvalue `γ`.
    pub fn coupling(&self) -> f64 {
        self.a * self.v0 / self.q
    }

    /// Distance to the wall in units of `a`, checked to be positive.
    pub(crate) fn wall_distance(&self, r: f64) -> Result<f64> {
        let r0 = self.singular_radius();
        let s = (r - r0) / self.a;
        if r.is_finite() && s > 0.0 {
            Ok(s)
        } else {
            Err(Error::OutsideDomain { r, r0 })
        }
    }
}

/// `e^s / (e^s - 1)^2`, the deformed centrifugal shape in units of `1/a²`.
pub(crate) fn centrifugal_shape(s: f64) -> f64 {
    let d = (-s).exp_m1();
    (-s).exp() / (d * d)
}

/// `1 / (e^s - 1)`.
pub(crate) fn inverse_excess(s: f64) -> f64 {
    -(-s).exp() / (-s).exp_m1()
}

/// `V(r) = -V0 / (e^{r/a} - q)`.
pub fn hulthen_potential(r: f64, p: &PotentialParams) -> Result<f64> {
    let s = p.wall_distance(r)?;
    Ok(-p.v0 / p.q * inverse_excess(s))
}

/// Approximant `q e^{r/a} / (a² (e^{r/a} - q)²) + 1/(12 a²)` of `1/r²`.
pub fn centrifugal_approx(r: f64, p: &PotentialParams) -> Result<f64> {
    let s = p.wall_distance(r)?;
    Ok((centrifugal_shape(s) + 1.0 / 12.0) / (p.a * p.a))
}

/// The parts of a partial wave that the radial equation sees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialChannel {
    /// Effective orbital parameter, `λ > -1`.
    pub lambda: f64,
    /// The integer `κ(κ - β̃)`; the energy shift is this over `12 a²`.
    pub kappa_shift: i32,
}

impl RadialChannel {
    pub fn new(lambda: f64, kappa_shift: i32) -> Self {
        RadialChannel { lambda, kappa_shift }
    }

    pub fn centrifugal_strength(&self) -> f64 {
        self.lambda * (self.lambda + 1.0)
    }

    /// `κ(κ - β̃)/12`, the shift of `(aε)²`.
    pub fn shift(&self) -> f64 {
        self.kappa_shift as f64 / 12.0
    }
}

impl From<&QuantumNumbers> for RadialChannel {
    fn from(qn: &QuantumNumbers) -> Self {
        RadialChannel::new(qn.lambda(), qn.kappa_shift())
    }
}

/// `ε² = μ² - E² + κ(κ-β̃)/(12a²)`.
pub fn epsilon_sq(energy: f64, channel: &RadialChannel, p: &PotentialParams) -> f64 {
    (p.mu - energy) * (p.mu + energy) + channel.shift() / (p.a * p.a)
}

/// `W(r; E)` of the radial equation `u'' = W u`.
pub fn effective_radial_potential(r: f64, energy: f64, channel: &RadialChannel, p: &PotentialParams) -> Result<f64> {
    let s = p.wall_distance(r)?;
    let centrifugal = channel.centrifugal_strength() * centrifugal_shape(s) / (p.a * p.a);
    let coupling = p.v0 * (p.v0 / p.q - 2.0 * energy) / p.q * inverse_excess(s);
    Ok(centrifugal + coupling + epsilon_sq(energy, channel, p))
}

/// `ξ(r) = (a/2) ln(e^{r/a} - q)`.
pub fn xi_of_r(r: f64, p: &PotentialParams) -> Result<f64> {
    let s = p.wall_distance(r)?;
    Ok(0.5 * p.a * (p.q.ln() + s.exp_m1().ln()))
}

/// `r(ξ) = a ln(e^{2ξ/a} + q)`.
pub fn r_of_xi(xi: f64, p: &PotentialParams) -> f64 {
    let y = xi / p.a;
    if y < 0.0 {
        p.a * (p.q.ln() + ((2.0 * y).exp() / p.q).ln_1p())
    } else {
        p.a * (2.0 * y + (p.q * (-2.0 * y).exp()).ln_1p())
    }
}

/// `f = (dr/dξ)² = e^{2ξ/a} / cosh_q²(ξ/a)`.
pub fn regulating_function(xi: f64, p: &PotentialParams) -> f64 {
    let y = xi / p.a;
    if y.abs() < 300.0 {
        let c = cosh_q(y, p.q);
        (2.0 * y).exp() / (c * c)
    } else {
        let t = 1.0 + p.q * (-2.0 * y).exp();
        4.0 / (t * t)
    }
}

/// Constants of the Rosen–Morse problem the radial equation maps onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RosenMorseParams {
    /// Coefficient of `tanh_q y`.
    pub a_coef: f64,
    /// Coefficient of `-1/cosh_q² y`.
    pub b_coef: f64,
    /// Energy of the mapped problem.
    pub e_tilde: f64,
    pub e_pt_prime: f64,
    pub l_e: f64,
    pub m1: f64,
    pub m2: f64,
}

/// Dimensionless kernel numbers `ε̃` and `ω²` at one energy.
pub(crate) fn kernel_numbers(energy: f64, channel: &RadialChannel, p: &PotentialParams) -> Result<(f64, f64)> {
    let eps_sq = epsilon_sq(energy, channel, p) * p.a * p.a;
    if eps_sq < 0.0 || !eps_sq.is_finite() {
        return Err(Error::Unbound {
            energy,
            reason: "mu^2 - E^2 + kappa(kappa - beta)/12a^2 is negative",
        });
    }
    let omega_sq = p.a * p.a * p.v0 * (p.v0 / p.q - 2.0 * energy);
    Ok((eps_sq.sqrt(), omega_sq))
}

pub fn rosen_morse_params(energy: f64, channel: &RadialChannel, p: &PotentialParams) -> Result<RosenMorseParams> {
    let (eps, omega_sq) = kernel_numbers(energy, channel, p)?;
    let q = p.q;
    let l2 = channel.centrifugal_strength();
    let e_pt_prime = 0.5 * (eps * eps - omega_sq / q - 1.0 / 16.0);
    let radicand = 1.0 / 16.0 + 2.0 * e_pt_prime;
    if radicand < 0.0 {
        return Err(Error::Unbound {
            energy,
            reason: "eps^2 - omega^2/q is negative",
        });
    }
    let half = channel.lambda + 0.5;
    Ok(RosenMorseParams {
        a_coef: eps * eps - l2 - 0.25,
        b_coef: 0.5 * (q * eps * eps - omega_sq - 0.25 * q),
        e_tilde: -(eps * eps + l2 + 0.25),
        e_pt_prime,
        l_e: -0.5 + radicand.sqrt(),
        m1: eps + half,
        m2: eps - half,
    })
}

/// Check that the mapped radial equation is the Rosen–Morse problem.
///
/// With `y = ξ/a` and `r = r(ξ)` this returns
/// `|a² f W / 2 + Q(y) - (A tanh_q y - B / cosh_q² y - Ẽ)|`, where `Q` is
/// the quantum correction `(3 (g''/g')² - 2 g'''/g') / 8` of the map
/// `g(y) = r/a`.
pub fn rosen_morse_identity_residual(xi: f64, energy: f64, channel: &RadialChannel, p: &PotentialParams) -> Result<f64> {
    let rm = rosen_morse_params(energy, channel, p)?;
    let y = xi / p.a;
    let r = r_of_xi(xi, p);
    let w = effective_radial_potential(r, energy, channel, p)?;
    let f = regulating_function(xi, p);
    // derivatives of g(y) = ln(e^{2y} + q) in terms of u = q/(e^{2y} + q)
    let u = 1.0 / (1.0 + (2.0 * y).exp() / p.q);
    let g1 = 2.0 * (1.0 - u);
    let g2 = 4.0 * u * (1.0 - u);
    let g3 = -8.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
    let correction = (3.0 * (g2 / g1).powi(2) - 2.0 * g3 / g1) / 8.0;
    let c = cosh_q(y, p.q);
    let lhs = 0.5 * p.a * p.a * f * w + correction;
    let rhs = rm.a_coef * tanh_q(y, p.q) - rm.b_coef / (c * c) - rm.e_tilde;
    Ok((lhs - rhs).abs())
}
