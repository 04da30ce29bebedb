//! Spinor spherical harmonics `Ω_κ^m` and their angular bilinears.

use num_complex::Complex64;

use crate::specfun::spherical_harmonic;
use crate::spectrum::HalfInt;
use crate::{Error, Result};

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

impl Angles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Angles { theta, phi }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn from_vector(v: [f64; 3]) -> Self {
        let rho = v[0].hypot(v[1]);
        Angles::new(rho.atan2(v[2]), v[1].atan2(v[0]))
    }
}

/// 2×2 complex matrix in spin space, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

/// Value of `Ω_κ^m(θ, φ)`: spin-up and spin-down components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorAngular {
    pub upper: Complex64,
    pub lower: Complex64,
    pub kappa: i32,
    pub m: HalfInt,
}

impl SpinorAngular {
    pub fn components(&self) -> [Complex64; 2] {
        [self.upper, self.lower]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }
}

/// Orbital angular momentum of the upper component: `κ` for `κ > 0`, `-κ-1` otherwise.
pub fn orbital_l(kappa: i32) -> i32 {
    if kappa > 0 {
        kappa
    } else {
        -kappa - 1
    }
}

fn check_channel(kappa: i32, m: HalfInt) -> Result<()> {
    let two_j = 2 * kappa.abs() - 1;
    if kappa == 0 || m.twice() % 2 == 0 || m.twice().abs() > two_j {
        return Err(Error::QuantumNumbers(format!("no spinor harmonic with kappa = {kappa}, m = {m}")));
    }
    Ok(())
}

/// `Ω_κ^m = -sgn κ √((κ-m+½)/(2κ+1)) Y_l^{m-½} χ↑ + √((κ+m+½)/(2κ+1)) Y_l^{m+½} χ↓`.
pub fn spinor_harmonic(kappa: i32, m: HalfInt, theta: f64, phi: f64) -> Result<SpinorAngular> {
    check_channel(kappa, m)?;
    let l = orbital_l(kappa);
    let k = kappa as f64;
    let mv = m.value();
    let component = |weight: f64, ml2: i32| -> Result<Complex64> {
        let ml = ml2 / 2;
        if ml.abs() > l || weight <= 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(weight.sqrt() * spherical_harmonic(l, ml, theta, phi)?)
    };
    let sign = -(kappa.signum() as f64);
    let upper = sign * component((k - mv + 0.5) / (2.0 * k + 1.0), m.twice() - 1)?;
    let lower = component((k + mv + 0.5) / (2.0 * k + 1.0), m.twice() + 1)?;
    Ok(SpinorAngular { upper, lower, kappa, m })
}

/// `Σ_m Ω_κ^m(θ'', φ'') Ω_κ2^m(θ', φ')†` for `|κ| = |κ2| = j + ½`.
pub fn bilinear(kappa: i32, kappa2: i32, two_j: i32, angles_pp: Angles, angles_p: Angles) -> Result<Mat2> {
    if two_j < 1 || two_j % 2 == 0 || kappa.abs() != kappa2.abs() || 2 * kappa.abs() - 1 != two_j {
        return Err(Error::QuantumNumbers(format!(
            "bilinear needs |kappa| = |kappa2| = j + 1/2, got kappa = {kappa}, kappa2 = {kappa2}, j = {two_j}/2"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 2]; 2];
    for twice_m in (-two_j..=two_j).step_by(2) {
        let m = HalfInt::from_twice(twice_m);
        let left = spinor_harmonic(kappa, m, angles_pp.theta, angles_pp.phi)?.components();
        let right = spinor_harmonic(kappa2, m, angles_p.theta, angles_p.phi)?.components();
        for (row, l) in left.iter().enumerate() {
            for (col, r) in right.iter().enumerate() {
                out[row][col] += l * r.conj();
            }
        }
    }
    Ok(out)
}

/// `σ·n̂` at the given angles.
pub fn sigma_r(theta: f64, phi: f64) -> Mat2 {
    let [nx, ny, nz] = Angles::new(theta, phi).unit_vector();
    [
        [Complex64::new(nz, 0.0), Complex64::new(nx, -ny)],
        [Complex64::new(nx, ny), Complex64::new(-nz, 0.0)],
    ]
}

/// `‖σ·n̂ Ω_κ^m + Ω_{-κ}^m‖`, which vanishes identically.
pub fn sigma_r_action_residual(kappa: i32, m: HalfInt, theta: f64, phi: f64) -> Result<f64> {
    let omega = spinor_harmonic(kappa, m, theta, phi)?.components();
    let partner = spinor_harmonic(-kappa, m, theta, phi)?.components();
    let sigma = sigma_r(theta, phi);
    let mut norm = 0.0;
    for row in 0..2 {
        let image = sigma[row][0] * omega[0] + sigma[row][1] * omega[1];
        norm += (image + partner[row]).norm_sqr();
    }
    Ok(norm.sqrt())
}
