use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecFunError;

/// Orthonormal spherical harmonic `Y_l^m(θ, φ)` with the Condon–Shortley phase.
pub fn spherical_harmonic(l: i32, m: i32, theta: f64, phi: f64) -> Result<Complex64, SpecFunError> {
    if l < 0 || m.abs() > l {
        return Err(SpecFunError::InvalidHarmonic { l, m });
    }
    if m < 0 {
        let y = spherical_harmonic(l, -m, theta, phi)?;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * y.conj());
    }
    let x = theta.cos();
    let p = associated_legendre(l, m, x);
    // sqrt((2l+1)/(4π) (l-m)!/(l+m)!)
    let mut ratio = 1.0;
    for i in (l - m + 1)..=(l + m) {
        ratio /= i as f64;
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    Ok(Complex64::from_polar(norm * p, m as f64 * phi))
}

/// `P_l^m(x)` for `m >= 0`, Condon–Shortley phase included.
fn associated_legendre(l: i32, m: i32, x: f64) -> f64 {
    let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= -odd * s;
        odd += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut p = 0.0;
    for ll in (m + 2)..=l {
        p = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = p;
    }
    p
}
