use std::f64::consts::PI;

use num_complex::Complex64;

use super::{finite, is_nonpositive_integer, SpecFunError};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn lanczos(z: Complex64) -> Complex64 {
    let w = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (w + i as f64);
    }
    let t = w + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (w + 0.5) * t.ln() - t + series.ln()
}

/// Principal branch of `ln Γ(z)`.
///
/// Uses the Lanczos approximation for `Re z >= 0.5` and upward recurrence
/// with principal logarithms below that, so the result is the analytic
/// continuation from the positive real axis. Far into the left half plane
/// (`Re z < -60`) the reflection formula takes over and the imaginary part
/// is then only fixed modulo `2π`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecFunError::Domain(format!("ln_gamma of non-finite {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(SpecFunError::GammaPole(z));
    }
    if z.re >= 0.5 {
        return finite(lanczos(z));
    }
    if z.re > -60.0 {
        let shift = (0.5 - z.re).ceil() as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..shift {
            acc += (z + k as f64).ln();
        }
        return finite(lanczos(z + shift as f64) - acc);
    }
    let sin = (PI * z).sin();
    finite(Complex64::new(PI.ln(), 0.0) - sin.ln() - ln_gamma(1.0 - z)?)
}

pub fn gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    finite(ln_gamma(z)?.exp())
}

/// `1/Γ(z)`, which is entire: zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(SpecFunError::GammaPole(_)) => Complex64::new(0.0, 0.0),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}
