use num_complex::Complex64;

use super::{finite, integer_distance, is_nonpositive_integer, ln_gamma, SpecFunError};

const MAX_TERMS: usize = 10_000;
const REL_TOL: f64 = 1e-16;
const QUIET_TERMS: usize = 3;
// c-a-b closer than this to an integer makes the connection formula cancel
const NEAR_DEGENERATE: f64 = 1e-3;

/// Sum a hypergeometric-type series given the ratio of consecutive terms.
///
/// Stops once three consecutive terms are below `1e-16` of the partial sum.
fn sum_series(mut ratio: impl FnMut(usize) -> Complex64) -> Result<Complex64, SpecFunError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        term *= ratio(n);
        sum += term;
        if term.norm() <= REL_TOL * sum.norm() {
            quiet += 1;
            if quiet == QUIET_TERMS {
                return finite(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(SpecFunError::NonConvergence {
        terms: MAX_TERMS,
        last_term: term.norm(),
        partial_sum: sum,
    })
}

fn series_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    sum_series(|n| {
        let n = n as f64;
        (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
    })
}

fn check_inputs(values: &[Complex64]) -> Result<(), SpecFunError> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(SpecFunError::Domain("non-finite hypergeometric argument".into()))
    }
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for `|z| <= 1`.
///
/// The power series is used for `|z| <= 0.5`; closer to `z = 1` the
/// function is continued through the connection formula to argument `1 - z`.
/// When `c - a - b` is nearly an integer that formula cancels badly, so the
/// plain series is used instead as long as `|z| <= 0.99`.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    check_inputs(&[a, b, c, z])?;
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::ParameterPole(c));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        // terminating polynomial, valid for any z
        return series_2f1(a, b, c, z);
    }
    let modulus = z.norm();
    if modulus <= 0.5 {
        return series_2f1(a, b, c, z);
    }
    if z == Complex64::new(1.0, 0.0) {
        let s = c - a - b;
        if s.re <= 0.0 {
            return Err(SpecFunError::Domain(format!("2F1 diverges at z = 1 when Re(c-a-b) = {} <= 0", s.re)));
        }
        return gauss_sum(a, b, c);
    }
    if modulus >= 1.0 {
        return Err(SpecFunError::Domain(format!("|z| = {modulus} outside the unit disc")));
    }
    let w = 1.0 - z;
    if w.norm() < 0.75 {
        let s = c - a - b;
        if s.im.abs() < NEAR_DEGENERATE && integer_distance(s.re) < NEAR_DEGENERATE {
            if modulus <= 0.99 {
                return series_2f1(a, b, c, z);
            }
            return Err(SpecFunError::Degenerate(format!(
                "c-a-b = {s} is within {NEAR_DEGENERATE} of an integer and |z| = {modulus} > 0.99"
            )));
        }
        return connection_rhs(a, b, c, z);
    }
    let pfaff = z / (z - 1.0);
    if pfaff.norm() < 0.75 {
        // Pfaff: (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
        return finite(w.powc(-a) * series_2f1(a, c - b, c, pfaff)?);
    }
    series_2f1(a, b, c, z)
}

fn gauss_sum(a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64, SpecFunError> {
    let s = c - a - b;
    if is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    finite((ln_gamma(c)? + ln_gamma(s)? - ln_gamma(c - a)? - ln_gamma(c - b)?).exp())
}

/// Ratio `Γ(p)Γ(q) / (Γ(r)Γ(s))`, zero when a denominator argument is a pole.
fn gamma_ratio(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> Result<Complex64, SpecFunError> {
    if is_nonpositive_integer(r) || is_nonpositive_integer(s) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((ln_gamma(p)? + ln_gamma(q)? - ln_gamma(r)? - ln_gamma(s)?).exp())
}

fn connection_rhs(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    let w = 1.0 - z;
    let s = c - a - b;
    let first = gamma_ratio(c, s, c - a, c - b)?;
    let second = gamma_ratio(c, -s, a, b)?;
    let mut value = Complex64::new(0.0, 0.0);
    if first != Complex64::new(0.0, 0.0) {
        value += first * series_2f1(a, b, 1.0 - s, w)?;
    }
    if second != Complex64::new(0.0, 0.0) {
        value += second * w.powc(s) * series_2f1(c - a, c - b, 1.0 + s, w)?;
    }
    finite(value)
}

/// `d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z)`.
pub fn gauss_2f1_derivative(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    check_inputs(&[a, b, c, z])?;
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::ParameterPole(c));
    }
    let scale = a * b / c;
    if scale == Complex64::new(0.0, 0.0) {
        return Ok(scale);
    }
    finite(scale * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z)?)
}

/// Both sides of the Gauss connection formula relating argument `z` to `1 - z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionSides {
    /// Direct power series in `z`.
    pub lhs: Complex64,
    /// Two-term combination of series in `1 - z`.
    pub rhs: Complex64,
}

impl ConnectionSides {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn relative_residual(&self) -> f64 {
        self.residual() / self.lhs.norm()
    }
}

/// Evaluate the connection formula and the direct series independently.
///
/// Fails with [`SpecFunError::Degenerate`] when `c - a - b` is an integer.
pub fn gauss_connection(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<ConnectionSides, SpecFunError> {
    check_inputs(&[a, b, c, z])?;
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::ParameterPole(c));
    }
    let s = c - a - b;
    if s.im == 0.0 && integer_distance(s.re) < 1e-12 {
        return Err(SpecFunError::Degenerate(format!("c-a-b = {} is an integer", s.re)));
    }
    if z == Complex64::new(0.0, 0.0) {
        // the right side tends to 1 as z -> 0 but its series sit at 1 - z = 1
        let one = Complex64::new(1.0, 0.0);
        return Ok(ConnectionSides { lhs: one, rhs: one });
    }
    if z.norm() >= 1.0 || (1.0 - z).norm() >= 1.0 {
        return Err(SpecFunError::Domain(format!("connection formula needs |z| < 1 and |1-z| < 1, got z = {z}")));
    }
    Ok(ConnectionSides {
        lhs: series_2f1(a, b, c, z)?,
        rhs: connection_rhs(a, b, c, z)?,
    })
}

/// Kummer confluent hypergeometric function `₁F₁(a; c; z)`.
pub fn kummer_1f1(a: Complex64, c: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    check_inputs(&[a, c, z])?;
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::ParameterPole(c));
    }
    if z.re < 0.0 && !is_nonpositive_integer(a) {
        // Kummer transformation keeps the terms of one sign
        return finite(z.exp() * series_1f1(c - a, c, -z)?);
    }
    series_1f1(a, c, z)
}

fn series_1f1(a: Complex64, c: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    sum_series(|n| {
        let n = n as f64;
        (a + n) / ((c + n) * (n + 1.0)) * z
    })
}

/// `d/dz ₁F₁(a; c; z) = (a/c) ₁F₁(a+1; c+1; z)`.
pub fn kummer_1f1_derivative(a: Complex64, c: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    check_inputs(&[a, c, z])?;
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::ParameterPole(c));
    }
    let scale = a / c;
    if scale == Complex64::new(0.0, 0.0) {
        return Ok(scale);
    }
    finite(scale * kummer_1f1(a + 1.0, c + 1.0, z)?)
}
