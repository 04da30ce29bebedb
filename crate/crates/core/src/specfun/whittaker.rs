use num_complex::Complex64;

use super::{gamma, integer_distance, is_nonpositive_integer, kummer_1f1, kummer_1f1_derivative, SpecFunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhittakerKind {
    M,
    W,
}

/// Whittaker `M` or `W`; `W` is the two-term combination of `M` functions.
pub fn whittaker(kind: WhittakerKind, k: f64, m: f64, z: f64) -> Result<f64, SpecFunError> {
    match kind {
        WhittakerKind::M => whittaker_m(k, m, z),
        WhittakerKind::W => whittaker_w_connection(k, m, z),
    }
}

fn check_positive(z: f64) -> Result<(), SpecFunError> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(SpecFunError::Domain(format!("Whittaker argument z = {z} must be positive")))
    }
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `M_{k,m}(z) = e^{-z/2} z^{m+1/2} ₁F₁(m - k + 1/2; 2m + 1; z)`
pub fn whittaker_m(k: f64, m: f64, z: f64) -> Result<f64, SpecFunError> {
    check_positive(z)?;
    let f = kummer_1f1(c64(m - k + 0.5), c64(2.0 * m + 1.0), c64(z))?;
    Ok((-0.5 * z + (m + 0.5) * z.ln()).exp() * f.re)
}

pub fn whittaker_m_derivative(k: f64, m: f64, z: f64) -> Result<f64, SpecFunError> {
    check_positive(z)?;
    let a = c64(m - k + 0.5);
    let c = c64(2.0 * m + 1.0);
    let front = (-0.5 * z + (m + 0.5) * z.ln()).exp();
    let f = kummer_1f1(a, c, c64(z))?.re;
    let df = kummer_1f1_derivative(a, c, c64(z))?.re;
    Ok(front * (f * ((m + 0.5) / z - 0.5) + df))
}

/// Coefficients of `M_{k,m}` and `M_{k,-m}` in `W_{k,m}`.
fn connection_coefficients(k: f64, m: f64) -> Result<(f64, f64), SpecFunError> {
    if integer_distance(2.0 * m) < 1e-12 {
        return Err(SpecFunError::Degenerate(format!("2m = {} is an integer", 2.0 * m)));
    }
    let coefficient = |num: f64, den: f64| -> Result<f64, SpecFunError> {
        if is_nonpositive_integer(c64(den)) {
            return Ok(0.0);
        }
        Ok((gamma(c64(num))? / gamma(c64(den))?).re)
    };
    Ok((coefficient(-2.0 * m, 0.5 - m - k)?, coefficient(2.0 * m, 0.5 + m - k)?))
}

/// `W_{k,m}` from the combination `Γ(-2m)/Γ(1/2-m-k) M_{k,m} + Γ(2m)/Γ(1/2+m-k) M_{k,-m}`.
///
/// Undefined for integer `2m`; cancels badly once `z` is large. See
/// [`whittaker_w`] for a version that covers both cases.
pub fn whittaker_w_connection(k: f64, m: f64, z: f64) -> Result<f64, SpecFunError> {
    check_positive(z)?;
    let (c1, c2) = connection_coefficients(k, m)?;
    let mut value = 0.0;
    if c1 != 0.0 {
        value += c1 * whittaker_m(k, m, z)?;
    }
    if c2 != 0.0 {
        value += c2 * whittaker_m(k, -m, z)?;
    }
    Ok(value)
}

/// Large-z expansion of `ln W_{k,m}(z)`, if it reaches full precision.
fn asymptotic_ln_w(k: f64, m: f64, z: f64) -> Option<f64> {
    let p = 0.5 + m - k;
    let s = 0.5 - m - k;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut previous = f64::INFINITY;
    for n in 0..400 {
        let n = n as f64;
        term *= -(p + n) * (s + n) / ((n + 1.0) * z);
        if term == 0.0 {
            // terminating expansion: exact
            break;
        }
        if term.abs() > previous {
            return None;
        }
        previous = term.abs();
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
    }
    if sum <= 0.0 {
        return None;
    }
    Some(-0.5 * z + k * z.ln() + sum.ln())
}

/// Whittaker `W_{k,m}(z)` for `z > 0`, including integer `2m`.
///
/// Large arguments use the asymptotic expansion; moderate ones use the
/// `M` combination when it is well conditioned, otherwise the Whittaker
/// equation is integrated inward from the asymptotic region.
pub fn whittaker_w(k: f64, m: f64, z: f64) -> Result<f64, SpecFunError> {
    check_positive(z)?;
    if let Some(ln_w) = asymptotic_ln_w(k, m, z) {
        return Ok(ln_w.exp());
    }
    if let Ok((c1, c2)) = connection_coefficients(k, m) {
        let t1 = if c1 != 0.0 { c1 * whittaker_m(k, m, z)? } else { 0.0 };
        let t2 = if c2 != 0.0 { c2 * whittaker_m(k, -m, z)? } else { 0.0 };
        let value = t1 + t2;
        if value.is_finite() && (t1.abs() + t2.abs()) < 1e4 * value.abs() {
            return Ok(value);
        }
    }
    integrate_w(k, m, z)
}

fn integrate_w(k: f64, m: f64, z: f64) -> Result<f64, SpecFunError> {
    let mut z_far = z.max(20.0);
    let ln_far = loop {
        if let Some(v) = asymptotic_ln_w(k, m, z_far) {
            break v;
        }
        z_far *= 1.5;
        if z_far > 1e6 {
            return Err(SpecFunError::Domain(format!("no asymptotic start for W_{{{k},{m}}}")));
        }
    };
    // phi(t) = W(e^t) / e^{t/2} obeys phi'' = (z^2/4 - k z + m^2) phi;
    // Numerov is O(h^4), so two step sizes are combined by Richardson extrapolation
    let t_far = z_far.ln();
    let t_near = z.ln();
    let h = (1e-3f64).min(0.05 / z_far);
    let steps = (((t_far - t_near) / h).ceil() as usize).max(1000);
    let coarse = march_inward(k, m, t_far, t_near, ln_far, steps)?;
    let fine = march_inward(k, m, t_far, t_near, ln_far, 2 * steps)?;
    let result = fine + (fine - coarse) / 15.0;
    if result.is_finite() {
        Ok(result)
    } else {
        Err(SpecFunError::NonFinite)
    }
}

fn march_inward(k: f64, m: f64, t_far: f64, t_near: f64, ln_far: f64, steps: usize) -> Result<f64, SpecFunError> {
    let kernel = |t: f64| {
        let x = t.exp();
        0.25 * x * x - k * x + m * m
    };
    let h = (t_far - t_near) / steps as f64;
    let t_next = t_far - h;
    let ln_next = asymptotic_ln_w(k, m, t_next.exp())
        .ok_or_else(|| SpecFunError::Domain("asymptotic start too close to the turning region".into()))?;
    let base = ln_far - 0.5 * t_far;
    let mut prev = 1.0;
    let mut cur = (ln_next - 0.5 * t_next - base).exp();
    let mut scale = 0.0;
    let h12 = h * h / 12.0;
    let mut f_prev = kernel(t_far);
    let mut f_cur = kernel(t_next);
    for i in 2..=steps {
        let t = t_far - i as f64 * h;
        let f = kernel(t);
        let next = (2.0 * cur * (1.0 + 5.0 * h12 * f_cur) - prev * (1.0 - h12 * f_prev)) / (1.0 - h12 * f);
        prev = cur;
        cur = next;
        f_prev = f_cur;
        f_cur = f;
        if cur.abs() > 1e100 {
            prev *= 1e-100;
            cur *= 1e-100;
            scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    let value = cur.abs().ln() + scale + base + 0.5 * t_near;
    Ok(cur.signum() * value.exp())
}
