use super::SpecFunError;

/// Deformation parameter of the Arai hyperbolic functions, `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Deformation(f64);

impl Deformation {
    pub fn new(q: f64) -> Result<Self, SpecFunError> {
        if q.is_finite() && q >= 1.0 {
            Ok(Deformation(q))
        } else {
            Err(SpecFunError::Domain(format!("deformation q = {q} must be finite and >= 1")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperbolicKind {
    Cosh,
    Sinh,
    Tanh,
}

pub fn deformed_hyperbolic(kind: HyperbolicKind, x: f64, q: Deformation) -> f64 {
    match kind {
        HyperbolicKind::Cosh => cosh_q(x, q.0),
        HyperbolicKind::Sinh => sinh_q(x, q.0),
        HyperbolicKind::Tanh => tanh_q(x, q.0),
    }
}

/// `(e^x + q e^-x) / 2`
pub fn cosh_q(x: f64, q: f64) -> f64 {
    0.5 * (x.exp() + q * (-x).exp())
}

/// `(e^x - q e^-x) / 2`
pub fn sinh_q(x: f64, q: f64) -> f64 {
    0.5 * (x.exp() - q * (-x).exp())
}

pub fn tanh_q(x: f64, q: f64) -> f64 {
    // written so that neither exponential can overflow
    if x >= 0.0 {
        let t = q * (-2.0 * x).exp();
        (1.0 - t) / (1.0 + t)
    } else {
        let t = (2.0 * x).exp();
        (t - q) / (t + q)
    }
}
