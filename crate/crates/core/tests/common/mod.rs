#![allow(dead_code)]

use dirac_hulthen::specfun::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

pub fn crel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Quadrature over the sphere: Gauss–Legendre in cos θ times trapezoid in φ.
pub fn sphere_quadrature(n_theta: usize, n_phi: usize) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for (x, w) in gauss_legendre(n_theta) {
        for k in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64;
            out.push((x.acos(), phi, w * 2.0 * std::f64::consts::PI / n_phi as f64));
        }
    }
    out
}

/// Neumaier-compensated sum of the Gauss series, fixed number of terms.
pub fn brute_force_2f1(a: f64, b: f64, c: f64, z: f64, terms: usize) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut term = 1.0f64;
    for n in 0..terms {
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    }
    sum + comp
}
