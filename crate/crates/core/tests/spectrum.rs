mod common;

use common::rel_err;
use dirac_hulthen::oracle::{eigen_solve, Centrifugal, OracleConfig};
use dirac_hulthen::spectrum::*;
use dirac_hulthen::{Error, PotentialParams};
use proptest::prelude::*;

fn params(a_v0: f64, q: f64) -> PotentialParams {
    PotentialParams::from_dimensionless(50.0, a_v0, 50.0, q).unwrap()
}

#[test]
fn sign_algebra() {
    assert_eq!(-Sign::Plus, Sign::Minus);
    assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
    assert_eq!(Sign::try_from(-1), Ok(Sign::Minus));
    assert!(Sign::try_from(0).is_err());
    assert_eq!(Sign::of_int(-7), Sign::Minus);
    assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
    assert_eq!(serde_json::from_str::<Sign>("1").unwrap(), Sign::Plus);
    assert_eq!(HalfInt::from_twice(3).value(), 1.5);
    assert_eq!(HalfInt::from_twice(-1).to_string(), "-1/2");
}

#[test]
fn gamma_eigenvalue_examples() {
    let free = PotentialParams::new(1.0, 1e-300, 1.0, 1.0).unwrap();
    assert!((gamma_eigenvalue(1, Sign::Plus, &free).unwrap() - 1.0).abs() < 1e-15);
    let p = PotentialParams::new(1.0, 0.6, 1.0, 1.0).unwrap();
    assert!((gamma_eigenvalue(1, Sign::Plus, &p).unwrap() - 0.8).abs() < 1e-15);
    assert!((gamma_eigenvalue(-1, Sign::Minus, &p).unwrap() + 0.8).abs() < 1e-15);
    let p = PotentialParams::new(1.0, 1.2, 1.0, 1.0).unwrap();
    assert!(matches!(gamma_eigenvalue(1, Sign::Plus, &p), Err(Error::Supercritical { .. })));
    // q divides the coupling
    let p = PotentialParams::new(1.0, 1.2, 1.0, 2.0).unwrap();
    assert!((gamma_eigenvalue(1, Sign::Plus, &p).unwrap() - 0.8).abs() < 1e-15);
    assert!(gamma_eigenvalue(0, Sign::Plus, &p).is_err());
}

#[test]
fn lambda_of_gamma_examples() {
    assert_eq!(lambda_of_gamma(2.0).unwrap(), 2.0);
    assert_eq!(lambda_of_gamma(-2.0).unwrap(), 1.0);
    assert!((lambda_of_gamma(-0.8).unwrap() + 0.2).abs() < 1e-15);
    assert_eq!(lambda_of_gamma(0.0), Err(Error::ZeroGamma));
}

#[test]
fn quantum_numbers_validation() {
    let p = params(0.8, 1.0);
    let m = HalfInt::from_twice(1);
    let linked = linked_sign_gamma(-1, Sign::Plus);
    let qn = QuantumNumbers::new(-1, m, Sign::Plus, linked, &p).unwrap();
    assert_eq!(qn.j(), HalfInt::from_twice(1));
    assert_eq!(qn.kappa_shift(), 2);
    assert!((qn.gamma().abs() - 0.6).abs() < 1e-15);
    assert!(QuantumNumbers::new(-1, m, Sign::Plus, -linked, &p).is_err());
    assert!(QuantumNumbers::new(-1, HalfInt::from_twice(3), Sign::Plus, linked, &p).is_err());
    assert!(QuantumNumbers::new(-1, HalfInt::from_twice(2), Sign::Plus, linked, &p).is_err());
    assert!(QuantumNumbers::new(0, m, Sign::Plus, linked, &p).is_err());
    // radial channels may take either sign
    let minus = QuantumNumbers::radial(-1, Sign::Plus, -linked, &p).unwrap();
    assert!(minus.lambda() > -1.0);
    assert_eq!(minus.sign_gamma(), -linked);
    // a channel is tied to the coupling it was built for
    let other = params(0.5, 1.0);
    assert!(matches!(bound_energies(&qn, &other, 3), Err(Error::QuantumNumbers(_))));
}

#[test]
fn epsilon_and_omega_examples() {
    let p = params(0.8, 1.5);
    assert_eq!(omega_sq(p.v0() / (2.0 * p.q()), &p), 0.0);
    // κ(κ - β̃) = 0 for κ = β̃ = 1
    let qn = QuantumNumbers::radial(1, Sign::Plus, Sign::Plus, &p).unwrap();
    assert_eq!(qn.kappa_shift(), 0);
    assert_eq!(epsilon_tilde(p.mu(), &qn, &p).unwrap(), 0.0);
    let p = params(0.8, 1.0);
    let qn = QuantumNumbers::channel(-1, Sign::Plus, &p).unwrap();
    let e = 0.99 * p.mu();
    let want = (2500.0 * (1.0 - 0.99f64 * 0.99) + 2.0 / 12.0).sqrt();
    assert!(rel_err(epsilon_tilde(e, &qn, &p).unwrap(), want) < 1e-14);
    assert!(matches!(epsilon_tilde(1.1 * p.mu(), &qn, &p), Err(Error::Unbound { .. })));
}

#[test]
fn quantization_residual_behaviour() {
    let p = params(0.8, 1.5);
    let qn = QuantumNumbers::channel(-1, Sign::Plus, &p).unwrap();
    let levels = bound_energies(&qn, &p, 10).unwrap();
    assert!(!levels.is_empty());
    for level in &levels {
        assert!(quantization_residual(level.energy, level.n_r, &qn, &p).unwrap() < 1e-9);
        let off = quantization_residual(level.energy * 1.01, level.n_r, &qn, &p);
        assert!(off.map_or(true, |r| r > 1e-3));
    }
    // without binding the left side is 1 + λ + n_r > 0
    let weak = PotentialParams::new(1.0, 1e-300, 50.0, 1.0).unwrap();
    let qn = QuantumNumbers::channel(-1, Sign::Plus, &weak).unwrap();
    for e in [0.2, 0.5, 0.9] {
        assert!(quantization_residual(e, 0, &qn, &weak).unwrap() > 0.5);
    }
}

#[test]
fn bound_energies_invariants() {
    for q in [1.0, 1.5, 2.0] {
        let p = params(0.8, q);
        for kappa in [-2, -1, 1, 2] {
            for sign in [Sign::Minus, Sign::Plus] {
                let qn = QuantumNumbers::radial(kappa, Sign::Plus, sign, &p).unwrap();
                let levels = bound_energies(&qn, &p, 40).unwrap();
                let (_, top) = dirac_hulthen::greens::bound_window(&qn, &p);
                for (i, level) in levels.iter().enumerate() {
                    assert_eq!(level.n_r as usize, i);
                    assert!(level.residual < RESIDUAL_TOLERANCE);
                    assert!(level.omega_sq < 0.0 && level.epsilon_tilde > 0.0);
                    assert!(level.energy > p.v0() / (2.0 * q) && level.energy < top);
                    if i > 0 {
                        assert!(level.energy > levels[i - 1].energy);
                    }
                }
            }
        }
    }
}

#[test]
fn no_binding_gives_empty_list() {
    let weak = PotentialParams::new(1.0, 1e-9, 50.0, 1.0).unwrap();
    let qn = QuantumNumbers::channel(-1, Sign::Plus, &weak).unwrap();
    assert!(bound_energies(&qn, &weak, 10).unwrap().is_empty());
}

#[test]
fn stated_strong_coupling_is_supercritical() {
    for q in [1.0, 2.0] {
        let p = params(5.0, q);
        for kappa in [-1, 1, -2, 2] {
            assert!(matches!(
                QuantumNumbers::radial(kappa, Sign::Plus, Sign::Minus, &p),
                Err(Error::Supercritical { .. })
            ));
        }
    }
    let p = params(2.0, 1.0);
    assert!(matches!(QuantumNumbers::channel(-1, Sign::Plus, &p), Err(Error::Supercritical { .. })));
}

fn assert_oracle_agreement(qn: &QuantumNumbers, p: &PotentialParams) {
    let closed = bound_energies(qn, p, 100).unwrap();
    let oracle = eigen_solve(qn, p, 0.0, 2.0 * p.mu(), Centrifugal::Approximate, &OracleConfig::default()).unwrap();
    assert_eq!(closed.len(), oracle.len(), "level census differs");
    for (level, o) in closed.iter().zip(&oracle) {
        assert_eq!(level.n_r, o.n_r);
        assert!((level.energy - o.energy).abs() < 1e-6 * p.mu(), "n_r={}: {} vs {}", level.n_r, level.energy, o.energy);
    }
}

#[test]
fn closed_form_matches_oracle_q1_minus() {
    let p = params(0.8, 1.0);
    assert_oracle_agreement(&QuantumNumbers::radial(-1, Sign::Plus, Sign::Minus, &p).unwrap(), &p);
}

#[test]
fn closed_form_matches_oracle_q2() {
    let p = params(0.8, 2.0);
    assert_oracle_agreement(&QuantumNumbers::channel(1, Sign::Plus, &p).unwrap(), &p);
}

#[test]
fn standard_hulthen_agrees_with_general_formula() {
    let p = params(0.8, 1.0);
    for kappa in [-2, -1, 1, 2] {
        let qn = QuantumNumbers::channel(kappa, Sign::Plus, &p).unwrap();
        let general = bound_energies(&qn, &p, 30).unwrap();
        let standard = standard_hulthen_energies(&qn, &p, 30).unwrap();
        assert_eq!(general.len(), standard.len());
        for (g, s) in general.iter().zip(&standard) {
            assert!((g.energy - s.energy).abs() < 1e-14 * p.mu());
        }
        let gamma = gamma_eigenvalue(kappa, qn.sign_gamma(), &p).unwrap();
        let direct = qn.sign_gamma().value() * ((kappa * kappa) as f64 - 0.64).sqrt();
        assert!((gamma - direct).abs() < 1e-15);
    }
    assert_oracle_agreement(&QuantumNumbers::channel(-1, Sign::Plus, &p).unwrap(), &p);
    let deformed = params(0.8, 1.5);
    let qn = QuantumNumbers::channel(-1, Sign::Plus, &deformed).unwrap();
    assert!(standard_hulthen_energies(&qn, &deformed, 3).is_err());
}

#[test]
fn coulomb_energies_examples() {
    for e in coulomb_energies(1, Sign::Minus, 0.0, 1.0, 5).unwrap() {
        assert_eq!(e, 1.0);
    }
    let e = coulomb_energies(-1, Sign::Minus, 0.5, 1.0, 0).unwrap()[0];
    assert!((e - 0.75f64.sqrt()).abs() < 1e-12);
    assert!((e - 0.866_025_4).abs() < 1e-7);
    assert!(matches!(coulomb_energies(1, Sign::Minus, 1.0, 1.0, 0), Err(Error::Supercritical { .. })));
    assert!(coulomb_energies(1, Sign::Minus, -0.1, 1.0, 0).is_err());
}

#[test]
fn coulomb_limit_of_the_deformed_spectrum() {
    let ze2 = 0.2;
    let exact = coulomb_energies(-1, Sign::Minus, ze2, 1.0, 3).unwrap();
    let mut last = [f64::INFINITY; 4];
    for a_mu in [1e2, 1e3, 1e4] {
        let p = PotentialParams::new(1.0, ze2 / a_mu, a_mu, 1.0).unwrap();
        let qn = QuantumNumbers::radial(-1, Sign::Plus, Sign::Minus, &p).unwrap();
        let levels = bound_energies(&qn, &p, 3).unwrap();
        for (n, (level, e)) in levels.iter().zip(&exact).enumerate() {
            let dev = rel_err(level.energy, *e);
            assert!(dev < last[n]);
            last[n] = dev;
        }
    }
    assert!(last.iter().all(|d| *d < 1e-3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_level_satisfies_the_unsquared_condition(
        a_v0 in 0.05f64..0.95, q in 1.0f64..3.0, kappa in prop::sample::select(vec![-3, -2, -1, 1, 2, 3]), plus in any::<bool>(),
    ) {
        let p = params(a_v0, q);
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let qn = QuantumNumbers::radial(kappa, Sign::Plus, sign, &p).unwrap();
        for level in bound_energies(&qn, &p, 60).unwrap() {
            prop_assert!(quantization_residual(level.energy, level.n_r, &qn, &p).unwrap() < 1e-9);
            prop_assert!(level.omega_sq < 0.0);
        }
    }
}
