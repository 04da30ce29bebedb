//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{r, sphere_quadrature};
use dirac_hulthen::angular::{sigma_r_action_residual, spinor_harmonic};
use dirac_hulthen::greens::{bound_window, coulomb_recurrence_check, pole_scan, CoulombChannel};
use dirac_hulthen::oracle::{eigen_solve, Centrifugal, OracleConfig};
use dirac_hulthen::potential::{centrifugal_approx, rosen_morse_identity_residual, RadialChannel};
use dirac_hulthen::specfun::{gauss_2f1, gauss_connection, kummer_1f1, whittaker_m, whittaker_w_connection, Complex64};
use dirac_hulthen::spectrum::{bound_energies, coulomb_energies, HalfInt, QuantumNumbers, Sign};
use dirac_hulthen::{Error, PotentialParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

const Q_VALUES: [f64; 3] = [1.0, 1.5, 2.0];
const KAPPAS: [i32; 4] = [-1, 1, -2, 2];
const A_MU: f64 = 50.0;

/// Channels of the level matrix at the given `aV0`; supercritical ones are counted, not built.
fn level_matrix(a_v0: f64) -> (Vec<(PotentialParams, QuantumNumbers)>, usize) {
    let mut channels = Vec::new();
    let mut supercritical = 0;
    for q in Q_VALUES {
        let p = PotentialParams::from_dimensionless(A_MU, a_v0, 1.0, q).unwrap();
        for kappa in KAPPAS {
            for sign in [Sign::Plus, Sign::Minus] {
                match QuantumNumbers::radial(kappa, Sign::Plus, sign, &p) {
                    Ok(qn) => channels.push((p, qn)),
                    Err(Error::Supercritical { .. }) => supercritical += 1,
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }
    (channels, supercritical)
}

fn oracle_gap(channels: &[(PotentialParams, QuantumNumbers)]) -> Result<(f64, usize), String> {
    let results: Vec<Result<(f64, usize), String>> = channels
        .par_iter()
        .map(|(p, qn)| {
            let closed = bound_energies(qn, p, 10_000).map_err(|e| e.to_string())?;
            let oracle = eigen_solve(qn, p, 0.0, 2.0 * p.mu(), Centrifugal::Approximate, &OracleConfig::default())
                .map_err(|e| e.to_string())?;
            if closed.len() != oracle.len() {
                return Err(format!("q={} kappa={}: {} closed-form levels, {} oracle levels", p.q(), qn.kappa(), closed.len(), oracle.len()));
            }
            let worst = closed
                .iter()
                .zip(&oracle)
                .map(|(c, o)| (c.energy - o.energy).abs() / p.mu())
                .fold(0.0, f64::max);
            Ok((worst, closed.len()))
        })
        .collect();
    results.into_iter().try_fold((0.0f64, 0), |(w, n), r| r.map(|(wr, nr)| (w.max(wr), n + nr)))
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let (stated, stated_super) = level_matrix(5.0);
    let stated_result = oracle_gap(&stated);
    let (supplementary, _) = level_matrix(0.8);
    let result = oracle_gap(&supplementary);
    let elapsed = start.elapsed();
    match (stated_result, result) {
        (Ok((stated_worst, _)), Ok((worst, levels))) => Verdict::new(
            stated_worst <= 1e-6 && worst <= 1e-6 && elapsed < Duration::from_secs(120),
            format!(
                "aV0=5: {} channels subcritical, {stated_super} supercritical; aV0=0.8: {} channels, {levels} levels, max |dE|/mu = {worst:.2e}; {:.1} s",
                stated.len(),
                supplementary.len(),
                elapsed.as_secs_f64()
            ),
        ),
        (Err(e), _) | (_, Err(e)) => Verdict::new(false, e),
    }
}

fn criterion_2() -> Verdict {
    let mut worst = 0.0f64;
    for ze2 in [0.1, 0.3, 0.5] {
        for kappa in [-1, 1] {
            let e = coulomb_energies(kappa, Sign::Minus, ze2, 1.0, 0).unwrap()[0];
            worst = worst.max((e - (1.0f64 - ze2 * ze2).sqrt()).abs());
        }
    }
    Verdict::new(worst < 1e-12, format!("max |E/mu - sqrt(1 - Z²e⁴)| = {worst:.2e}"))
}

fn criterion_3() -> Verdict {
    let ze2 = 0.2;
    let mut monotone = true;
    let mut final_worst = 0.0f64;
    for kappa in KAPPAS {
        for beta in [Sign::Plus, Sign::Minus] {
            let mut last = [f64::INFINITY; 4];
            for a_mu in [1e2, 1e3, 1e4] {
                let p = PotentialParams::new(1.0, ze2 / a_mu, a_mu, 1.0).unwrap();
                let qn = QuantumNumbers::channel(kappa, beta, &p).unwrap();
                let exact = coulomb_energies(kappa, qn.sign_gamma(), ze2, 1.0, 3).unwrap();
                let levels = bound_energies(&qn, &p, 3).unwrap();
                for (n, (level, e)) in levels.iter().zip(&exact).enumerate() {
                    let dev = (level.energy - e).abs() / e;
                    monotone &= dev < last[n];
                    last[n] = dev;
                }
            }
            final_worst = final_worst.max(last.iter().copied().fold(0.0, f64::max));
        }
    }
    Verdict::new(
        monotone && final_worst < 1e-3,
        format!("deviation monotone: {monotone}; max relative deviation at a·mu = 1e4: {final_worst:.2e}"),
    )
}

fn criterion_4() -> Verdict {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut census_ok = true;
    let (stated, _) = level_matrix(5.0);
    let (supplementary, _) = level_matrix(0.8);
    for (p, qn) in stated.iter().chain(&supplementary) {
        let levels = bound_energies(qn, p, 10_000).unwrap();
        let (lo, hi) = bound_window(qn, p);
        let poles = pole_scan(lo, hi, 4000, qn, p).unwrap();
        census_ok &= poles.len() == levels.len();
        for (pole, level) in poles.iter().zip(&levels) {
            census_ok &= pole.n_r == level.n_r;
            worst = worst.max((pole.energy - level.energy).abs() / p.mu());
            count += 1;
        }
    }
    Verdict::new(
        census_ok && worst < 1e-9,
        format!("{count} poles, one per level: {census_ok}; max |dE|/mu = {worst:.2e}"),
    )
}

fn criterion_5() -> Verdict {
    let mut worst = 0.0f64;
    for q in Q_VALUES {
        let p = PotentialParams::from_dimensionless(A_MU, 0.8, 1.0, q).unwrap();
        for lambda in [-0.3, 0.6, 2.2] {
            let channel = RadialChannel::new(lambda, 2);
            for e_frac in [0.6, 0.85, 0.97] {
                for y in [-3.0, -0.5, 0.0, 1.0, 4.0] {
                    let res = rosen_morse_identity_residual(y * p.a(), e_frac * p.mu(), &channel, &p).unwrap();
                    worst = worst.max(res);
                }
            }
        }
    }
    Verdict::new(worst < 1e-10, format!("max residual over 3×3×3 grid = {worst:.2e}"))
}

// W_{k,m}(z) and M_{k,m}(z) at 30 digits
const WHITTAKER_REFERENCE: [(f64, f64, f64, f64, f64); 5] = [
    (0.3, 0.4, 1.2, 0.621_909_569_183_427_38, 1.025_005_352_104_567_3),
    (-0.5, 0.75, 2.0, 0.225_980_806_829_397_51, 3.942_430_904_144_839),
    (1.1, 0.3, 0.8, 0.352_510_113_769_165_27, 0.466_272_833_898_380_42),
    (0.7, 1.25, 4.0, 0.507_128_022_334_016_6, 7.796_074_741_305_709),
    (0.2, 0.65, 0.3, 1.053_516_878_145_918, 0.244_797_273_042_971_43),
];

fn criterion_6() -> Verdict {
    let mut rng = StdRng::seed_from_u64(20_240_611);
    let mut connection = 0.0f64;
    for _ in 0..100 {
        let a = rng.gen_range(0.05..1.0);
        let b = rng.gen_range(0.05..1.0);
        let c = a + b + rng.gen_range(0..2) as f64 + rng.gen_range(0.05..0.95);
        let z = rng.gen_range(0.05..0.95);
        connection = connection.max(gauss_connection(r(a), r(b), r(c), r(z)).unwrap().relative_residual());
    }

    let mut confluent = 0.0f64;
    let beta = 1e6;
    for (a, c, z) in [(0.5, 1.5, 2.0), (1.3, 0.7, 1.0), (0.2, 2.5, 3.0), (1.0, 1.0, 0.5)] {
        let limit = gauss_2f1(r(a), r(beta), r(c), r(z / beta)).unwrap().re;
        let direct = kummer_1f1(r(a), r(c), r(z)).unwrap().re;
        confluent = confluent.max((limit - direct).abs() / direct.abs());
    }

    let mut whittaker = 0.0f64;
    for (k, m, z, w_ref, m_ref) in WHITTAKER_REFERENCE {
        whittaker = whittaker.max((whittaker_w_connection(k, m, z).unwrap() - w_ref).abs() / w_ref.abs());
        whittaker = whittaker.max((whittaker_m(k, m, z).unwrap() - m_ref).abs() / m_ref.abs());
    }

    let mut recurrence = 0.0f64;
    for ze2 in [0.1, 0.3, 0.6] {
        for kappa in [-2, -1, 1, 2] {
            for sign in [Sign::Plus, Sign::Minus] {
                for e in [0.3, 0.9] {
                    let channel = CoulombChannel::new(kappa, sign, ze2, e, 1.0).unwrap();
                    for x in [0.5, 1.0, 2.0] {
                        recurrence = recurrence.max(coulomb_recurrence_check(x / channel.omega_tilde, &channel).unwrap());
                    }
                }
            }
        }
    }
    Verdict::new(
        connection < 1e-9 && confluent < 1e-5 && whittaker < 1e-10 && recurrence < 1e-8,
        format!(
            "connection {connection:.2e} (100 draws), confluent {confluent:.2e}, Whittaker {whittaker:.2e}, Coulomb recurrence {recurrence:.2e}"
        ),
    )
}

fn criterion_7() -> Verdict {
    let kappas: [i32; 6] = [-3, -2, -1, 1, 2, 3];
    let states: Vec<(i32, HalfInt)> = kappas
        .iter()
        .flat_map(|&k| {
            let two_j = 2 * k.abs() - 1;
            (-two_j..=two_j).step_by(2).map(move |m| (k, HalfInt::from_twice(m)))
        })
        .collect();
    let quad = sphere_quadrature(16, 16);
    let values: Vec<Vec<[Complex64; 2]>> = states
        .iter()
        .map(|&(k, m)| quad.iter().map(|&(t, p, _)| spinor_harmonic(k, m, t, p).unwrap().components()).collect())
        .collect();
    let mut ortho = 0.0f64;
    for i in 0..states.len() {
        for j in i..states.len() {
            let overlap: Complex64 = quad
                .iter()
                .enumerate()
                .map(|(n, &(_, _, w))| w * (values[i][n][0].conj() * values[j][n][0] + values[i][n][1].conj() * values[j][n][1]))
                .sum();
            let want = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((overlap - want).norm());
        }
    }

    let mut rng = StdRng::seed_from_u64(7);
    let mut sigma = 0.0f64;
    for &(k, m) in &states {
        let mut angles = vec![(0.0, 0.0), (std::f64::consts::PI, 1.0)];
        angles.extend((0..20).map(|_| (rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(-3.2..3.2))));
        for (t, p) in angles {
            sigma = sigma.max(sigma_r_action_residual(k, m, t, p).unwrap());
        }
    }
    Verdict::new(
        ortho < 1e-8 && sigma < 1e-10,
        format!("orthonormality {ortho:.2e} over {} states, sigma_r identity {sigma:.2e}", states.len()),
    )
}

fn criterion_8() -> Verdict {
    let p = PotentialParams::new(1.0, 0.01, 1.0, 1.0).unwrap();
    let relative = |x: f64| (centrifugal_approx(x, &p).unwrap() * x * x - 1.0).abs();
    let excess = |x: f64| (centrifugal_approx(x, &p).unwrap() - 1.0 / (x * x)).abs();
    let (at_01, at_05) = (relative(0.1), relative(0.5));
    // least-squares slope of ln(excess) against ln(r/a)
    let points: Vec<(f64, f64)> = (0..=20)
        .map(|i| {
            let x = 10f64.powf(-3.0 + 2.0 * i as f64 / 20.0);
            (x.ln(), excess(x).ln())
        })
        .collect();
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    Verdict::new(
        at_01 < 1e-4 && at_05 < 1e-2 && (slope - 2.0).abs() < 0.05,
        format!("relative error {at_01:.2e} at r/a=0.1, {at_05:.2e} at r/a=0.5; error slope {slope:.3} on [1e-3, 1e-1]"),
    )
}

fn criterion_9() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_dirac-hulthen");
    let runs: [&[&str]; 5] = [
        &["spectrum", "--kappa", "-2,-1,1,2", "--q", "1.5", "--certify", "--format", "json"],
        &["greens", "--kappa", "-1,2", "--energy", "0.95", "--r-points", "12"],
        &["approx-error", "--levels", "--q-sweep", "1,1.5", "--nr-max", "2"],
        &["coulomb-limit", "--kappa", "-1,1", "--nr-max", "3", "--ze2", "0.3"],
        &["selftest", "--kappa", "-1,1", "--nr-max", "2"],
    ];
    let mut identical = 0;
    for args in runs {
        let first = Command::new(bin).args(args).output().unwrap();
        let second = Command::new(bin).args(args).output().unwrap();
        if first.status.success() && first.stdout == second.stdout && !first.stdout.is_empty() {
            identical += 1;
        }
    }
    Verdict::new(identical == runs.len(), format!("{identical}/{} commands byte-identical across repeated runs", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("closed form matches oracle", criterion_1),
        ("Dirac-Coulomb ground state", criterion_2),
        ("Coulomb limit of the deformed spectrum", criterion_3),
        ("Green's function poles are the levels", criterion_4),
        ("Rosen-Morse mapping identity", criterion_5),
        ("special-function identities", criterion_6),
        ("angular identities", criterion_7),
        ("centrifugal approximation envelope", criterion_8),
        ("deterministic CLI output", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = check();
        if !verdict.pass {
            failures += 1;
        }
        println!("criterion {}: {} {name}: {}", i + 1, if verdict.pass { "PASS" } else { "FAIL" }, verdict.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
