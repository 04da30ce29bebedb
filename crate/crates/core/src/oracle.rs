//! Independent eigenvalue oracle: Numerov integration of `u'' = W(r; E) u`
//! with node counting and bisection.
//!
//! Near the wall the regular solution behaves like `(r - r0)^(λ+1)` with a
//! generally non-integer exponent, which ruins the convergence order of a
//! uniform grid in `r`. The radial solver therefore works on a grid that is
//! uniform in `t = ln(r - r0)` and integrates `φ = u / √(r - r0)`, which obeys
//! `φ'' = ((r - r0)² W + ¼) φ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::potential::{centrifugal_shape, inverse_excess, PotentialParams, RadialChannel};
use crate::spectrum::{EnergyState, QuantumNumbers};
use crate::{Error, Result};

/// Smallest grid the radial solver accepts.
pub const MIN_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridMapping {
    /// Uniform in `r`.
    Uniform,
    /// Uniform in `ln(r - origin)`.
    Logarithmic,
}

/// Grid with constant spacing in `r` or in `ln(r - origin)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    origin: f64,
    r_start: f64,
    r_end: f64,
    n_points: usize,
    spacing: f64,
    mapping: GridMapping,
}

impl RadialGrid {
    pub fn uniform(r_start: f64, r_end: f64, n_points: usize) -> Result<Self> {
        Self::build(0.0, r_start, r_end, n_points, GridMapping::Uniform)
    }

    pub fn logarithmic(origin: f64, r_start: f64, r_end: f64, n_points: usize) -> Result<Self> {
        if !(r_start > origin) {
            return Err(Error::Oracle(format!("grid start {r_start} must lie above the origin {origin}")));
        }
        Self::build(origin, r_start, r_end, n_points, GridMapping::Logarithmic)
    }

    fn build(origin: f64, r_start: f64, r_end: f64, n_points: usize, mapping: GridMapping) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::Oracle(format!("grid needs at least {MIN_POINTS} points, got {n_points}")));
        }
        if !(r_start.is_finite() && r_end.is_finite() && r_end > r_start) {
            return Err(Error::Oracle(format!("bad grid range [{r_start}, {r_end}]")));
        }
        let span = match mapping {
            GridMapping::Uniform => r_end - r_start,
            GridMapping::Logarithmic => ((r_end - origin) / (r_start - origin)).ln(),
        };
        Ok(RadialGrid {
            origin,
            r_start,
            r_end,
            n_points,
            spacing: span / (n_points - 1) as f64,
            mapping,
        })
    }

    pub fn r_start(&self) -> f64 {
        self.r_start
    }

    pub fn r_end(&self) -> f64 {
        self.r_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Step in the grid variable (`r` or `t`).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mapping(&self) -> GridMapping {
        self.mapping
    }

    pub fn point(&self, i: usize) -> f64 {
        match self.mapping {
            GridMapping::Uniform => self.r_start + i as f64 * self.spacing,
            GridMapping::Logarithmic => {
                self.origin + (self.r_start - self.origin) * (i as f64 * self.spacing).exp()
            }
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Numerov kernel `f` in the grid variable for `u'' = W u`.
    fn kernel(&self, w: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n_points)
            .map(|i| {
                let r = self.point(i);
                match self.mapping {
                    GridMapping::Uniform => w(r),
                    GridMapping::Logarithmic => {
                        let s = r - self.origin;
                        s * s * w(r) + 0.25
                    }
                }
            })
            .collect()
    }

    /// Factor converting the integrated variable back to `u`.
    fn to_u(&self, i: usize) -> f64 {
        match self.mapping {
            GridMapping::Uniform => 1.0,
            GridMapping::Logarithmic => (self.point(i) - self.origin).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Outward,
    Inward,
}

/// `u` at the first two grid points in the direction of integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartValues {
    pub first: f64,
    pub second: f64,
}

/// Sampled solution; the true values are `u[i] · exp(log_scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub log_scale: f64,
    pub nodes: usize,
}

const RESCALE_AT: f64 = 1e150;

/// One Numerov step for `y'' = f y`: returns `y_{n+1}`.
pub fn numerov_step(f_prev: f64, f_cur: f64, f_next: f64, y_prev: f64, y_cur: f64, h: f64) -> f64 {
    let c = h * h / 12.0;
    (2.0 * y_cur * (1.0 + 5.0 * c * f_cur) - y_prev * (1.0 - c * f_prev)) / (1.0 - c * f_next)
}

/// Integrate `u'' = W(r) u` across the grid.
pub fn numerov_integrate(w: impl Fn(f64) -> f64, grid: &RadialGrid, direction: Direction, start: StartValues) -> Result<Solution> {
    let n = grid.n_points;
    let f = grid.kernel(w);
    let order: Vec<usize> = match direction {
        Direction::Outward => (0..n).collect(),
        Direction::Inward => (0..n).rev().collect(),
    };
    let mut y = vec![0.0; n];
    y[order[0]] = start.first / grid.to_u(order[0]);
    y[order[1]] = start.second / grid.to_u(order[1]);
    let mut log_scale = 0.0;
    for k in 2..n {
        let (a, b, c) = (order[k - 2], order[k - 1], order[k]);
        y[c] = numerov_step(f[a], f[b], f[c], y[a], y[b], grid.spacing);
        if !y[c].is_finite() {
            return Err(Error::Oracle(format!("Numerov overflow at r = {}", grid.point(c))));
        }
        if y[c].abs() > RESCALE_AT {
            for &j in &order[..=k] {
                y[j] /= RESCALE_AT;
            }
            log_scale += RESCALE_AT.ln();
        }
    }
    let u: Vec<f64> = (0..n).map(|i| y[i] * grid.to_u(i)).collect();
    Ok(Solution {
        r: grid.points(),
        nodes: count_nodes(&u),
        u,
        log_scale,
    })
}

fn count_nodes(y: &[f64]) -> usize {
    y.windows(2).filter(|w| (w[0] < 0.0 && w[1] > 0.0) || (w[0] > 0.0 && w[1] < 0.0)).count()
}

/// Where the outward and inward solutions are joined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MatchPoint {
    /// Last grid point inside the classically allowed region.
    OuterTurningPoint,
    /// This fraction of the way from the grid start to the outer turning point.
    Fraction(f64),
}

/// A shooting problem `y'' = f(t; E) y` on a uniform grid, with the
/// kernel decreasing in `E`.
pub trait ShootingProblem: Sync {
    fn profile(&self, energy: f64) -> Result<Profile>;
}

/// Kernel samples, step, and the first two values of the outward solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub kernel: Vec<f64>,
    pub step: f64,
    pub start: [f64; 2],
}

/// Outcome of one shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot {
    /// Number of eigenvalues below the trial energy.
    pub count: usize,
    /// Relative mismatch of `y(m+1)/y(m)` between the two sides.
    pub defect: f64,
    pub match_index: usize,
}

// WKB decay (in e-folds) between the matching point and the inward start
const DECAY_EFOLDS: f64 = 45.0;

/// Integrate from both ends and count the eigenvalues below the energy.
///
/// The count is `nodes_out + nodes_in + [L_out < L_in]` with `L` the
/// logarithmic derivative at the matching point; it steps up by one at
/// each eigenvalue, exactly where the mismatch changes sign.
pub fn shoot(profile: &Profile, match_point: MatchPoint) -> Result<Shot> {
    let f = &profile.kernel;
    let h = profile.step;
    let n = f.len();
    if n < 8 {
        return Err(Error::Oracle("profile too short".into()));
    }
    let turning = (1..n - 3).rev().find(|&i| f[i] < 0.0);
    let outer = turning.unwrap_or_else(|| {
        (1..n - 3).min_by(|&a, &b| f[a].total_cmp(&f[b])).unwrap_or(1)
    });
    let m = match match_point {
        MatchPoint::OuterTurningPoint => outer,
        MatchPoint::Fraction(x) => ((x * outer as f64).round() as usize).clamp(2, outer.max(2)),
    }
    .min(n - 4);

    let mut decay = 0.0;
    let mut inner_end = n - 1;
    for (i, &fi) in f.iter().enumerate().skip(m + 1) {
        decay += fi.max(0.0).sqrt() * h;
        if decay > DECAY_EFOLDS && i >= m + 3 {
            inner_end = i;
            break;
        }
    }

    let (out_m, out_next, nodes_out) = march(f, h, (0..=m + 1).collect::<Vec<_>>().as_slice(), profile.start)?;
    let start_in = [1.0, (h * f[inner_end].max(0.0).sqrt()).exp()];
    let inward: Vec<usize> = (m..=inner_end).rev().collect();
    let (in_next, in_m, nodes_in) = march(f, h, &inward, start_in)?;

    let ratio_out = out_next / out_m;
    let ratio_in = in_next / in_m;
    let below = usize::from(ratio_out < ratio_in);
    let defect = (ratio_out - ratio_in).abs() / ratio_out.abs().max(ratio_in.abs());
    Ok(Shot {
        count: nodes_out + nodes_in + below,
        defect,
        match_index: m,
    })
}

/// March along `path`; returns the last two values (second-to-last first)
/// and the sign changes seen, excluding the final step of the path.
fn march(f: &[f64], h: f64, path: &[usize], start: [f64; 2]) -> Result<(f64, f64, usize)> {
    let (mut prev, mut cur) = (start[0], start[1]);
    let mut nodes = usize::from(prev * cur < 0.0 && path.len() > 2);
    for k in 2..path.len() {
        let next = numerov_step(f[path[k - 2]], f[path[k - 1]], f[path[k]], prev, cur, h);
        if !next.is_finite() {
            return Err(Error::Oracle("non-finite value while marching".into()));
        }
        if k + 1 < path.len() && next * cur < 0.0 {
            nodes += 1;
        }
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
        }
    }
    Ok((prev, cur, nodes))
}

/// Knobs of the eigenvalue search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverSettings {
    pub match_point: MatchPoint,
    /// Absolute energy resolution of the bisection.
    pub energy_tolerance: f64,
}

/// An eigenvalue found by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    /// Nodes of the eigenfunction.
    pub n_r: u32,
    pub energy: f64,
    pub match_defect: f64,
}

/// All eigenvalues in `[e_lo, e_hi]`, located by bisection on the count.
pub fn find_levels<P: ShootingProblem>(problem: &P, e_lo: f64, e_hi: f64, settings: &SolverSettings) -> Result<Vec<OracleResult>> {
    if !(e_lo < e_hi) {
        return Ok(Vec::new());
    }
    let count = |e: f64| -> Result<Shot> { shoot(&problem.profile(e)?, settings.match_point) };
    let low = count(e_lo)?.count;
    let high = count(e_hi)?.count;
    let mut levels = Vec::new();
    let mut floor = e_lo;
    for k in low..high {
        let (mut lo, mut hi) = (floor, e_hi);
        while hi - lo > settings.energy_tolerance {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count(mid)?.count > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let energy = 0.5 * (lo + hi);
        let shot = count(energy)?;
        levels.push(OracleResult {
            n_r: k as u32,
            energy,
            match_defect: shot.defect,
        });
        floor = lo;
    }
    Ok(levels)
}

/// Which centrifugal term the radial equation carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Centrifugal {
    /// The exponential approximant, with the `κ(κ-β̃)/12a²` shift.
    Approximate,
    /// The true `λ(λ+1)/r²`, no shift.
    Exact,
}

/// Settings of [`eigen_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub n_points: usize,
    /// Grid extends this many decay lengths past the well at the top energy.
    pub decay_lengths: f64,
    /// Energies with `ε̃` below this are not searched.
    pub min_epsilon: f64,
    /// Largest step in `ln(r - r0)`.
    pub max_log_step: f64,
    pub match_point: MatchPoint,
    /// Bisection resolution, relative to `μ`.
    pub relative_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_points: 8000,
            decay_lengths: 40.0,
            min_epsilon: 1e-3,
            max_log_step: 4e-3,
            match_point: MatchPoint::OuterTurningPoint,
            relative_tolerance: 1e-13,
        }
    }
}

/// The radial equation in dimensionless form on a logarithmic grid.
struct RadialProblem {
    channel: RadialChannel,
    centrifugal: Centrifugal,
    a_mu: f64,
    a_v0: f64,
    q: f64,
    /// `ln s` at the first grid point, `s = (r - r0)/a`.
    t_start: f64,
    step: f64,
    n: usize,
}

impl RadialProblem {
    fn omega_sq(&self, e: f64) -> f64 {
        self.a_v0 * (self.a_v0 / self.q - 2.0 * e)
    }

    fn mass_term(&self, e: f64) -> f64 {
        let base = (self.a_mu - e) * (self.a_mu + e);
        match self.centrifugal {
            Centrifugal::Approximate => base + self.channel.shift(),
            Centrifugal::Exact => base,
        }
    }

    /// `a² W` at wall distance `s`.
    fn w(&self, s: f64, omega_sq: f64, mass: f64) -> f64 {
        let l2 = self.channel.centrifugal_strength();
        let centrifugal = match self.centrifugal {
            Centrifugal::Approximate => l2 * centrifugal_shape(s),
            Centrifugal::Exact => {
                let x = s + self.q.ln();
                l2 / (x * x)
            }
        };
        centrifugal + omega_sq / self.q * inverse_excess(s) + mass
    }

    /// Leading exponent and the next two series coefficients of the
    /// solution regular at the wall, `u = s^ν (1 + c1 s + c2 s²)`.
    fn frobenius(&self, omega_sq: f64, mass: f64) -> (f64, f64, f64) {
        let l2 = self.channel.centrifugal_strength();
        let b = omega_sq / self.q;
        let (nu, w0) = match self.centrifugal {
            Centrifugal::Approximate => (self.channel.lambda + 1.0, -l2 / 12.0 - 0.5 * b + mass),
            Centrifugal::Exact if self.q == 1.0 => (self.channel.lambda + 1.0, -0.5 * b + mass),
            Centrifugal::Exact => {
                let x0 = self.q.ln();
                (1.0, l2 / (x0 * x0) - 0.5 * b + mass)
            }
        };
        let c1 = b / (2.0 * nu);
        let c2 = (b * c1 + w0) / (2.0 * (2.0 * nu + 1.0));
        (nu, c1, c2)
    }
}

impl ShootingProblem for RadialProblem {
    fn profile(&self, e: f64) -> Result<Profile> {
        let omega_sq = self.omega_sq(e);
        let mass = self.mass_term(e);
        let kernel: Vec<f64> = (0..self.n)
            .map(|i| {
                let s = (self.t_start + i as f64 * self.step).exp();
                s * s * self.w(s, omega_sq, mass) + 0.25
            })
            .collect();
        let (nu, c1, c2) = self.frobenius(omega_sq, mass);
        let phi = |t: f64| {
            let s = t.exp();
            s.powf(nu - 0.5) * (1.0 + c1 * s + c2 * s * s)
        };
        Ok(Profile {
            kernel,
            step: self.step,
            start: [phi(self.t_start), phi(self.t_start + self.step)],
        })
    }
}

/// Eigenvalues of the radial equation in `[e_lo, e_hi]`.
///
/// The window is clipped below at `V0/(2q)`, where the coupling term turns
/// repulsive and no level can lie, and above where `ε̃` would drop under
/// `config.min_epsilon`.
pub fn eigen_solve(
    qn: &QuantumNumbers,
    p: &PotentialParams,
    e_lo: f64,
    e_hi: f64,
    centrifugal: Centrifugal,
    config: &OracleConfig,
) -> Result<Vec<OracleResult>> {
    qn.check_potential(p)?;
    let a = p.a();
    let channel = qn.radial_channel();
    let shift = match centrifugal {
        Centrifugal::Approximate => channel.shift(),
        Centrifugal::Exact => 0.0,
    };
    let a_mu = a * p.mu();
    let e_floor = a * p.v0() / (2.0 * p.q());
    let top_sq = a_mu * a_mu + shift - config.min_epsilon * config.min_epsilon;
    if top_sq <= 0.0 {
        return Ok(Vec::new());
    }
    let lo = (a * e_lo).max(e_floor);
    let hi = (a * e_hi).min(top_sq.sqrt());
    if !(lo < hi) {
        return Ok(Vec::new());
    }
    let mut problem = RadialProblem {
        channel,
        centrifugal,
        a_mu,
        a_v0: a * p.v0(),
        q: p.q(),
        t_start: 0.0,
        step: 0.0,
        n: 0,
    };
    let omega_top = problem.omega_sq(hi);
    let eps_top = problem.mass_term(hi).max(0.0).sqrt().max(config.min_epsilon);
    let b = (omega_top / p.q()).abs().max(problem.omega_sq(lo).abs() / p.q());
    let s_start = (1e-3 / (b + 1.0)).clamp(2e-6, 1e-5);
    let well = (1.0 + omega_top.abs() / (p.q() * eps_top * eps_top)).ln();
    let s_end = well + config.decay_lengths / eps_top + 5.0;
    let span = (s_end / s_start).ln();
    let n = config.n_points.max((span / config.max_log_step).ceil() as usize + 1);
    problem.t_start = s_start.ln();
    problem.step = span / (n - 1) as f64;
    problem.n = n;
    let settings = SolverSettings {
        match_point: config.match_point,
        energy_tolerance: config.relative_tolerance * a_mu,
    };
    Ok(find_levels(&problem, lo, hi, &settings)?
        .into_iter()
        .map(|r| OracleResult {
            energy: r.energy / a,
            ..r
        })
        .collect())
}

/// One row of the centrifugal-approximation report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxErrorRow {
    pub n_r: u32,
    /// Closed-form level of the approximated equation.
    pub e_closed: f64,
    /// Oracle level with the true `1/r²` centrifugal term.
    pub e_exact: f64,
    /// `e_exact - e_closed`.
    pub delta: f64,
}

/// Compare closed-form levels with the exact-centrifugal oracle, level by level.
///
/// Levels without an exact-centrifugal partner are left out.
pub fn approximation_error_report(
    qn: &QuantumNumbers,
    p: &PotentialParams,
    levels: &[EnergyState],
    config: &OracleConfig,
) -> Result<Vec<ApproxErrorRow>> {
    if levels.is_empty() {
        return Ok(Vec::new());
    }
    let exact = eigen_solve(qn, p, 0.0, p.mu(), Centrifugal::Exact, config)?;
    Ok(levels
        .iter()
        .filter_map(|level| {
            exact.iter().find(|x| x.n_r == level.n_r).map(|x| ApproxErrorRow {
                n_r: level.n_r,
                e_closed: level.energy,
                e_exact: x.energy,
                delta: x.energy - level.energy,
            })
        })
        .collect())
}

/// Run [`eigen_solve`] for several channels on the rayon pool, keeping order.
pub fn eigen_solve_many(
    channels: &[QuantumNumbers],
    p: &PotentialParams,
    centrifugal: Centrifugal,
    config: &OracleConfig,
) -> Vec<Result<Vec<OracleResult>>> {
    channels
        .par_iter()
        .map(|qn| eigen_solve(qn, p, 0.0, 2.0 * p.mu(), centrifugal, config))
        .collect()
}
