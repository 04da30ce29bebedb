//! Command-line front end.
//!
//! Every subcommand builds a [`RunConfig`] from an optional TOML file plus
//! flags (flags win), validates it, runs the computation on a bounded rayon
//! pool and renders one deterministic table set as CSV or JSON.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::greens::{coulomb_green_radial, pole_scan, radial_green_2nd_order, CoulombChannel, POLE_TOLERANCE};
use crate::oracle::{approximation_error_report, eigen_solve, Centrifugal, OracleConfig};
use crate::potential::{centrifugal_approx, rosen_morse_identity_residual};
use crate::spectrum::{linked_sign_gamma, RESIDUAL_TOLERANCE};
use crate::{
    bound_energies, coulomb_energies, standard_hulthen_energies, EnergyState, Error, PotentialParams,
    QuantumNumbers, Sign,
};

/// Version of the emitted table layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PHYSICS: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Agreement demanded by `--certify` and `selftest`, in units of `μ`.
pub const CERTIFY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "dirac-hulthen", version, about = "Dirac bound states in the deformed Hulthén potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form bound-state spectrum per channel.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Radial Green's function samples on an r-grid.
    Greens {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        opts: GreensArgs,
    },
    /// Error of the centrifugal approximant, pointwise and per level.
    ApproxError {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        opts: ApproxArgs,
    },
    /// Convergence of the q = 1 spectrum to the Dirac–Coulomb levels as a grows.
    CoulombLimit {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        opts: CoulombArgs,
    },
    /// Cross-check closed forms against the oracle and the Green's function poles.
    Selftest {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Deformation q >= 1.
    #[arg(long)]
    q: Option<f64>,
    /// Range a of the well.
    #[arg(long)]
    a: Option<f64>,
    /// Depth V0.
    #[arg(long)]
    v0: Option<f64>,
    /// Mass μ.
    #[arg(long)]
    mu: Option<f64>,
    /// Comma-separated κ values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    kappa: Vec<i32>,
    /// β̃ = ±1.
    #[arg(long, allow_negative_numbers = true)]
    beta_tilde: Option<i32>,
    /// Fix sign γ for every κ instead of deriving it from κ and β̃.
    #[arg(long, allow_negative_numbers = true)]
    sign_gamma: Option<i32>,
    /// Highest radial quantum number.
    #[arg(long)]
    nr_max: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check every closed-form level against the Numerov oracle.
    #[arg(long)]
    certify: bool,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct GreensArgs {
    /// Energy E, off every pole.
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r_points: Option<usize>,
    /// Use the point-Coulomb Green's function instead.
    #[arg(long)]
    coulomb: bool,
    /// Coulomb strength Ze²; defaults to a·V0.
    #[arg(long)]
    ze2: Option<f64>,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    /// Append the per-level shift caused by the approximation.
    #[arg(long)]
    levels: bool,
    /// Comma-separated q values to sweep.
    #[arg(long, value_delimiter = ',')]
    q_sweep: Vec<f64>,
    /// Smallest (r - r0)/a.
    #[arg(long)]
    r_min: Option<f64>,
    /// Largest (r - r0)/a.
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r_points: Option<usize>,
}

#[derive(Debug, Args)]
struct CoulombArgs {
    /// Comma-separated aμ values.
    #[arg(long, value_delimiter = ',')]
    a_ladder: Vec<f64>,
    /// Coulomb strength Ze²; defaults to a·V0.
    #[arg(long)]
    ze2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One requested partial wave. Without `sign_gamma` the sign follows from κ and β̃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub kappa: i32,
    pub beta_tilde: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_gamma: Option<Sign>,
}

impl ChannelSpec {
    pub fn sign(&self) -> Sign {
        self.sign_gamma
            .unwrap_or_else(|| linked_sign_gamma(self.kappa, self.beta_tilde))
    }

    pub fn quantum_numbers(&self, p: &PotentialParams) -> crate::Result<QuantumNumbers> {
        match self.sign_gamma {
            None => QuantumNumbers::channel(self.kappa, self.beta_tilde, p),
            Some(sign) => QuantumNumbers::radial(self.kappa, self.beta_tilde, sign, p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreensOptions {
    pub energy: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
    pub coulomb: bool,
    pub ze2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxOptions {
    pub levels: bool,
    pub q_sweep: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoulombOptions {
    pub a_ladder: Vec<f64>,
    pub ze2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandOptions {
    Spectrum,
    Greens(GreensOptions),
    ApproxError(ApproxOptions),
    CoulombLimit(CoulombOptions),
    Selftest,
}

/// A fully validated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: PotentialParams,
    pub channels: Vec<ChannelSpec>,
    pub n_r_max: u32,
    #[serde(skip)]
    pub format: OutputFormat,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub certify: bool,
    #[serde(skip)]
    pub threads: usize,
    #[serde(flatten)]
    pub options: CommandOptions,
}

/// Contents of a `--config` file. Every entry is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    q: Option<f64>,
    a: Option<f64>,
    v0: Option<f64>,
    mu: Option<f64>,
    kappa: Option<Vec<i32>>,
    beta_tilde: Option<i32>,
    sign_gamma: Option<i32>,
    channels: Option<Vec<ChannelSpec>>,
    nr_max: Option<u32>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
    certify: Option<bool>,
    threads: Option<usize>,
    #[serde(default)]
    greens: FileGreens,
    #[serde(default)]
    approx_error: FileApprox,
    #[serde(default)]
    coulomb_limit: FileCoulomb,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGreens {
    energy: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    r_points: Option<usize>,
    coulomb: Option<bool>,
    ze2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileApprox {
    levels: Option<bool>,
    q_sweep: Option<Vec<f64>>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    r_points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCoulomb {
    a_ladder: Option<Vec<f64>>,
    ze2: Option<f64>,
}

/// Failure of a run, already classified by exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("physics error: {0}")]
    Physics(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Physics(_) => EXIT_PHYSICS,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::QuantumNumbers(_) | Error::OutsideDomain { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Physics(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn field_error(field: &str, value: impl std::fmt::Display, reason: &str) -> CliError {
    usage(format!("field `{field}` = {value}: {reason}"))
}

fn sign_field(field: &str, value: i32) -> Result<Sign, CliError> {
    Sign::try_from(value).map_err(|_| field_error(field, value, "must be -1 or 1"))
}

fn positive(field: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(field_error(field, value, "must be positive"))
    }
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get()).min(8)
}

impl RunConfig {
    fn build(common: CommonArgs, options: impl FnOnce(&FileConfig, &PotentialParams) -> Result<CommandOptions, CliError>) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let mu = common.mu.or(file.mu).unwrap_or(1.0);
        let a = common.a.or(file.a).unwrap_or(50.0);
        let v0 = common.v0.or(file.v0).unwrap_or(0.016);
        let q = common.q.or(file.q).unwrap_or(1.0);
        let params = PotentialParams::new(mu, v0, a, q).map_err(|e| match e {
            Error::InvalidParameter { name, value, reason } => field_error(name, value, reason),
            other => CliError::from(other),
        })?;

        let flag_channels = !common.kappa.is_empty() || common.beta_tilde.is_some() || common.sign_gamma.is_some();
        let channels = match (&file.channels, flag_channels) {
            (Some(list), false) => list.clone(),
            _ => {
                let kappas = if common.kappa.is_empty() {
                    file.kappa.clone().unwrap_or_else(|| vec![-1, 1, -2, 2])
                } else {
                    common.kappa.clone()
                };
                let beta_tilde = sign_field("beta_tilde", common.beta_tilde.or(file.beta_tilde).unwrap_or(1))?;
                let sign_gamma = common
                    .sign_gamma
                    .or(file.sign_gamma)
                    .map(|s| sign_field("sign_gamma", s))
                    .transpose()?;
                kappas
                    .into_iter()
                    .map(|kappa| ChannelSpec {
                        kappa,
                        beta_tilde,
                        sign_gamma,
                    })
                    .collect()
            }
        };
        if channels.is_empty() {
            return Err(field_error("kappa", "[]", "at least one channel is needed"));
        }
        if let Some(bad) = channels.iter().find(|c| c.kappa == 0) {
            return Err(field_error("kappa", bad.kappa, "must be nonzero"));
        }
        let mut channels = channels;
        channels.sort_by_key(|c| (c.kappa, c.beta_tilde, c.sign_gamma));
        channels.dedup();

        let threads = common.threads.or(file.threads).unwrap_or_else(default_threads);
        if threads == 0 {
            return Err(field_error("threads", 0, "must be at least 1"));
        }
        let options = options(&file, &params)?;
        Ok(RunConfig {
            params,
            channels,
            n_r_max: common.nr_max.or(file.nr_max).unwrap_or(10),
            format: common.format.or(file.format).unwrap_or(OutputFormat::Csv),
            out: common.out.or(file.out),
            certify: common.certify || file.certify.unwrap_or(false),
            threads,
            options,
        })
    }
}

fn greens_options(opts: GreensArgs, file: &FileConfig, p: &PotentialParams) -> Result<CommandOptions, CliError> {
    let f = &file.greens;
    let energy = opts
        .energy
        .or(f.energy)
        .ok_or_else(|| usage("greens needs an energy (--energy or greens.energy)"))?;
    if !energy.is_finite() {
        return Err(field_error("energy", energy, "must be finite"));
    }
    let coulomb = opts.coulomb || f.coulomb.unwrap_or(false);
    let origin = if coulomb { 0.0 } else { p.singular_radius() };
    let r_min = opts.r_min.or(f.r_min).unwrap_or(origin + 0.1 * p.a());
    let r_max = opts.r_max.or(f.r_max).unwrap_or(origin + 4.0 * p.a());
    let r_points = opts.r_points.or(f.r_points).unwrap_or(5);
    if !(r_min > origin && r_min.is_finite()) {
        return Err(field_error("r_min", r_min, "must lie beyond the singular radius"));
    }
    if !(r_max >= r_min && r_max.is_finite()) {
        return Err(field_error("r_max", r_max, "must be finite and at least r_min"));
    }
    if r_points == 0 {
        return Err(field_error("r_points", 0, "must be at least 1"));
    }
    let ze2 = opts.ze2.or(f.ze2).unwrap_or(p.a() * p.v0());
    if !(ze2.is_finite() && ze2 >= 0.0) {
        return Err(field_error("ze2", ze2, "must be finite and non-negative"));
    }
    Ok(CommandOptions::Greens(GreensOptions {
        energy,
        r_min,
        r_max,
        r_points,
        coulomb,
        ze2,
    }))
}

fn approx_options(opts: ApproxArgs, file: &FileConfig, p: &PotentialParams) -> Result<CommandOptions, CliError> {
    let f = &file.approx_error;
    let mut q_sweep = if opts.q_sweep.is_empty() {
        f.q_sweep.clone().unwrap_or_else(|| vec![p.q()])
    } else {
        opts.q_sweep
    };
    if let Some(bad) = q_sweep.iter().find(|q| !(q.is_finite() && **q >= 1.0)) {
        return Err(field_error("q_sweep", bad, "every q must be at least 1"));
    }
    q_sweep.sort_by(f64::total_cmp);
    q_sweep.dedup();
    let r_min = positive("r_min", opts.r_min.or(f.r_min).unwrap_or(1e-3))?;
    let r_max = positive("r_max", opts.r_max.or(f.r_max).unwrap_or(1.0))?;
    if r_max < r_min {
        return Err(field_error("r_max", r_max, "must be at least r_min"));
    }
    let r_points = opts.r_points.or(f.r_points).unwrap_or(31);
    if r_points == 0 {
        return Err(field_error("r_points", 0, "must be at least 1"));
    }
    Ok(CommandOptions::ApproxError(ApproxOptions {
        levels: opts.levels || f.levels.unwrap_or(false),
        q_sweep,
        r_min,
        r_max,
        r_points,
    }))
}

fn coulomb_options(opts: CoulombArgs, file: &FileConfig, p: &PotentialParams) -> Result<CommandOptions, CliError> {
    let f = &file.coulomb_limit;
    if p.q() != 1.0 {
        return Err(field_error("q", p.q(), "the Coulomb limit is taken at q = 1"));
    }
    let mut a_ladder = if opts.a_ladder.is_empty() {
        f.a_ladder.clone().unwrap_or_else(|| vec![1e2, 1e3, 1e4])
    } else {
        opts.a_ladder
    };
    for &a_mu in &a_ladder {
        positive("a_ladder", a_mu)?;
    }
    a_ladder.sort_by(f64::total_cmp);
    a_ladder.dedup();
    let ze2 = opts.ze2.or(f.ze2).unwrap_or(p.a() * p.v0());
    if !(ze2.is_finite() && ze2 >= 0.0) {
        return Err(field_error("ze2", ze2, "must be finite and non-negative"));
    }
    Ok(CommandOptions::CoulombLimit(CoulombOptions { a_ladder, ze2 }))
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(&'static str),
    Empty,
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Sign> for Cell {
    fn from(s: Sign) -> Self {
        Cell::Int(s.value() as i64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => (*s).to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(i) => (*i).into(),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(serde_json::Value::Null, Into::into),
            Cell::Text(s) => (*s).into(),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }
}

/// Output of one run; `failure` is set when the tables were produced but a check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub failure: Option<String>,
}

impl Report {
    fn single(table: Table) -> Self {
        Report {
            tables: vec![table],
            failure: None,
        }
    }
}

fn command_name(options: &CommandOptions) -> &'static str {
    match options {
        CommandOptions::Spectrum => "spectrum",
        CommandOptions::Greens(_) => "greens",
        CommandOptions::ApproxError(_) => "approx-error",
        CommandOptions::CoulombLimit(_) => "coulomb-limit",
        CommandOptions::Selftest => "selftest",
    }
}

/// Render a report in the configured format.
pub fn render(config: &RunConfig, report: &Report) -> String {
    let echo = serde_json::to_value(config).expect("config serializes");
    match config.format {
        OutputFormat::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# dirac-hulthen schema_version={SCHEMA_VERSION} command={}", command_name(&config.options));
            let _ = writeln!(out, "# params {echo}");
            let named = report.tables.len() > 1;
            for (i, table) in report.tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                if named {
                    let _ = writeln!(out, "# table {}", table.name);
                }
                out.push_str(&table.columns.join(","));
                out.push('\n');
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            out
        }
        OutputFormat::Json => {
            let named = report.tables.len() > 1;
            let rows: Vec<serde_json::Value> = report
                .tables
                .iter()
                .flat_map(|table| {
                    table.rows.iter().map(move |row| {
                        let mut object = serde_json::Map::new();
                        if named {
                            object.insert("table".into(), table.name.into());
                        }
                        for (column, cell) in table.columns.iter().zip(row) {
                            object.insert((*column).into(), cell.json());
                        }
                        serde_json::Value::Object(object)
                    })
                })
                .collect();
            let document = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "params": echo,
                "rows": rows,
            });
            let mut text = serde_json::to_string_pretty(&document).expect("json renders");
            text.push('\n');
            text
        }
    }
}

/// Closed-form levels; the `q = 1` well uses its own formula.
fn levels(qn: &QuantumNumbers, p: &PotentialParams, n_r_max: u32) -> crate::Result<Vec<EnergyState>> {
    let levels = if p.q() == 1.0 {
        standard_hulthen_energies(qn, p, n_r_max)?
    } else {
        bound_energies(qn, p, n_r_max)?
    };
    Ok(levels.into_iter().filter(|l| l.residual <= RESIDUAL_TOLERANCE).collect())
}

fn channel_cells(spec: &ChannelSpec, qn: &QuantumNumbers) -> [Cell; 3] {
    [spec.kappa.into(), spec.beta_tilde.into(), qn.sign_gamma().into()]
}

fn quantum_numbers(config: &RunConfig, p: &PotentialParams) -> Result<Vec<QuantumNumbers>, CliError> {
    config
        .channels
        .iter()
        .map(|spec| spec.quantum_numbers(p).map_err(CliError::from))
        .collect()
}

fn oracle_levels(qn: &QuantumNumbers, p: &PotentialParams) -> crate::Result<Vec<f64>> {
    Ok(eigen_solve(qn, p, 0.0, 2.0 * p.mu(), Centrifugal::Approximate, &OracleConfig::default())?
        .into_iter()
        .map(|r| r.energy)
        .collect())
}

/// Compare closed-form and oracle levels; `Err` describes the first disagreement.
fn certify_levels(closed: &[EnergyState], oracle: &[f64], n_r_max: u32, mu: f64) -> Result<f64, String> {
    let oracle: Vec<f64> = oracle.iter().copied().take(n_r_max as usize + 1).collect();
    if closed.len() != oracle.len() {
        return Err(format!("closed form has {} levels, oracle {}", closed.len(), oracle.len()));
    }
    let mut worst = 0.0f64;
    for (level, e) in closed.iter().zip(&oracle) {
        let delta = (level.energy - e).abs() / mu;
        if !(delta <= CERTIFY_TOLERANCE) {
            return Err(format!("n_r = {}: |dE|/mu = {delta:.3e}", level.n_r));
        }
        worst = worst.max(delta);
    }
    Ok(worst)
}

fn cmd_spectrum(config: &RunConfig) -> Result<Report, CliError> {
    let p = &config.params;
    let qns = quantum_numbers(config, p)?;
    let results: Vec<crate::Result<(Vec<EnergyState>, Option<Vec<f64>>)>> = qns
        .par_iter()
        .map(|qn| {
            let closed = levels(qn, p, config.n_r_max)?;
            let oracle = if config.certify { Some(oracle_levels(qn, p)?) } else { None };
            Ok((closed, oracle))
        })
        .collect();
    let mut columns = vec!["kappa", "beta_tilde", "sign_gamma", "n_r", "energy", "epsilon_tilde", "omega_sq", "residual"];
    if config.certify {
        columns.extend(["oracle_energy", "oracle_delta"]);
    }
    let mut table = Table::new("spectrum", &columns);
    let mut failure = None;
    for ((spec, qn), result) in config.channels.iter().zip(&qns).zip(results) {
        let (closed, oracle) = result?;
        if let Some(oracle) = &oracle {
            if let Err(msg) = certify_levels(&closed, oracle, config.n_r_max, p.mu()) {
                failure.get_or_insert(format!("certification failed for kappa = {}: {msg}", spec.kappa));
            }
        }
        for level in &closed {
            let mut row: Vec<Cell> = channel_cells(spec, qn).into();
            row.extend([
                level.n_r.into(),
                level.energy.into(),
                level.epsilon_tilde.into(),
                level.omega_sq.into(),
                level.residual.into(),
            ]);
            if let Some(oracle) = &oracle {
                let e = oracle.get(level.n_r as usize).copied();
                row.push(e.into());
                row.push(e.map(|e| e - level.energy).into());
            }
            table.rows.push(row);
        }
    }
    Ok(Report {
        tables: vec![table],
        failure,
    })
}

fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn at_pole(kappa: i32, energy: f64, n_r: u32, pole: Option<f64>) -> CliError {
    let pole = pole.map_or_else(|| "unknown".to_string(), |e| format!("{e:.16e}"));
    CliError::Physics(format!(
        "E = {energy:.16e} lies within {POLE_TOLERANCE:e} of a pole (kappa = {kappa}, n_r = {n_r}); nearest pole at E = {pole}"
    ))
}

fn nearest(energy: f64, poles: impl IntoIterator<Item = (u32, f64)>) -> Option<(u32, f64)> {
    poles
        .into_iter()
        .min_by(|x, y| (x.1 - energy).abs().total_cmp(&(y.1 - energy).abs()))
}

fn cmd_greens(config: &RunConfig, opts: &GreensOptions) -> Result<Report, CliError> {
    let p = &config.params;
    let grid = linear_grid(opts.r_min, opts.r_max, opts.r_points);
    let pairs: Vec<(f64, f64)> = grid.iter().flat_map(|&x| grid.iter().map(move |&y| (x, y))).collect();
    let e = opts.energy;
    let tolerance = POLE_TOLERANCE * p.mu();
    if opts.coulomb {
        let mut table = Table::new("greens", &["kappa", "sign_gamma", "r_pp", "r_p", "energy", "green"]);
        for spec in &config.channels {
            let sign = spec.sign();
            let coulomb = coulomb_energies(spec.kappa, sign, opts.ze2, p.mu(), config.n_r_max.max(64))?;
            let pole = nearest(e, coulomb.iter().enumerate().map(|(n, &x)| (n as u32, x)));
            let channel = CoulombChannel::new(spec.kappa, sign, opts.ze2, e, p.mu())?;
            if let Some((n_r, x)) = pole.filter(|(_, x)| (x - e).abs() <= tolerance) {
                return Err(at_pole(spec.kappa, e, n_r, Some(x)));
            }
            let values: Vec<crate::Result<f64>> = pairs
                .par_iter()
                .map(|&(x, y)| coulomb_green_radial(x, y, &channel))
                .collect();
            for (&(x, y), value) in pairs.iter().zip(values) {
                let value = value.map_err(|err| match err {
                    Error::AtPole { n_r, .. } => at_pole(spec.kappa, e, n_r, coulomb.get(n_r as usize).copied()),
                    other => other.into(),
                })?;
                table.rows.push(vec![spec.kappa.into(), sign.into(), x.into(), y.into(), e.into(), value.into()]);
            }
        }
        return Ok(Report::single(table));
    }
    let mut table = Table::new(
        "greens",
        &["kappa", "beta_tilde", "sign_gamma", "r_pp", "r_p", "energy", "green_re", "green_im"],
    );
    for (spec, qn) in config.channels.iter().zip(quantum_numbers(config, p)?) {
        let poles = levels(&qn, p, config.n_r_max.max(64))?;
        if let Some((n_r, x)) = nearest(e, poles.iter().map(|l| (l.n_r, l.energy))).filter(|(_, x)| (x - e).abs() <= tolerance) {
            return Err(at_pole(spec.kappa, e, n_r, Some(x)));
        }
        let values: Vec<crate::Result<_>> = pairs
            .par_iter()
            .map(|&(x, y)| radial_green_2nd_order(x, y, e, &qn, p))
            .collect();
        for (&(x, y), value) in pairs.iter().zip(values) {
            let value = value.map_err(|err| match err {
                Error::AtPole { n_r, .. } => {
                    at_pole(spec.kappa, e, n_r, poles.iter().find(|l| l.n_r == n_r).map(|l| l.energy))
                }
                other => other.into(),
            })?;
            let mut row: Vec<Cell> = channel_cells(spec, &qn).into();
            row.extend([x.into(), y.into(), e.into(), value.value.re.into(), value.value.im.into()]);
            table.rows.push(row);
        }
    }
    Ok(Report::single(table))
}

fn with_q(p: &PotentialParams, q: f64) -> Result<PotentialParams, CliError> {
    PotentialParams::new(p.mu(), p.v0(), p.a(), q).map_err(CliError::from)
}

fn cmd_approx_error(config: &RunConfig, opts: &ApproxOptions) -> Result<Report, CliError> {
    let p = &config.params;
    let mut pointwise = Table::new("pointwise", &["q", "x", "exact", "approx", "rel_error"]);
    for &q in &opts.q_sweep {
        let pq = with_q(p, q)?;
        for x in log_grid(opts.r_min, opts.r_max, opts.r_points) {
            let r = pq.singular_radius() + x * pq.a();
            let exact = 1.0 / (x * pq.a()).powi(2);
            let approx = centrifugal_approx(r, &pq)?;
            pointwise
                .rows
                .push(vec![q.into(), x.into(), exact.into(), approx.into(), ((approx - exact) / exact).into()]);
        }
    }
    let mut report = Report::single(pointwise);
    if !opts.levels {
        return Ok(report);
    }
    let mut jobs = Vec::new();
    for &q in &opts.q_sweep {
        let pq = with_q(p, q)?;
        for spec in &config.channels {
            jobs.push((q, pq, *spec, spec.quantum_numbers(&pq)?));
        }
    }
    let rows: Vec<crate::Result<_>> = jobs
        .par_iter()
        .map(|(_, pq, _, qn)| {
            let closed = levels(qn, pq, config.n_r_max)?;
            approximation_error_report(qn, pq, &closed, &OracleConfig::default())
        })
        .collect();
    let mut table = Table::new(
        "levels",
        &["q", "kappa", "beta_tilde", "sign_gamma", "n_r", "e_closed", "e_exact", "delta"],
    );
    for ((q, _, spec, qn), result) in jobs.iter().zip(rows) {
        for row in result? {
            let mut cells: Vec<Cell> = vec![(*q).into()];
            cells.extend(channel_cells(spec, qn));
            cells.extend([row.n_r.into(), row.e_closed.into(), row.e_exact.into(), row.delta.into()]);
            table.rows.push(cells);
        }
    }
    report.tables.push(table);
    Ok(report)
}

fn cmd_coulomb_limit(config: &RunConfig, opts: &CoulombOptions) -> Result<Report, CliError> {
    let p = &config.params;
    let mu = p.mu();
    let mut jobs = Vec::new();
    for spec in &config.channels {
        let coulomb = coulomb_energies(spec.kappa, spec.sign(), opts.ze2, mu, config.n_r_max)?;
        for &a_mu in &opts.a_ladder {
            let a = a_mu / mu;
            let hulthen = if opts.ze2 > 0.0 {
                let pa = PotentialParams::new(mu, opts.ze2 / a, a, 1.0)?;
                Some((pa, spec.quantum_numbers(&pa)?))
            } else {
                None
            };
            jobs.push((*spec, a_mu, coulomb.clone(), hulthen));
        }
    }
    let results: Vec<crate::Result<Vec<EnergyState>>> = jobs
        .par_iter()
        .map(|(_, _, _, hulthen)| match hulthen {
            Some((pa, qn)) => levels(qn, pa, config.n_r_max),
            None => Ok(Vec::new()),
        })
        .collect();
    let mut rows = Vec::new();
    for ((spec, a_mu, coulomb, _), result) in jobs.iter().zip(results) {
        let hulthen = result?;
        for (n_r, &e_coulomb) in coulomb.iter().enumerate() {
            let e = hulthen.iter().find(|l| l.n_r as usize == n_r).map(|l| l.energy);
            let deviation = e.map(|e| (e - e_coulomb).abs() / e_coulomb);
            rows.push((
                (spec.kappa, spec.beta_tilde, n_r, a_mu.to_bits()),
                vec![
                    spec.kappa.into(),
                    spec.beta_tilde.into(),
                    spec.sign().into(),
                    (n_r as u32).into(),
                    (*a_mu).into(),
                    e_coulomb.into(),
                    e.into(),
                    deviation.into(),
                ],
            ));
        }
    }
    rows.sort_by(|x, y| x.0.cmp(&y.0));
    let mut table = Table::new(
        "coulomb_limit",
        &["kappa", "beta_tilde", "sign_gamma", "n_r", "a_mu", "energy_coulomb", "energy_hulthen", "rel_deviation"],
    );
    table.rows = rows.into_iter().map(|(_, row)| row).collect();
    Ok(Report::single(table))
}

fn cmd_selftest(config: &RunConfig) -> Result<Report, CliError> {
    let p = &config.params;
    let qns = quantum_numbers(config, p)?;
    let checks: Vec<crate::Result<[(&'static str, f64, f64); 3]>> = qns
        .par_iter()
        .map(|qn| {
            let closed = levels(qn, p, config.n_r_max)?;
            let oracle = oracle_levels(qn, p)?;
            let oracle_delta = certify_levels(&closed, &oracle, config.n_r_max, p.mu()).unwrap_or(f64::INFINITY);

            let (lo, hi) = crate::greens::bound_window(qn, p);
            let poles = pole_scan(lo, hi, 4000, qn, p)?;
            let pole_delta = if poles.len() < closed.len() {
                f64::INFINITY
            } else {
                closed
                    .iter()
                    .zip(&poles)
                    .map(|(l, pole)| (l.energy - pole.energy).abs() / p.mu())
                    .fold(0.0, f64::max)
            };

            let channel = qn.radial_channel();
            let mut identity = 0.0f64;
            for level in &closed {
                for xi in [-p.a(), 0.0, p.a()] {
                    identity = identity.max(rosen_morse_identity_residual(xi, level.energy, &channel, p)?);
                }
            }
            Ok([
                ("closed_vs_oracle", oracle_delta, CERTIFY_TOLERANCE),
                ("pole_vs_level", pole_delta, 1e-9),
                ("rosen_morse_identity", identity, 1e-10),
            ])
        })
        .collect();
    let mut table = Table::new(
        "selftest",
        &["check", "kappa", "beta_tilde", "sign_gamma", "value", "tolerance", "pass"],
    );
    let mut failed = Vec::new();
    for ((spec, qn), result) in config.channels.iter().zip(&qns).zip(checks) {
        for (name, value, tolerance) in result? {
            let pass = value <= tolerance;
            if !pass {
                failed.push(format!("{name} (kappa = {})", spec.kappa));
            }
            let mut row = vec![Cell::Text(name)];
            row.extend(channel_cells(spec, qn));
            row.extend([value.into(), tolerance.into(), Cell::Int(pass as i64)]);
            table.rows.push(row);
        }
    }
    Ok(Report {
        tables: vec![table],
        failure: (!failed.is_empty()).then(|| format!("selftest failed: {}", failed.join(", "))),
    })
}

/// Run the configured command.
pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| match &config.options {
        CommandOptions::Spectrum => cmd_spectrum(config),
        CommandOptions::Greens(opts) => cmd_greens(config, opts),
        CommandOptions::ApproxError(opts) => cmd_approx_error(config, opts),
        CommandOptions::CoulombLimit(opts) => cmd_coulomb_limit(config, opts),
        CommandOptions::Selftest => cmd_selftest(config),
    })
}

/// Parse command-line arguments into a validated [`RunConfig`].
pub fn parse<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| usage(e.to_string()))?;
    config_from(cli)
}

fn config_from(cli: Cli) -> Result<RunConfig, CliError> {
    match cli.command {
        Command::Spectrum { common } => RunConfig::build(common, |_, _| Ok(CommandOptions::Spectrum)),
        Command::Greens { common, opts } => RunConfig::build(common, |f, p| greens_options(opts, f, p)),
        Command::ApproxError { common, opts } => RunConfig::build(common, |f, p| approx_options(opts, f, p)),
        Command::CoulombLimit { common, opts } => RunConfig::build(common, |f, p| coulomb_options(opts, f, p)),
        Command::Selftest { common } => RunConfig::build(common, |_, _| Ok(CommandOptions::Selftest)),
    }
}

/// Full CLI pipeline; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            } else {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            };
        }
    };
    let outcome = config_from(cli).and_then(|config| {
        let report = execute(&config)?;
        let text = render(&config, &report);
        match &config.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
            None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
        }
        match report.failure {
            Some(msg) => Err(CliError::Physics(msg)),
            None => Ok(()),
        }
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "dirac-hulthen: {e}");
            e.exit_code()
        }
    }
}
