//! Command-line driver: tip constants, parameter sweeps, ratio curves and
//! inclusion sign maps, written as self-describing CSV or JSON.

mod config;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use softcrack::{sigma0, MaterialFamily, PerturbationProblem};

use config::{Resolved, RunConfig, DEFAULT_INCLUSION, POINT_LOAD, SMOOTH_LOAD};
use output::{num, Format, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(softcrack::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl From<softcrack::Error> for CliError {
    fn from(e: softcrack::Error) -> Self {
        match e {
            softcrack::Error::Geometry(msg) => CliError::Config(format!("geometry: {msg}")),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "softcrack", version, about = "Crack-tip constants on a soft imperfect interface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; omitted sections take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct Range {
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 9)]
    points: usize,
    /// Space the grid logarithmically.
    #[arg(long)]
    log: bool,
}

#[derive(Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum Axis {
    #[value(name = "kappa_star", alias = "kappa-star")]
    KappaStar,
    #[value(name = "mu_star", alias = "mu-star")]
    MuStar,
}

#[derive(Subcommand)]
enum Command {
    /// Tip constant for one configuration, plus the inclusion correction if one is configured.
    Sigma0 {
        #[command(flatten)]
        common: Common,
    },
    /// Tip constant along a κ* or μ* grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: Axis,
        #[command(flatten)]
        range: Range,
    },
    /// Ratio of imperfect- to perfect-interface constants for two contrasts, along κ*.
    Ratio {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu_star_1: f64,
        /// Defaults to the configured material's contrast.
        #[arg(long, allow_negative_numbers = true)]
        mu_star_2: Option<f64>,
    },
    /// Sign of the inclusion correction over inclusion position and orientation.
    Map {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 60)]
        phi_steps: usize,
        #[arg(long, default_value_t = 60)]
        alpha_steps: usize,
        /// Also write the sign grid as a greyscale PGM image.
        #[arg(long)]
        pgm: Option<PathBuf>,
    },
}

impl Range {
    fn grid(&self) -> Result<Vec<f64>, CliError> {
        let bad = |msg: &str| Err(CliError::Config(format!("range: {msg}")));
        if self.points == 0 {
            return bad("--points must be at least 1");
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return bad("--from and --to must be finite");
        }
        if self.points > 1 && self.from >= self.to {
            return bad("--from must be below --to");
        }
        if self.log && self.from <= 0.0 {
            return bad("a log grid needs --from > 0");
        }
        let n = self.points;
        Ok((0..n)
            .map(|k| {
                let t = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                if k + 1 == n && n > 1 {
                    self.to
                } else if self.log {
                    self.from * (self.to / self.from).powf(t)
                } else {
                    self.from + (self.to - self.from) * t
                }
            })
            .collect())
    }
}

fn meta(command: &str, r: &Resolved, extra: serde_json::Value) -> serde_json::Value {
    let mut m = json!({ "command": command, "version": env!("CARGO_PKG_VERSION"), "config": r });
    if let (Some(obj), serde_json::Value::Object(more)) = (m.as_object_mut(), extra) {
        obj.extend(more);
    }
    m
}

fn run_sigma0(common: &Common) -> Result<(), CliError> {
    let r = RunConfig::load(common.config.as_deref())?.resolve(POINT_LOAD, None)?;
    let s = sigma0(&r.crack_load, &r.bimaterial, &r.numerics)?;
    let mut result = json!({
        "sigma0": s.sigma0,
        "est_error": s.est_error,
        "mu0": r.bimaterial.mu0(),
        "mu_star": r.mu_star(),
        "kappa_star": r.kappa_star(),
    });
    if let Some(inc) = r.inclusion_spec {
        let p = PerturbationProblem::new(&r.crack_load, &r.bimaterial, &r.numerics)?.delta_sigma0(&inc)?;
        result["perturbation"] = serde_json::to_value(p).map_err(|e| CliError::Output(e.to_string()))?;
    }
    match common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut doc = result;
            doc["config"] = serde_json::to_value(&r).map_err(|e| CliError::Output(e.to_string()))?;
            output::write_json(common.out.as_deref(), &doc)
        }
        Format::Csv => {
            let mut t = Table::new(meta("sigma0", &r, json!({})), &["sigma0", "est_error", "mu0", "mu_star", "kappa_star"]);
            t.push(vec![num(s.sigma0), num(s.est_error), num(r.bimaterial.mu0()), num(r.mu_star()), num(r.kappa_star())]);
            t.write(common.out.as_deref(), Format::Csv)
        }
    }
}

fn run_sweep(common: &Common, axis: Axis, range: &Range) -> Result<(), CliError> {
    let r = RunConfig::load(common.config.as_deref())?.resolve(POINT_LOAD, None)?;
    let grid = range.grid()?;
    let b = match r.load.b {
        Some(b) => num(b),
        None => String::new(),
    };
    let materials = grid
        .iter()
        .map(|&v| {
            let (mu_star, kappa_star) = match axis {
                Axis::KappaStar => (r.mu_star(), v),
                Axis::MuStar => (v, r.kappa_star()),
            };
            r.with_groups(mu_star, kappa_star)
                .map(|m| (mu_star, kappa_star, m))
                .map_err(|e| CliError::Config(format!("range: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = meta("sweep", &r, json!({ "axis": axis, "from": range.from, "to": range.to, "points": range.points, "log": range.log }));
    let mut t = Table::new(m, &["kappa_star", "mu_star", "b", "sigma0", "est_error"]);
    for (mu_star, kappa_star, mat) in materials {
        let s = sigma0(&r.crack_load, &mat, &r.numerics)?;
        t.push(vec![num(kappa_star), num(mu_star), b.clone(), num(s.sigma0), num(s.est_error)]);
    }
    t.write(common.out.as_deref(), common.format.unwrap_or(Format::Csv))
}

fn family(mu_star: f64, sum: f64, flag: &str) -> Result<MaterialFamily, CliError> {
    if !(mu_star > -1.0 && mu_star < 1.0) {
        return Err(CliError::Config(format!("{flag} must lie in (-1, 1), got {mu_star}")));
    }
    Ok(MaterialFamily { mu_star, modulus_sum: sum })
}

fn run_ratio(common: &Common, range: &Range, mu_star_1: f64, mu_star_2: Option<f64>) -> Result<(), CliError> {
    let r = RunConfig::load(common.config.as_deref())?.resolve(POINT_LOAD, None)?;
    let grid = range.grid()?;
    if grid[0] <= 0.0 {
        return Err(CliError::Config("range: kappa_star must be positive".into()));
    }
    let f1 = family(mu_star_1, r.modulus_sum(), "--mu-star-1")?;
    let f2 = family(mu_star_2.unwrap_or(r.mu_star()), r.modulus_sum(), "--mu-star-2")?;
    let m = meta(
        "ratio",
        &r,
        json!({ "mu_star_1": f1.mu_star, "mu_star_2": f2.mu_star, "from": range.from, "to": range.to, "points": range.points, "log": range.log }),
    );
    let mut t = Table::new(m, &["kappa_star", "r"]);
    for k in grid {
        let ratio = softcrack::ratio_r(k, &f1, &f2, &r.crack_load, &r.numerics)?;
        t.push(vec![num(k), num(ratio)]);
    }
    t.write(common.out.as_deref(), common.format.unwrap_or(Format::Csv))
}

/// `φ` from 5° to 175° inclusive, `α` over `[0°, 180°)`.
fn map_grids(phi_steps: usize, alpha_steps: usize) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    if phi_steps == 0 || alpha_steps == 0 {
        return Err(CliError::Config("--phi-steps and --alpha-steps must be at least 1".into()));
    }
    let phis = (0..phi_steps)
        .map(|k| if phi_steps == 1 { 90.0 } else { 5.0 + 170.0 * k as f64 / (phi_steps - 1) as f64 })
        .collect();
    let alphas = (0..alpha_steps).map(|k| 180.0 * k as f64 / alpha_steps as f64).collect();
    Ok((phis, alphas))
}

fn run_map(common: &Common, phi_steps: usize, alpha_steps: usize, pgm: Option<&std::path::Path>) -> Result<(), CliError> {
    let r = RunConfig::load(common.config.as_deref())?.resolve(SMOOTH_LOAD, Some(DEFAULT_INCLUSION))?;
    let template = r.inclusion_spec.expect("map always resolves an inclusion");
    let (phis, alphas) = map_grids(phi_steps, alpha_steps)?;
    let rad = |v: &[f64]| v.iter().map(|d| d * PI / 180.0).collect::<Vec<_>>();
    let p = PerturbationProblem::new(&r.crack_load, &r.bimaterial, &r.numerics)?;
    let grid = p.sign_map(&template, &rad(&phis), &rad(&alphas))?;
    let m = meta("map", &r, json!({ "phi_steps": phi_steps, "alpha_steps": alpha_steps, "sigma0": p.sigma0() }));
    let mut t = Table::new(m, &["phi_deg", "alpha_deg", "delta_sigma0", "sign"]);
    for (phi, row) in phis.iter().zip(&grid) {
        for (alpha, cell) in alphas.iter().zip(row) {
            t.push(vec![num(*phi), num(*alpha), num(cell.delta_sigma0), cell.sign.as_str().to_string()]);
        }
    }
    if let Some(path) = pgm {
        output::write_pgm(path, &grid)?;
    }
    t.write(common.out.as_deref(), common.format.unwrap_or(Format::Csv))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sigma0 { common } => run_sigma0(common),
        Command::Sweep { common, axis, range } => run_sweep(common, *axis, range),
        Command::Ratio { common, range, mu_star_1, mu_star_2 } => run_ratio(common, range, *mu_star_1, *mu_star_2),
        Command::Map { common, phi_steps, alpha_steps, pgm } => run_map(common, *phi_steps, *alpha_steps, pgm.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("softcrack: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
