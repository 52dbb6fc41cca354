//! `qrf`: verification suites and Monte Carlo experiments for internal
//! quantum reference frames.
//!
//! Exit status: 0 when every check passes, 1 when a physics or property
//! check fails, 2 on configuration or scenario-construction errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrf_core::scenario::{AnyScenario, ScenarioConfig, ScenarioType, Tolerances};

use crate::output::{write_outcome, Format, Outcome};

#[derive(Parser, Debug)]
#[command(name = "qrf", version, about = "Conditional asymmetry of internal quantum reference frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Uniformity identities, isometry/covariance/partial-trace oracles and seed (in)dependence.
    Verify(Common),
    /// Closed-form physical uniformity against its Monte Carlo estimate.
    Average(Common),
    /// Monte Carlo `U_p` averages over a grid of exponents, per coherent-state system.
    SweepP {
        #[command(flatten)]
        common: Common,
        /// Comma-separated list, or `start:stop:step`.
        #[arg(long)]
        p_grid: Option<String>,
    },
    /// Survival-fidelity curves and speed-limit bounds for the clock.
    Clock {
        #[command(flatten)]
        common: Common,
        /// Number of points on the time grid over one period.
        #[arg(long, default_value_t = 20)]
        times: usize,
    },
    /// Fraction of states whose asymmetry deviates from the mean, against the concentration bound.
    Typicality {
        #[command(flatten)]
        common: Common,
        /// Comma-separated deviations, in bits.
        #[arg(long)]
        epsilons: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    S3,
    #[value(name = "u1_clock")]
    U1Clock,
    Su2,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, conflicts_with = "config")]
    preset: Option<Preset>,
    /// Scenario configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long = "J")]
    j: Option<f64>,
    /// Master seed for the random streams.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Tolerance override, `name=value`; repeatable.
    #[arg(long = "tol")]
    tol: Vec<String>,
    /// Coherent-state seed as JSON `[[re, im], ...]` in the block basis.
    #[arg(long)]
    seed_vector: Option<PathBuf>,
}

pub struct RunConfig {
    pub config: ScenarioConfig,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
}

fn config_error(message: impl std::fmt::Display) -> String {
    format!("configuration error: {message}")
}

impl Common {
    fn resolve(&self, default_samples: usize) -> Result<RunConfig, String> {
        let mut config = match (&self.config, self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
                ScenarioConfig::from_json(&text).map_err(config_error)?
            }
            (None, Some(preset)) => ScenarioConfig::preset(match preset {
                Preset::S3 => ScenarioType::S3,
                Preset::U1Clock => ScenarioType::U1Clock,
                Preset::Su2 => ScenarioType::Su2,
            }),
            (None, None) => return Err(config_error("one of --preset or --config is required")),
        };
        if self.k.is_some() {
            config.k = self.k;
        }
        if self.j.is_some() {
            config.j = self.j;
        }
        if let Some(path) = &self.seed_vector {
            let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
            let pairs: Vec<[f64; 2]> = serde_json::from_str(&text).map_err(config_error)?;
            config.seed = Some(pairs);
        }
        let mut tolerances = config.tolerances().map_err(config_error)?;
        for assignment in &self.tol {
            tolerances.apply(assignment).map_err(config_error)?;
        }
        let mc = config.mc.clone();
        let seed = self.seed.or(mc.as_ref().and_then(|m| m.seed)).unwrap_or(0);
        let samples = self.samples.or(mc.as_ref().and_then(|m| m.n_samples)).unwrap_or(default_samples);
        Ok(RunConfig { config, seed, samples, tolerances })
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, String> {
    if let Some((start, rest)) = text.split_once(':') {
        let (stop, step) = rest
            .split_once(':')
            .ok_or_else(|| config_error(format!("{what}: expected start:stop:step")))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| config_error(format!("{what}: bad number {s}")));
        let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
        if !(step > 0.0) || stop < start {
            return Err(config_error(format!("{what}: empty range")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| config_error(format!("{what}: bad number {s}"))))
        .collect()
}

fn run(cli: Cli) -> Result<(Outcome, Common), String> {
    let build = |run: &RunConfig| -> Result<AnyScenario, String> {
        run.config.build().map_err(|e| format!("scenario construction failed: {e}"))
    };
    let physics = |e: qrf_core::Error| format!("computation failed: {e}");
    match cli.command {
        Command::Verify(common) => {
            let run = common.resolve(200)?;
            let scenario = build(&run)?;
            Ok((commands::verify(&scenario, &run).map_err(physics)?, common))
        }
        Command::Average(common) => {
            let run = common.resolve(10_000)?;
            let scenario = build(&run)?;
            Ok((commands::average(&scenario, &run).map_err(physics)?, common))
        }
        Command::SweepP { common, p_grid } => {
            let run = common.resolve(10_000)?;
            let ps = match p_grid {
                Some(text) => parse_list(&text, "--p-grid")?,
                None => parse_list("0.5:6:0.25", "--p-grid")?,
            };
            let scenario = build(&run)?;
            Ok((commands::sweep_p(&scenario, &run, &ps).map_err(physics)?, common))
        }
        Command::Clock { common, times } => {
            let run = common.resolve(100)?;
            if run.config.kind != ScenarioType::U1Clock {
                return Err(config_error("clock needs the u1_clock scenario"));
            }
            let scenario = build(&run)?;
            let AnyScenario::Clock(clock) = &scenario else { unreachable!("u1_clock builds a clock") };
            Ok((commands::clock(clock, &run, times).map_err(physics)?, common))
        }
        Command::Typicality { common, epsilons } => {
            let run = common.resolve(10_000)?;
            let eps = parse_list(epsilons.as_deref().unwrap_or("0.25,0.5,1.0"), "--epsilons")?;
            let scenario = build(&run)?;
            Ok((commands::typicality(&scenario, &run, &eps).map_err(physics)?, common))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, common)) => {
            if let Err(e) = write_outcome(&outcome, common.format, common.out.as_deref()) {
                eprintln!("qrf: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("qrf: at least one check failed");
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("qrf: {message}");
            ExitCode::from(2)
        }
    }
}
