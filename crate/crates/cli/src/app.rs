//! Argument parsing and dispatch. Exit codes: 0 success, 1 verification or
//! computation failure, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperstep::BarrierParams;

use crate::commands::{potential_table, sweep_table, wavefunction_table, SweepSpec, Variable};
use crate::config::{self, Settings};
use crate::csv::Table;
use crate::verify::{self, Level, Options};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hyperstep",
    version,
    about = "Exact transmission through a smooth asymmetric step barrier",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(flatten)]
    pub params: ParamArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct ParamArgs {
    /// Energy origin V0 [default: 0]
    #[arg(long, global = true)]
    pub v0: Option<f64>,
    /// Step height V1 [default: 1]
    #[arg(long, global = true)]
    pub v1: Option<f64>,
    /// Step position x0 [default: 0]
    #[arg(long, global = true)]
    pub x0: Option<f64>,
    /// Signed steepness sigma [default: -1]
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Particle mass [default: 1]
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Reduced Planck constant [default: 1]
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Energy (fixed value for sigma sweeps and wavefunction dumps)
    #[arg(long, global = true)]
    pub energy: Option<f64>,
    /// Start of the x, E or sigma range
    #[arg(long, global = true)]
    pub from: Option<f64>,
    /// End of the range (inclusive)
    #[arg(long, global = true)]
    pub to: Option<f64>,
    /// Number of grid points
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Write CSV here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// key = value parameter file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl ParamArgs {
    fn settings(&self) -> Settings {
        Settings {
            v0: self.v0,
            v1: self.v1,
            x0: self.x0,
            sigma: self.sigma,
            mass: self.mass,
            hbar: self.hbar,
            energy: self.energy,
            from: self.from,
            to: self.to,
            count: self.count,
            with_oracle: None,
            output: self.output.as_ref().map(|p| p.display().to_string()),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate V(x) and z(x): CSV x,V,z
    #[command(allow_negative_numbers = true)]
    Potential,
    /// Transmission sweep over energy or sigma: CSV E|sigma,T,R,T_SP[,T_num]
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(value_enum)]
        variable: SweepVariable,
        /// Add a T_num column from direct integration
        #[arg(long)]
        with_oracle: bool,
    },
    /// Scattering state with unit e^{ik1(x-x0)} amplitude: CSV x,re_psi,im_psi,abs2_psi,V
    #[command(allow_negative_numbers = true)]
    Wavefunction,
    /// Run the verification suite
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(value_enum, default_value = "fast")]
        level: VerifyLevel,
        /// Perturb the Heun accessory parameter (negative control)
        #[arg(long, hide = true)]
        tamper_q: Option<f64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    Energy,
    Sigma,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyLevel {
    Fast,
    Full,
}

/// Defaults, then the config file, then flags.
pub fn resolve_settings(params: &ParamArgs, with_oracle_flag: bool) -> Result<Settings> {
    let file = match &params.config {
        Some(path) => config::load(path)?,
        None => Settings::default(),
    };
    let mut flags = params.settings();
    if with_oracle_flag {
        flags.with_oracle = Some(true);
    }
    Ok(file.overlay(&flags))
}

pub fn barrier(s: &Settings) -> Result<BarrierParams> {
    BarrierParams::with_units(
        s.v0.unwrap_or(0.0),
        s.v1.unwrap_or(1.0),
        s.x0.unwrap_or(0.0),
        s.sigma.unwrap_or(-1.0),
        s.mass.unwrap_or(1.0),
        s.hbar.unwrap_or(1.0),
    )
    .context("invalid barrier parameters")
}

fn barrier_top(p: &BarrierParams) -> f64 {
    p.v0.max(p.v_near())
}

fn emit(table: &Table, s: &Settings) -> Result<()> {
    match &s.output {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {path}"))?;
            table.write_to(BufWriter::new(f))?;
        }
        None => table.write_to(io::stdout().lock())?,
    }
    Ok(())
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn runtime<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Runtime)
}

fn dispatch(cli: &Cli) -> std::result::Result<i32, Failure> {
    match &cli.command {
        Command::Potential => {
            let s = usage(resolve_settings(&cli.params, false))?;
            let p = usage(barrier(&s))?;
            let half = 10.0 * p.sigma.abs().max(1.0);
            let t = usage(potential_table(
                &p,
                s.from.unwrap_or(p.x0 - half),
                s.to.unwrap_or(p.x0 + half),
                s.count.unwrap_or(201),
            ))?;
            runtime(emit(&t, &s))?;
            Ok(EXIT_OK)
        }
        Command::Sweep { variable, with_oracle } => {
            let s = usage(resolve_settings(&cli.params, *with_oracle))?;
            let p = usage(barrier(&s))?;
            let top = barrier_top(&p);
            let spec = match variable {
                SweepVariable::Energy => SweepSpec {
                    variable: Variable::Energy,
                    start: s.from.unwrap_or(top + 1e-3),
                    stop: s.to.unwrap_or(top + 4.0),
                    count: s.count.unwrap_or(200),
                    params: p,
                    energy: f64::NAN,
                },
                SweepVariable::Sigma => SweepSpec {
                    variable: Variable::Sigma,
                    start: s.from.unwrap_or(-2.0),
                    stop: s.to.unwrap_or(-0.01),
                    count: s.count.unwrap_or(200),
                    params: p,
                    energy: s.energy.unwrap_or(top + 1.0),
                },
            };
            let out = usage(sweep_table(&spec, s.with_oracle.unwrap_or(false)))?;
            runtime(emit(&out.table, &s))?;
            if out.failed_rows == out.table.rows.len() {
                eprintln!("error: every sweep point fell outside the physical domain");
                return Ok(EXIT_FAILURE);
            }
            Ok(EXIT_OK)
        }
        Command::Wavefunction => {
            let s = usage(resolve_settings(&cli.params, false))?;
            let p = usage(barrier(&s))?;
            let half = 20.0 * p.sigma.abs().max(1.0);
            let t = usage(wavefunction_table(
                &p,
                s.energy.unwrap_or(barrier_top(&p) + 1.0),
                s.from.unwrap_or(p.x0 - half),
                s.to.unwrap_or(p.x0 + half),
                s.count.unwrap_or(401),
            ))?;
            runtime(emit(&t, &s))?;
            Ok(EXIT_OK)
        }
        Command::Verify { level, tamper_q } => {
            let level = match level {
                VerifyLevel::Fast => Level::Fast,
                VerifyLevel::Full => Level::Full,
            };
            let opts = Options { tamper_q: *tamper_q };
            let results = verify::run_suite(level, &opts);
            let ok = runtime(verify::report(&results, io::stdout().lock()).map_err(Into::into))?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            let _ = io::stderr().flush();
            EXIT_FAILURE
        }
    }
}
