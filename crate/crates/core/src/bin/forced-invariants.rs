use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use forced_invariants::cli::{
    cmd_drift, cmd_particular, cmd_simulate, cmd_sweep, cmd_verify_pde, CliError, Format,
    InvariantChoice, MethodChoice, ParticularChoice, RunConfig,
};
use forced_invariants::invariant::AnglePolicy;

/// Constants of motion for forced linear oscillators.
///
/// Settings come from built-in defaults, then the JSON `--config` document,
/// then flags (later sources win).
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and print t,x,v,K,rel_drift.
    Simulate(Common),
    /// Drift report of the invariant along one trajectory (JSON).
    Drift(Common),
    /// Finite-difference PDE residuals at seeded random points (JSON).
    VerifyPde {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        points: Option<usize>,
        /// Comma-separated finite-difference steps.
        #[arg(long, value_delimiter = ',')]
        steps: Option<Vec<f64>>,
    },
    /// Steady-state amplitude and drift over a range of forcing frequencies.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        omega_min: Option<f64>,
        #[arg(long)]
        omega_max: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        /// Relative half-width of the excluded resonance band (undamped only).
        #[arg(long)]
        band: Option<f64>,
    },
    /// Sample the particular solution: t,alpha,beta.
    Particular {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: Option<Particular>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON config file, or `-` for standard input.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    amp: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    cap_omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<Integrator>,
    #[arg(long, value_enum)]
    invariant: Option<Invariant>,
    #[arg(long, value_enum)]
    policy: Option<Policy>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Integrator {
    Rk4,
    Rk45,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Invariant {
    Auto,
    Nonresonant,
    Resonant,
    Damped,
    Weak,
    Energy,
    Composed,
    NumericComposed,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Policy {
    Principal,
    Unwrapped,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Particular {
    Closed,
    Numeric,
}

impl Common {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(m, omega, lambda, amp, cap_omega, x0, v0, t_start, t_end, dt, seed);
        if let Some(m) = self.method {
            cfg.method = match m {
                Integrator::Rk4 => MethodChoice::Rk4,
                Integrator::Rk45 => MethodChoice::Rk45,
            };
        }
        if let Some(i) = self.invariant {
            cfg.invariant = match i {
                Invariant::Auto => InvariantChoice::Auto,
                Invariant::Nonresonant => InvariantChoice::Nonresonant,
                Invariant::Resonant => InvariantChoice::Resonant,
                Invariant::Damped => InvariantChoice::Damped,
                Invariant::Weak => InvariantChoice::Weak,
                Invariant::Energy => InvariantChoice::Energy,
                Invariant::Composed => InvariantChoice::Composed,
                Invariant::NumericComposed => InvariantChoice::NumericComposed,
            };
        }
        if let Some(p) = self.policy {
            cfg.policy = match p {
                Policy::Principal => AnglePolicy::PrincipalBranch,
                Policy::Unwrapped => AnglePolicy::Unwrapped,
            };
        }
        if let Some(f) = self.format {
            cfg.format = Some(match f {
                OutFormat::Csv => Format::Csv,
                OutFormat::Json => Format::Json,
            });
        }
        Ok(cfg)
    }
}

type CmdFn = fn(&RunConfig, &mut dyn Write) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, cmd, cfg): (&Common, CmdFn, RunConfig) = match &cli.command {
        Command::Simulate(c) => (c, cmd_simulate, c.config()?),
        Command::Drift(c) => (c, cmd_drift, c.config()?),
        Command::VerifyPde {
            common,
            points,
            steps,
        } => {
            let mut cfg = common.config()?;
            if let Some(n) = points {
                cfg.verify.points = *n;
            }
            if let Some(s) = steps {
                cfg.verify.steps = s.clone();
            }
            (common, cmd_verify_pde, cfg)
        }
        Command::Sweep {
            common,
            omega_min,
            omega_max,
            count,
            band,
        } => {
            let mut cfg = common.config()?;
            let s = &mut cfg.sweep;
            s.omega_min = omega_min.unwrap_or(s.omega_min);
            s.omega_max = omega_max.unwrap_or(s.omega_max);
            s.count = count.unwrap_or(s.count);
            s.band = band.unwrap_or(s.band);
            (common, cmd_sweep, cfg)
        }
        Command::Particular { common, kind } => {
            let mut cfg = common.config()?;
            if let Some(k) = kind {
                cfg.particular = match k {
                    Particular::Closed => ParticularChoice::Closed,
                    Particular::Numeric => ParticularChoice::Numeric,
                };
            }
            (common, cmd_particular, cfg)
        }
    };
    // render fully before touching the output file so failures leave no partial output
    let mut buf = Vec::new();
    cmd(&cfg, &mut buf)?;
    match &common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(&buf)?;
            w.flush()?;
        }
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
