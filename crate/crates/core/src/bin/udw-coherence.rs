use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use udw_coherence::commands::{cmd_eval, cmd_infer_mass, cmd_sweep};
use udw_coherence::field::FieldModel;
use udw_coherence::groups::ParameterSet;
use udw_coherence::numerics::DEFAULT_REL_TOL;
use udw_coherence::oracle::DEFAULT_SEED;
use udw_coherence::sweep::{Format, SweepSpec};
use udw_coherence::verify::{run_verification, Level};
use udw_coherence::Error;

#[derive(Parser, Debug)]
#[command(
    name = "udw-coherence",
    version,
    about = "Cohering and decohering power of a delta-coupled Unruh-DeWitt detector"
)]
struct Cli {
    /// Worker threads for sweeps (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Relative tolerance of the k-space quadratures
    #[arg(long, global = true, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    /// Interpret --set keys as raw natural-unit parameters (Omega, m, E, R, lambda, beta, t0)
    #[arg(long, global = true)]
    raw: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kernel, powers and remaining coherence at one parameter point
    Eval {
        #[arg(long = "set", value_name = "GROUP=VALUE")]
        set: Vec<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Grid sweep described by a JSON spec
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Extra fixed groups, overriding the spec
        #[arg(long = "set", value_name = "GROUP=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Recover m/Omega from a measured cohering power
    InferMass {
        #[arg(long)]
        target: f64,
        #[arg(long = "set", value_name = "GROUP=VALUE")]
        set: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.1, 10.0])]
        bracket: Vec<f64>,
    },
    /// Run the built-in verification suite
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long, hide = true, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

fn parse_set(items: &[String]) -> Result<ParameterSet, Error> {
    let mut params = ParameterSet::new();
    for item in items {
        params.parse_assignment(item)?;
    }
    Ok(params)
}

/// Writes to stdout; a closed pipe (`| head`) ends output quietly.
fn emit(text: &str) -> Result<(), Error> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let model = FieldModel::with_tolerance(cli.tol);
    match cli.command {
        Command::Eval { set, format } => {
            let record = cmd_eval(&parse_set(&set)?, cli.raw, &model)?;
            match format {
                FormatArg::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&record)?))?,
                FormatArg::Csv => emit(&format!(
                    "z_re,z_im,cohering,decohering\n{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    record.z_re, record.z_im, record.cohering, record.decohering
                ))?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            spec,
            set,
            out,
            format,
        } => {
            if cli.raw {
                return Err(Error::Usage(
                    "sweeps are defined over dimensionless groups; --raw is not supported".into(),
                ));
            }
            let mut spec = SweepSpec::from_json(&fs::read_to_string(&spec)?)?;
            spec.fixed = spec.fixed.merged(&parse_set(&set)?);
            if let Some(f) = format {
                spec.format = f.into();
            }
            let table = cmd_sweep(&spec, &model, cli.workers)?;
            let text = table.render(spec.format)?;
            match out.or(spec.output.clone()) {
                Some(path) => fs::write(path, text)?,
                None => emit(&text)?,
            }
            let failures = table.failures();
            if failures > 0 {
                eprintln!("{failures} of {} points failed", table.rows.len());
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::InferMass {
            target,
            set,
            bracket,
        } => {
            let record = cmd_infer_mass(
                target,
                &parse_set(&set)?,
                (bracket[0], bracket[1]),
                cli.raw,
                &model,
            )?;
            emit(&format!("{}\n", serde_json::to_string_pretty(&record)?))?;
            Ok(if record.succeeded() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Verify {
            level,
            format,
            tolerance_scale,
        } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let report = run_verification(level, cli.seed, tolerance_scale);
            match format {
                FormatArg::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&report)?))?,
                FormatArg::Csv => emit(&report.render())?,
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
