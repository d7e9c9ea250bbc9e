use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use polydress::oracle::compare;
use polydress_cli::{
    parse_document, preset, property_check, read_series, run_batch, CliError, Engine, Experiment,
    ReportJson, TauGrid, PRESETS,
};

/// Excitation probabilities of a spin-half in a polychromatic field.
///
/// Without a subcommand, runs the experiments given by --preset or --config
/// and writes CSV series and JSON reports into --out.
#[derive(Debug, Parser)]
#[command(name = "polydress", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Built-in figure reproduction.
    #[arg(long, value_parser = PossibleValuesParser::new(PRESETS), conflicts_with = "config")]
    preset: Option<String>,

    /// JSON experiment document (one object or a list).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the engine of every experiment.
    #[arg(long, value_enum)]
    engine: Option<Engine>,

    /// Override the grid as start:stop:count.
    #[arg(long, value_parser = TauGrid::parse)]
    tau: Option<TauGrid>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Override the oracle lattice halfwidth.
    #[arg(long)]
    window: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare two series CSVs and emit the deviation report as JSON.
    Report {
        analytic: PathBuf,
        oracle: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded property sweep over random configurations.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn load(args: &RunArgs) -> Result<Vec<Experiment>, CliError> {
    let mut exps = match (&args.preset, &args.config) {
        (Some(name), None) => {
            preset(name).ok_or_else(|| CliError::Validation(format!("unknown preset {name}")))?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_document(&text)?
        }
        _ => {
            return Err(CliError::Validation(
                "give exactly one of --preset or --config".into(),
            ))
        }
    };
    if exps.is_empty() {
        return Err(CliError::Validation("no experiments".into()));
    }
    for e in &mut exps {
        if let Some(engine) = args.engine {
            e.engine = engine;
        }
        if let Some(tau) = args.tau {
            e.tau = tau;
        }
        if let Some(w) = args.window {
            e.window = w;
        }
    }
    let mut names: Vec<&str> = exps.iter().map(|e| e.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Validation(
            "experiment names must be unique".into(),
        ));
    }
    for e in &exps {
        e.validate()?;
    }
    Ok(exps)
}

fn fail(e: &CliError) -> u8 {
    eprintln!("{}", e.to_json());
    e.exit_code()
}

/// Runs the batch, reporting each failure; exit code is the most severe.
fn run(args: &RunArgs) -> u8 {
    let exps = match load(args) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let mut code = 0;
    for r in run_batch(&exps, &args.out) {
        match r {
            Ok(summary) => println!("{}", serde_json::to_string(&summary).expect("serialisable")),
            Err(e) => code = code.max(fail(&e)),
        }
    }
    code
}

fn report(analytic: &Path, oracle: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let a = read_series(analytic)?;
    let b = read_series(oracle)?;
    let r = ReportJson::from(&compare(&a, &b)?);
    match out {
        Some(path) => polydress_cli::output::write_json(path, &r),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&r).expect("serialisable")
            );
            Ok(())
        }
    }
}

fn check(seed: u64, count: usize) -> Result<(), CliError> {
    let s = property_check(seed, count)?;
    println!("{}", serde_json::to_string(&s).expect("serialisable"));
    if s.pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("seed {seed}")))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Validation(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    let code = match &cli.command {
        Some(Command::Report {
            analytic,
            oracle,
            out,
        }) => report(analytic, oracle, out.as_deref()).map_or_else(|e| fail(&e), |()| 0),
        Some(Command::Check { seed, count }) => {
            check(*seed, *count).map_or_else(|e| fail(&e), |()| 0)
        }
        None => run(&cli.run),
    };
    ExitCode::from(code)
}
