use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nls_splitting::experiment::{parse_config, run_experiment, write_outputs, RunConfig, Study};

#[derive(Parser)]
#[command(version, about = "Splitting integrators for (stochastic) NLS: experiments")]
struct Cli {
    #[command(subcommand)]
    study: Command,
    /// Config file of `key = value` lines; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Prints nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// One integration at the finest configured step.
    Run,
    /// Step-size sweep with a fitted convergence order.
    Converge,
    /// Symplectic defect against step size.
    Defect,
    /// Lie, Strang and iterative splitting against the exact soliton.
    Soliton,
}

fn load(cli: &Cli) -> nls_splitting::Result<RunConfig> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)?,
        None => String::new(),
    };
    let mut config = parse_config(&text)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output = out.clone();
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let study = match cli.study {
        Command::Run => Study::Run,
        Command::Converge => Study::Converge,
        Command::Defect => Study::Defect,
        Command::Soliton => Study::Soliton,
    };
    let outcome = load(&cli).and_then(|config| {
        let result = run_experiment(&config, study)?;
        let files = write_outputs(&result, &config.output)?;
        Ok((result, files))
    });
    match outcome {
        Ok((result, files)) => {
            if !cli.quiet {
                for row in result.rows.iter().filter(|r| r.path_id.is_none()) {
                    let fit = row.order_fit.map_or("-".into(), |v| format!("{v:.3}"));
                    let err = row.mean_error.map_or("-".into(), |v| format!("{v:.3e}"));
                    println!("{} m={}: finest mean error {err}, order {fit}", row.scheme, row.m);
                }
                for f in files {
                    println!("wrote {}", f.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
