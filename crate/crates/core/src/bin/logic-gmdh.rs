use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::warn;

use logic_gmdh::cli::{self, ConfigOverrides};
use logic_gmdh::synthesis::Mode;
use logic_gmdh::Error;

#[derive(Parser)]
#[command(name = "logic-gmdh", version, about = "Synthesize, apply and explain Boolean neuron collectives")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Statement1,
    Split,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Statement1 => Mode::Statement1,
            ModeArg::Split => Mode::Split,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Grow a collective from a labeled CSV file and write it as JSON.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        delta: Option<u32>,
        #[arg(long)]
        f_ratio: Option<f64>,
        #[arg(long)]
        max_layers: Option<usize>,
        #[arg(long)]
        max_p: Option<usize>,
        #[arg(long)]
        chi0: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON file with any of the config keys; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Write the synthesis report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Classify every row of a CSV file.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Override the model's refusal threshold.
        #[arg(long)]
        chi0: Option<f64>,
    },
    /// Print the collective as IF-THEN rules.
    Rules {
        #[arg(long)]
        model: PathBuf,
    },
    /// Score a model against a labeled CSV file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        chi0: Option<f64>,
    },
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })
}

fn run(args: Args) -> Result<i32, Error> {
    match args.command {
        Command::Train {
            data,
            label,
            mode,
            delta,
            f_ratio,
            max_layers,
            max_p,
            chi0,
            seed,
            config,
            out,
            report,
        } => {
            let overrides = ConfigOverrides {
                mode: mode.map(Mode::from),
                delta,
                f_ratio,
                max_layers,
                max_p,
                chi0,
                seed,
            };
            let config = cli::resolve_config(config.as_deref(), &overrides)?;
            let outcome = cli::train(&data, &label, &config, &out)?;
            for w in &outcome.report.warnings {
                warn!("{w}");
            }
            match report {
                Some(path) => write_file(&path, &(outcome.report_json() + "\n"))?,
                None => println!("{}", outcome.report_json()),
            }
            if outcome.report.stalled() {
                eprintln!(
                    "synthesis stalled at V = {} (L_{{r+1}}=0); doubtful rows: {:?}",
                    outcome.report.final_errors, outcome.report.doubtful_rows
                );
            }
            Ok(outcome.exit_code())
        }
        Command::Predict { model, data, chi0 } => {
            let predictions = cli::predict(&model, &data, chi0)?;
            print!("{}", predictions.csv);
            eprintln!("{}", predictions.summary());
            Ok(0)
        }
        Command::Rules { model } => {
            print!("{}", cli::rules(&model)?);
            Ok(0)
        }
        Command::Eval { model, data, chi0 } => {
            let outcome = cli::eval(&model, &data, chi0)?;
            println!("{}", serde_json::to_string_pretty(&outcome.json).expect("metrics serialize"));
            if let Some(w) = outcome.warning {
                warn!("{w}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
