use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use unicycle_core::prediction::PredictorKind;
use unicycle_nav::app::{self, AppError, SimulateOptions};

#[derive(Parser)]
#[command(version, about = "Safe unicycle navigation with a reference governor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trajectory.csv and scene.svg.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// One of ball, bc, ic, tc, fs. Defaults to the scenario's predictor.
        #[arg(long)]
        predictor: Option<PredictorKind>,
        #[arg(long)]
        out: PathBuf,
        /// Integration step (s).
        #[arg(long)]
        dt: Option<f64>,
        /// Simulated time limit (s).
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Run the scenario once per predictor and compare speeds.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated list, e.g. ball,bc,ic,tc,fs.
        #[arg(long)]
        predictors: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Simulate {
            scenario,
            predictor,
            out,
            dt,
            horizon,
        } => {
            let opts = SimulateOptions {
                predictor,
                dt,
                horizon,
            };
            app::run_simulate(&scenario, &opts, &out).map(|_| ())
        }
        Command::Compare {
            scenario,
            predictors,
            out,
        } => {
            let kinds = app::parse_predictor_list(&predictors)?;
            app::run_compare(&scenario, &kinds, &out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { app::EXIT_VALIDATION } else { app::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
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
