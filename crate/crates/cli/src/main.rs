use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use garnier::commands::{self, CommandError};
use garnier::config::{parse_model, ConfigError, Output, RunConfig};
use garnier::suites::{verify, Suite};
use garnier_core::bmap::Coords;
use garnier_core::lattice::{Convention, Model};

#[derive(Parser)]
#[command(name = "garnier", version, about = "Exact verification suites for the four-dimensional Garnier system")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the per-check trial counts (defaults: 5 per multiplicity,
    /// 100 for involutions, 20 for symmetry checks).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// First series truncation; doubled up to three times when needed.
    #[arg(long, global = true, default_value_t = garnier_core::exact::DEFAULT_TRUNCATION)]
    truncation: usize,
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::LeftFirst)]
    convention: ConventionArg,
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    #[value(name = "left_first")]
    LeftFirst,
    #[value(name = "right_first")]
    RightFirst,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordsArg {
    Qp,
    Qr,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites; exit 0 iff every check passes.
    Verify {
        /// tables, theorem1, theorem2, theorem3, figure1, involutions,
        /// hamiltonian, a comma separated list of these, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Restrict the geometric suites to X10 or X21.
        #[arg(long)]
        model: Option<String>,
    },
    /// Lattice action of a word, e.g. `wt2,wt1,wkI,wk0,wa0`.
    Act {
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "X21")]
        model: String,
        /// Also print ⟨Mⁿ Hq, hq⟩ for n = 1..N.
        #[arg(long)]
        degrees: Option<usize>,
    },
    /// Exact image of a point under a word.
    Apply {
        #[arg(long)]
        word: String,
        /// JSON object such as {"q1":"2","q2":"3","r1":"5","r2":"7"}, or an array.
        #[arg(long)]
        point: String,
        /// JSON object with keys k0, k1, kI, t1, t2, a0, s1, s2, or an array.
        #[arg(long)]
        params: String,
        #[arg(long, value_enum, default_value_t = CoordsArg::Qr)]
        coords: CoordsArg,
    },
}

fn config(common: &Common, model: Option<Model>) -> RunConfig {
    RunConfig {
        seed: common.seed,
        trials: common.trials,
        truncation: common.truncation,
        convention: match common.convention {
            ConventionArg::LeftFirst => Convention::LeftFirst,
            ConventionArg::RightFirst => Convention::RightFirst,
        },
        output: match common.output {
            OutputArg::Text => Output::Text,
            OutputArg::Json => Output::Json,
        },
        model,
    }
}

fn config_error(e: ConfigError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn command_result(r: Result<serde_json::Value, CommandError>) -> ExitCode {
    match r {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable"));
            ExitCode::from(e.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { suite, model } => {
            let model = match model.as_deref().map(parse_model).transpose() {
                Ok(m) => m,
                Err(e) => return config_error(e),
            };
            let cfg = config(&cli.common, model);
            let suites = match Suite::parse_list(&suite) {
                Ok(s) => s,
                Err(e) => return config_error(e),
            };
            if let Err(e) = cfg.validate() {
                return config_error(e);
            }
            let report = verify(&cfg, &suites);
            match cfg.output {
                Output::Json => println!("{}", report.to_json()),
                Output::Text => print!("{}", report.to_text()),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Act { word, model, degrees } => {
            let model = match parse_model(&model) {
                Ok(m) => m,
                Err(e) => return config_error(e),
            };
            command_result(commands::act(&word, model, &config(&cli.common, Some(model)), degrees))
        }
        Command::Apply { word, point, params, coords } => {
            let coords = match coords {
                CoordsArg::Qp => Coords::Qp,
                CoordsArg::Qr => Coords::Qr,
            };
            command_result(commands::apply(&word, coords, &point, &params, &config(&cli.common, None)))
        }
    }
}
