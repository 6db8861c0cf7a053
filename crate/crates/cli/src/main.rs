//! `tvbound` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 LP
//! numeric failure. Reports go to standard output, messages to standard
//! error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "tvbound", version, about = "Moment-based lower bounds on total variation distance")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; `sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct MomentArgs {
    /// Mean of P
    #[arg(long, allow_negative_numbers = true)]
    pub mp: f64,
    /// Standard deviation of P
    #[arg(long, allow_negative_numbers = true)]
    pub sp: f64,
    /// Mean of Q
    #[arg(long, allow_negative_numbers = true)]
    pub mq: f64,
    /// Standard deviation of Q
    #[arg(long, allow_negative_numbers = true)]
    pub sq: f64,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub grid_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_hi: Option<f64>,
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Add the tight witness's support points to the grid
    #[arg(long, action = ArgAction::Set, default_value_t = false)]
    pub include_witness: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Mp,
    Sp,
    Mq,
    Sq,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SweepArgs {
    /// Flag to vary; its own value flag may be omitted
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub mp: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sp: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sq: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tight bound and the candidate values it is compared against
    Bound(MomentArgs),
    /// Pair of distributions attaining the tight bound
    Witness(MomentArgs),
    /// The pair sharing a two-point support
    TwoPoint(MomentArgs),
    /// Anchored three-point pair
    CaseC {
        #[command(flatten)]
        moments: MomentArgs,
        /// Q's mass at its lower support point, in (0, 1)
        #[arg(long)]
        q_param: f64,
    },
    /// Element k of the equal-means sequence whose TV is 1/k
    Sequence {
        /// Common mean
        #[arg(long, allow_negative_numbers = true)]
        mp: f64,
        #[arg(long, allow_negative_numbers = true)]
        sp: f64,
        /// Must equal --mp when given
        #[arg(long, allow_negative_numbers = true)]
        mq: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        sq: f64,
        #[arg(long)]
        k: u64,
    },
    /// Minimize TV on a grid by LP and compare with the closed form
    Verify {
        #[command(flatten)]
        moments: MomentArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Multivariate bound from a JSON moments file
    NdBound {
        /// JSON object with mean_p, cov_p, mean_q, cov_q
        file: PathBuf,
    },
    /// Randomized check of the multivariate bound on discrete pairs
    NdCheck {
        #[arg(long, default_value_t = 2)]
        dims: usize,
        /// Shared support size, defaults to 2 * dims + 2
        #[arg(long)]
        atoms: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Closed-form values over an inclusive range of one parameter
    Sweep(SweepArgs),
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = cli.format;
    let json_default = format.unwrap_or(Format::Json);
    match cli.command {
        Command::Bound(m) => commands::bound(m, json_default),
        Command::Witness(m) => commands::witness(m, json_default),
        Command::TwoPoint(m) => commands::two_point(m, json_default),
        Command::CaseC { moments, q_param } => commands::case_c(moments, q_param, json_default),
        Command::Sequence { mp, sp, mq, sq, k } => commands::sequence(mp, sp, mq, sq, k, json_default),
        Command::Verify { moments, grid } => commands::verify(moments, &grid, json_default),
        Command::NdBound { file } => commands::nd_bound(&file, json_default),
        Command::NdCheck { dims, atoms, trials, seed } => {
            commands::nd_check(dims, atoms, trials, seed, json_default)
        }
        Command::Sweep(args) => commands::sweep(args, format.unwrap_or(Format::Csv)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(report) = failure.report() {
                println!("{report}");
            }
            eprintln!("tvbound: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
