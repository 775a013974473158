//! `lrc`: construct, verify and bound locally recoverable codes with availability.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "lrc", version, about = "Locally recoverable codes with availability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate distance and rate bounds for given code parameters.
    Bounds(BoundsArgs),
    /// Write rate-versus-relative-distance curves as CSV.
    Curves(CurvesArgs),
    /// Build a code and write it as a JSON artifact.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Check distance, availability and erasure decoding of an artifact.
    Verify(VerifyArgs),
    /// Run the greedy shortening on an artifact and tabulate the resulting bounds.
    Shorten(ShortenArgs),
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub k: i64,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub t: i64,
    /// Alphabet size passed to the code-size oracles.
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Minimum distance for the dimension bound; omitted if not given.
    #[arg(long)]
    pub d: Option<i64>,
    /// Emit JSON instead of a text table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub t: u32,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Output CSV path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCommand {
    /// Binary subset-incidence code on the t-subsets of r+t points.
    Wzl {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gabidulin code followed by the code of a random biregular graph.
    Expander {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        /// Base field GF(2^w).
        #[arg(long)]
        w: u32,
        /// Extension degree; defaults to the outer dimension.
        #[arg(long)]
        m: Option<usize>,
        /// Gabidulin dimension; defaults to the outer dimension minus t.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_tries: usize,
        /// Accept graphs with 4-cycles (still without parallel edges).
        #[arg(long)]
        allow_4_cycles: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gabidulin code split into groups, each encoded by a binary WZL code.
    Concat {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        blocks: usize,
        #[arg(long)]
        m: usize,
        /// Target minimum distance; the dimension follows from it.
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Compute the minimum distance and compare it to the claimed one.
    #[arg(long)]
    pub distance: bool,
    /// Search for t disjoint recovering sets of size at most r per coordinate.
    #[arg(long)]
    pub availability: bool,
    /// Locality to verify; defaults to the artifact's r.
    #[arg(long)]
    pub r: Option<usize>,
    /// Availability to verify; defaults to the artifact's t.
    #[arg(long)]
    pub t: Option<usize>,
    /// Number of erasures per random trial.
    #[arg(long)]
    pub erasures: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Required together with --erasures.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ShortenArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bounds(a) => commands::bounds(&a),
        Command::Curves(a) => commands::curves(&a),
        Command::Construct(c) => commands::construct(&c),
        Command::Verify(a) => commands::verify(&a),
        Command::Shorten(a) => commands::shorten(&a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
