//! `skewflow`: solve, certify and generate skew-symmetric flow instances.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "skewflow", version, about = "Maximum IS-flows, matchings and their certificates")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Append a JSON-lines report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Aug,
    Sapm,
    Anstee,
    Sbfm,
}

impl From<Algo> for skewflow::solvers::Algorithm {
    fn from(a: Algo) -> Self {
        use skewflow::solvers::Algorithm;
        match a {
            Algo::Aug => Algorithm::Augmenting,
            Algo::Sapm => Algorithm::Sapm,
            Algo::Anstee => Algorithm::Anstee,
            Algo::Sbfm => Algorithm::Sbfm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    RandomGraph,
    RandomSsf,
    RandomMbp,
    Dense,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum IS-flow of an ssf network (or of the network of an edge file).
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "sbfm")]
        algo: Algo,
        /// Write the flow and its certificate in flow format.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Maximum cardinality matching of an edge file (bounds ignored).
    Match {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "sbfm")]
        algo: Algo,
        /// Replace dense bicliques by stars before solving.
        #[arg(long)]
        compress: bool,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
    },
    /// Bounded (b-)matching of an edge file, honouring b and u lines.
    Bmatch {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "sbfm")]
        algo: Algo,
    },
    /// Regular s -> s' path in the split graph of an ssf network, or a barrier.
    Rpath {
        instance: PathBuf,
        /// Find a shortest one.
        #[arg(long)]
        shortest: bool,
    },
    /// Maximal balanced path set (or balanced blocking flow) of an mbp file.
    Mbp {
        instance: PathBuf,
        /// Use capacities (balanced blocking flow) instead of unit arcs.
        #[arg(long)]
        bbf: bool,
    },
    /// Symmetric decomposition of a flow on an ssf network.
    Decompose { instance: PathBuf, flow: PathBuf },
    /// Clique compression statistics of an edge file.
    Compress {
        instance: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
    },
    /// Check a flow file (and its barrier, if present) against an instance.
    Verify { instance: PathBuf, flow: PathBuf },
    /// Write a deterministic random instance.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        cap: i64,
        /// Source pairs for random-mbp.
        #[arg(long, default_value_t = 2)]
        pairs: usize,
        /// Edge exponent for dense graphs.
        #[arg(long, default_value_t = 1.8)]
        exponent: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Time SBFM on random matching instances.
    Bench {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 10000)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        runs: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match commands::run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
