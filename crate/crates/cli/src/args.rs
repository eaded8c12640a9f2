//! Command-line grammar.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Default working precision in bits when neither the flag nor the
/// environment sets one.
pub const DEFAULT_PRECISION: u32 = 512;
/// Environment variable supplying a default for `--precision`.
pub const PRECISION_ENV: &str = "IPV_PRECISION";

#[derive(Debug, Parser)]
#[command(
    name = "ipv",
    version,
    about = "Certify primes in (4n, 5n): sieve sweeps and exact tail inequalities"
)]
pub struct Cli {
    /// Maximum working precision in bits (overrides IPV_PRECISION; default 512).
    #[arg(long, global = true, value_name = "BITS")]
    pub precision: Option<u32>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, value_name = "J")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run checks of the lemmas and theorems.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Split C(5n, 4n) into small, middle and target primes.
    Decompose {
        #[arg(long)]
        n: u64,
    },
    /// Evaluate the bracket operator {s brace r}.
    Bracket {
        /// s as an integer, fraction or decimal.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// r as an integer, fraction or decimal.
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Lower bound for the number of primes in (4n, 5n).
    CountBound {
        #[arg(long)]
        n: u64,
    },
    /// Look for a prime in (kn, (k+1)n) for every n in a range.
    Scan {
        #[arg(long)]
        k: u64,
        #[arg(long = "from", value_name = "A")]
        from: u64,
        #[arg(long = "to", value_name = "B")]
        to: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Target {
    /// The full certification suite.
    All,
    /// A lemma: 2.1, 2.2, 2.3, 3.1 or 3.2.
    Lemma {
        id: String,
        #[arg(long)]
        part: Option<u32>,
        #[arg(long)]
        n: Option<u64>,
        /// Constant c for the 2.3 monotonicity grids.
        #[arg(long)]
        c: Option<String>,
    },
    /// A theorem: 3.3, 4.1, 4.2, 4.3, 4.4 or 4.5.
    Theorem {
        id: String,
        #[arg(long, conflicts_with_all = ["from", "to"])]
        n: Option<u64>,
        #[arg(long = "from", value_name = "A", requires = "to")]
        from: Option<u64>,
        #[arg(long = "to", value_name = "B", requires = "from")]
        to: Option<u64>,
        /// Count level for 4.5.
        #[arg(long)]
        m: Option<u64>,
    },
}
