use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcg_core::equilibrium::{DEFAULT_ENTRY_CAP, DEFAULT_PLAYER_CAP};
use qcg_core::oracle::{DEFAULT_PATH_CAP, DEFAULT_STRATEGY_CAP};

#[derive(Debug, Parser)]
#[command(name = "qcg", version, about = "Nash equilibria of concurrent games with reachability costs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Where the game comes from and how results are printed.
#[derive(Debug, Args)]
pub struct Input {
    /// Game file (`-` for stdin).
    #[arg(value_name = "GAME", required_unless_present = "gen", conflicts_with = "gen")]
    pub path: Option<PathBuf>,
    /// Generate the game instead, e.g. `--gen "expne 3"`.
    #[arg(long, value_name = "FAMILY")]
    pub gen: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args)]
pub struct Caps {
    /// Largest number of players the equilibrium search accepts.
    #[arg(long, default_value_t = DEFAULT_PLAYER_CAP, value_parser = positive)]
    pub player_cap: usize,
    /// Largest number of table entries kept per winner set.
    #[arg(long, default_value_t = DEFAULT_ENTRY_CAP, value_parser = positive)]
    pub entry_cap: usize,
}

#[derive(Debug, Args)]
pub struct OracleCapArgs {
    /// Coalition strategies the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub strategy_cap: u64,
    /// Lasso paths the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_PATH_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub path_cap: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a game and print its size.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Punishment values of one player on every state.
    Coalition {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        player: String,
        /// Report values on the expanded game instead of the base states.
        #[arg(long)]
        expanded: bool,
    },
    /// Check whether a lasso is an equilibrium outcome.
    Check {
        #[command(flatten)]
        input: Input,
        /// JSON lasso, or any document with a `witness` field.
        #[arg(long, value_name = "FILE")]
        lasso: PathBuf,
        /// Pick entry `N` when the document holds a `frontier` list.
        #[arg(long, value_name = "N")]
        index: Option<usize>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Pareto-optimal equilibrium costs with witnesses.
    Pareto {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        caps: Caps,
    },
    /// Whether any equilibrium exists.
    Exists {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        caps: Caps,
    },
    /// Find an equilibrium whose cost is at most the given vector.
    Threshold {
        #[command(flatten)]
        input: Input,
        /// Comma-separated bound, `inf` allowed.
        #[arg(long, value_name = "C1,C2,...")]
        cost: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Social optimum, price of stability and price of anarchy.
    Metrics {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        caps: Caps,
    },
    /// Print a generated game in the game file format.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Brute-force reference answers.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum Family {
    /// Two-stage game without equilibria.
    Xor,
    /// Chain of `n` matching-pennies stages with `2^n` equilibrium costs.
    Expne { n: u32 },
    /// Game with infinitely many equilibria and one Pareto-optimal cost.
    Infne,
    /// Game whose price of stability is `2w`.
    Pos { w: u64 },
    /// Partition instance, e.g. `partition 3,1,2`.
    Partition {
        #[arg(value_delimiter = ',', required = true)]
        numbers: Vec<u64>,
    },
    /// 3-CNF instance, e.g. `3sat "1,2,-3;-1,2,3"`.
    #[command(name = "3sat")]
    Sat {
        #[arg(allow_hyphen_values = true)]
        cnf: String,
    },
    /// Hamiltonian path instance.
    Hampath {
        #[arg(long)]
        vertices: usize,
        /// Directed edges, e.g. `0-1,1-2`.
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Seeded random game with one explicit rule per state and profile.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        players: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
        #[arg(long, default_value_t = 3)]
        max_cost: u64,
    },
    /// Seeded random chain of matrix stages.
    Stage {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long, default_value_t = 2)]
        players: usize,
        #[arg(long, default_value_t = 3)]
        max_cost: u64,
    },
}

/// Wrapper used to parse the value of `--gen`.
#[derive(Debug, Parser)]
#[command(name = "--gen", no_binary_name = true)]
pub struct GenLine {
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Debug, Subcommand)]
pub enum OracleQuery {
    /// Pareto-optimal equilibrium costs by lasso enumeration.
    Pareto {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        caps: OracleCapArgs,
    },
    /// Punishment values by coalition strategy enumeration.
    Coalition {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        player: String,
        #[command(flatten)]
        caps: OracleCapArgs,
    },
    /// Decide a source instance directly.
    Decide {
        #[command(subcommand)]
        family: Family,
    },
}
