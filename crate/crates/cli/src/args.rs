//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fml_core::bounds::Divisibility;
use fml_core::distributions::Params;

#[derive(Debug, Parser)]
#[command(
    name = "fml",
    version,
    about = "Fourth-moment bounds for classical and free limit theorems"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat key=value config file (falls back to $FML_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Classical Berry-Esseen constant.
    #[arg(long = "C", global = true)]
    pub constant_c: Option<f64>,
    /// Free Berry-Esseen constant.
    #[arg(long = "K", global = true)]
    pub constant_k: Option<f64>,
    /// Target error for certified distances.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub ceiling_all: Option<usize>,
    #[arg(long, global = true)]
    pub ceiling_nc: Option<usize>,
    #[arg(long, global = true)]
    pub ceiling_pair: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate or count set partitions.
    #[command(subcommand)]
    Partitions(PartitionsCommand),
    /// Convert between moments and cumulants.
    Cumulants(CumulantsArgs),
    /// Query catalog distributions.
    #[command(subcommand)]
    Dist(DistCommand),
    /// Certified Kolmogorov distance between two catalog laws.
    Distance(DistanceArgs),
    /// Evaluate a bound right-hand side.
    Bound(BoundArgs),
    /// Kurtosis divisibility audit of a moment vector.
    Audit(AuditArgs),
    /// Reproduce the example table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    All,
    Nc,
    Pair,
}

#[derive(Debug, Subcommand)]
pub enum PartitionsCommand {
    Count {
        #[arg(long, value_enum)]
        kind: FamilyArg,
        #[arg(long)]
        n: usize,
    },
    List {
        #[arg(long, value_enum)]
        kind: FamilyArg,
        #[arg(long)]
        n: usize,
    },
    /// Pairings of [n] tallied by crossing number.
    Crossings {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Classical,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Input is a cumulant vector.
    ToMoments,
    /// Input is a moment vector.
    ToCumulants,
}

#[derive(Debug, Args)]
pub struct CumulantsArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "to-moments")]
    pub direction: Direction,
    /// Read the vector from the first row of a CSV file (`-` for stdin).
    #[arg(long, conflicts_with = "values")]
    pub input: Option<PathBuf>,
    /// Vector entries, space or comma separated.
    #[arg(allow_negative_numbers = true, value_delimiter = ',')]
    pub values: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum DistCommand {
    Cdf {
        name: String,
        #[arg(long, default_value = "")]
        params: Params,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
    },
    Moments {
        name: String,
        #[arg(long, default_value = "")]
        params: Params,
    },
    /// Dump the spec as JSON.
    Spec {
        name: String,
        #[arg(long, default_value = "")]
        params: Params,
    },
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    pub f: String,
    pub g: String,
    #[arg(long, default_value = "")]
    pub f_params: Params,
    #[arg(long, default_value = "")]
    pub g_params: Params,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(value_enum)]
    pub kind: KindArg,
    #[arg(long, allow_negative_numbers = true)]
    pub m4: f64,
    #[arg(long = "N", default_value = "inf")]
    pub order: Divisibility,
    /// Multiplier of K in the free bound (default 2 for finite N, 1 for N = inf).
    #[arg(long)]
    pub factor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Raw moments m1..m4 (at least four entries).
    #[arg(long, required = true, allow_negative_numbers = true, value_delimiter = ',', num_args = 1..)]
    pub moments: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, conflicts_with_all = ["name", "params"])]
    pub all: bool,
    #[arg(required_unless_present = "all")]
    pub name: Option<String>,
    #[arg(long)]
    pub params: Option<Params>,
}
