//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact ramification filtrations of `F(zeta_{p^r}, a_1^{1/p^{s_1}}, ..., a_n^{1/p^{s_n}})`.
#[derive(Debug, Parser)]
#[command(name = "ramfiltre", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the full filtration of one extension.
    Compute(ComputeArgs),
    /// Evaluate a single jump t_{n,k}(r, s_1, ..., s_n).
    Jump(JumpArgs),
    /// Run the cross-checks over a parameter grid.
    Verify(VerifyArgs),
    /// Emit the (r, s)-table of jumps as CSV.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Div,
    Nondiv,
}

impl From<ClassArg> for ramfiltre::VClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Div => ramfiltre::VClass::Divisible,
            ClassArg::Nondiv => ramfiltre::VClass::NonDivisible,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    /// Closed forms.
    Closed,
    /// Memoized square-rule evaluator.
    Rec,
    /// Both, failing on disagreement.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Unrolled,
    Typeset,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Residue characteristic.
    #[arg(long)]
    pub p: u64,
    /// Cyclotomic exponent.
    #[arg(long)]
    pub r: u32,
    /// Radical exponents s_1,...,s_n.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub s: Vec<u32>,
    /// Whether p divides the valuation of the last radicand.
    #[arg(long, value_enum)]
    pub vclass: ClassArg,
    /// Accept p = 2 under the extra degree hypothesis.
    #[arg(long)]
    pub assert_p2: bool,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Prime-to-p part as q:e1:e2,... entries, e.g. 5:1:2,7:1.
    #[arg(long)]
    pub tame: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct JumpArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Direction: 1 lowers r, i+1 lowers s_i.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = PathArg::Rec)]
    pub path: PathArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Grid preset: default, quick, extended or empty.
    #[arg(long, env = "RAMFILTRE_GRID", default_value = "default")]
    pub grid: String,
    /// Override the preset primes.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Override the largest number of radicals.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Override the largest cyclotomic exponent.
    #[arg(long)]
    pub r_max: Option<u32>,
    /// Override the valuation classes.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub vclasses: Option<Vec<ClassArg>>,
    /// Skip the tame multipliers.
    #[arg(long)]
    pub no_tame: bool,
    /// Random rationals per spec in the Herbrand inverse check.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed of the Herbrand samples.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Perturb one closed-form constant (test hook).
    #[arg(long)]
    pub mutate: Option<String>,
    /// Exponent reading of the general closed form.
    #[arg(long, value_enum, default_value_t = VariantArg::Unrolled)]
    pub variant: VariantArg,
    /// Failures listed in the report.
    #[arg(long, default_value_t = 20)]
    pub max_failures: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Residue characteristic.
    #[arg(long)]
    pub p: u64,
    /// Number of radicals.
    #[arg(long)]
    pub n: usize,
    /// Largest cyclotomic exponent.
    #[arg(long)]
    pub rmax: u32,
    #[arg(long, value_enum)]
    pub vclass: ClassArg,
    /// Single direction; all directions when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = PathArg::Rec)]
    pub path: PathArg,
    /// Accept p = 2 under the extra degree hypothesis.
    #[arg(long)]
    pub assert_p2: bool,
}
