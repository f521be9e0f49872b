use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expobasis::Rational;

#[derive(Parser, Debug)]
#[command(name = "expobasis", version, about = "Certified frame bounds for exponential bases on unions of intervals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Sampling seed; per-trial seeds are `seed + trial`.
    #[arg(long, global = true, env = "EXPOBASIS_SEED", default_value_t = 42)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a system and certificate from a theorem, with its matrix.
    Construct(ConstructArgs),
    /// Certified constants only.
    Certify(SourceArgs),
    /// Singular values and optimal constants.
    Oracle(OracleArgs),
    /// Certificate versus oracle versus sampled Riesz ratios.
    Verify(VerifyArgs),
    /// The two-interval counterexamples.
    Regress,
    /// Roots of the β equation.
    Beta(BetaArgs),
    /// Certificate, verification and regressions in one document.
    Report(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// Rationally perturbed unit intervals.
    Main,
    /// `[0, N)` with one unit interval removed.
    Main2,
    /// Separated unit intervals in `[0, N)`.
    Main3,
    /// Separated unit intervals with clusters of at most two.
    Main3Cor,
    /// `M` standard branches on `M` unit intervals of `[0, N)` (basis witness only).
    Basis,
    /// `s` branches on intervals with distinct residues mod `s`.
    BasisMod,
    /// Complement of a lattice certificate in `[0, Δ)`.
    Complement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Reflected,
    Duality,
}

#[derive(Args, Debug, Clone)]
pub struct TheoremArgs {
    #[arg(long, value_enum)]
    pub thm: Option<Theorem>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long = "N")]
    pub n: Option<i64>,
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long = "M")]
    pub big_m: Option<usize>,
    #[arg(long)]
    pub u: Option<i64>,
    /// Integer left endpoints, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Vec<i64>,
    /// Rational perturbations, comma separated (`0,1/3`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub epsilons: Vec<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<Rational>,
    /// Node groups: `;` between clusters, `,` inside (`0,4;8`).
    #[arg(long)]
    pub clusters: Option<String>,
    #[arg(long, value_enum, default_value_t = Rule::Reflected)]
    pub rule: Rule,
    /// Length of the lattice interval for `complement`.
    #[arg(long = "Delta")]
    pub big_delta: Option<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    #[command(flatten)]
    pub theorem: TheoremArgs,
    /// Certificate JSON, inline or a path; the source certificate for `--thm complement`.
    #[arg(long)]
    pub certificate: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Interval union JSON, inline or a path; used with `--offsets`.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub offsets: Vec<Rational>,
    #[arg(long)]
    pub scale: Option<Rational>,
    /// Include the matrix entries.
    #[arg(long)]
    pub with_matrix: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = expobasis::verifier::DEFAULT_N_MAX)]
    pub n_max: i64,
    #[arg(long, default_value_t = expobasis::verifier::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Power iterations that refine the extreme sampled ratios.
    #[arg(long, default_value_t = 0)]
    pub power_steps: usize,
}

#[derive(Args, Debug, Clone)]
pub struct BetaArgs {
    #[arg(long = "M")]
    pub m: u64,
    /// Last `M` of the table; defaults to `--M`.
    #[arg(long)]
    pub to: Option<u64>,
}
