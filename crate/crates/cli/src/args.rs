use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "frozen-spectral",
    version,
    about = "Spectra and inverse spectral problems for the frozen-argument Sturm-Liouville equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Destination file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format (default: from the file extension, else json).
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of the discrete problem.
    Forward(ForwardArgs),
    /// Weights from a full discrete spectrum (gcd(m, l+1) = 1).
    Inverse(InverseArgs),
    /// Weights from a reduced spectrum plus a-priori weights (gcd(m, l+1) > 1).
    InverseDegenerate(DegenerateArgs),
    /// Eigenvalues of the continuous problem.
    SpectrumContinuous(ContinuousArgs),
    /// Recover q on the grid from odd-indexed continuous eigenvalues.
    Reconstruct(ReconstructArgs),
    /// The three benchmark tables.
    ReproduceTables(TablesArgs),
    /// Convergence rates of the correction method.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["potential", "w", "random_w"])))]
pub struct ForwardArgs {
    /// Named potential or sampled CSV, sampled at x_j = j pi/(l+1).
    #[arg(long)]
    pub potential: Option<String>,
    /// File of weights w_1..w_l (`re` or `re,im` per line).
    #[arg(long)]
    pub w: Option<PathBuf>,
    /// Random weights in the unit disk (needs --l and --seed).
    #[arg(long, requires_all = ["l", "seed"])]
    pub random_w: bool,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    /// Checked against the number of eigenvalues when given.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub m: usize,
    /// File of eigenvalues mu_n (`re` or `re,im` per line).
    #[arg(long)]
    pub mu: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DegenerateArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
    /// The l - d + 1 non-degenerate eigenvalues mu_n.
    #[arg(long)]
    pub mu: PathBuf,
    #[arg(long, value_enum)]
    pub side: SideArg,
    /// Known weights in increasing index order.
    #[arg(long)]
    pub known_w: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ContinuousArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub n_max: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).multiple(true).args(["potential", "lambdas"])))]
pub struct ReconstructArgs {
    /// Supplies the eigenvalues when --lambdas is absent, and the reference q.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub m: usize,
    /// File of lambda_n for n = 1, 3, ..., 2m-1.
    #[arg(long)]
    pub lambdas: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 20, 40])]
    pub ms: Vec<usize>,
    /// Odd indices followed across the grids.
    #[arg(long, value_delimiter = ',', default_values_t = [1])]
    pub ns: Vec<usize>,
    /// Lower bound on n/(2m) for the uniform residual.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Grids for the trapezoid-prime sums.
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32, 64])]
    pub trapz_ms: Vec<usize>,
    /// n/(2m) for the trapezoid-prime sums.
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}
