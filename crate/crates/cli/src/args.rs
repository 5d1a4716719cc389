use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "graphconf", version, about = "Homology of ordered configuration spaces of graphs")]
pub struct Cli {
    /// Directory for cached complexes; the GRAPHCONF_CACHE_DIR variable
    /// takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Refuse to build complexes with more cells than this.
    #[arg(long, global = true, default_value_t = graphconf::complex::DEFAULT_MAX_CELLS)]
    pub max_cells: usize,
    /// Format printed on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write `<command>.json` and `<command>.csv` into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
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
    /// Build a complex and report its cell counts.
    Model(ModelArgs),
    /// Integral homology of a complex.
    Homology(HomologyArgs),
    /// Compare homology of the two models.
    OracleCompare(OracleArgs),
    /// Generation degree check for a family.
    GenerationCheck(GenerationArgs),
    /// Character tables and stability of multiplicities over a window.
    RepStability(StabilityArgs),
    /// Check that products of basic cycles generate the homology of a tree.
    TreeGenerators(TreeArgs),
    /// Fit Betti numbers along a family by a polynomial.
    PolyFit(PolyArgs),
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph JSON file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Comma-separated sink vertices.
    #[arg(long, value_delimiter = ',')]
    pub sinks: Vec<usize>,
    /// Build the discretized complex of the subdivided graph instead.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct HomologyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Only this degree (default: all).
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, default_value_t = 2)]
    pub max_q: usize,
}

#[derive(Debug, Args)]
pub struct FamilyInput {
    /// Family JSON file.
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: usize,
}

#[derive(Debug, Args)]
pub struct GenerationArgs {
    #[command(flatten)]
    pub input: FamilyInput,
    /// Candidate degree.
    #[arg(long)]
    pub degree: usize,
    /// Target sizes, one per coordinate; a single value applies to all.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub input: FamilyInput,
    /// Sizes `k0..k1` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub window: String,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub q: usize,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[command(flatten)]
    pub input: FamilyInput,
    #[arg(long)]
    pub window: String,
    /// Degree bound of the polynomial.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// Points checked after interpolation.
    #[arg(long, default_value_t = 2)]
    pub holdout: usize,
}

/// Parses `a..b` (inclusive) or `a,b,c`.
pub fn parse_window(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("invalid window {s:?}; expected k0..k1 or a comma-separated list");
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    let ks = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    if ks.is_empty() || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad());
    }
    Ok(ks)
}
