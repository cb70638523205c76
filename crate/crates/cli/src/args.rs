use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "dnormal",
    version,
    about = "Double-normal graphs and acute point sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Build the double-normal graph of a point file and check a property.
    Verify(VerifyArgs),
    /// Write one of the named configurations.
    Construct(ConstructArgs),
    /// Print lower and upper bounds on the density parameter per dimension.
    Bounds(BoundsArgs),
    /// Sample random configurations and report edge maxima as CSV.
    Density(DensityArgs),
    /// Anneal towards a large acute point set.
    Search(SearchArgs),
    /// Look for 2^dim + 1 points with every angle at most pi/2 + delta.
    Probe(ProbeArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Standard,
    Strict,
    Almost,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// Every pair is an edge.
    Complete,
    /// Every angle is acute.
    Acute,
    /// No angle is obtuse.
    Nonobtuse,
}

#[derive(Debug, Args, Serialize)]
pub struct PredicateArgs {
    #[arg(long, value_enum, default_value = "standard")]
    pub mode: ModeArg,
    /// Absolute and relative comparison tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Angle slack in radians for `--mode almost`.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Point file (.json or .csv).
    pub points: PathBuf,
    #[command(flatten)]
    pub predicate: PredicateArgs,
    #[arg(long, value_enum)]
    pub expect: Option<Expectation>,
    /// Write the graph and certificate as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[command(subcommand)]
    pub kind: ConstructKind,
    /// Output JSON file; printed to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ConstructKind {
    /// Vertices of the unit cube {0,1}^d.
    Hypercube {
        #[arg(long)]
        dim: usize,
    },
    /// m pairwise equidistant points in dimension m - 1.
    Simplex {
        #[arg(long)]
        m: usize,
    },
    /// A random acute subset of the cube.
    RandomAcute {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        rounds: usize,
    },
    /// Strict double-normal supergraph of K_m(N) from m acute points.
    KmEmbedding(KmArgs),
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false, id = "km_input")]
pub struct KmInput {
    /// Acute input points (.json or .csv).
    #[arg(long)]
    pub acute_input: Option<PathBuf>,
    /// Use the regular simplex with this many vertices.
    #[arg(long)]
    pub simplex: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct KmArgs {
    #[command(flatten)]
    pub input: KmInput,
    /// Points per part.
    #[arg(long, default_value_t = 2)]
    pub parts_size: usize,
    /// Fixed epsilon instead of the automatic choice.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 60)]
    pub max_halvings: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=64))]
    pub from: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=64))]
    pub to: u64,
    /// Results file of verified acute sets that may raise the lower bound.
    #[arg(long)]
    pub results: Option<PathBuf>,
    /// Text table path; a JSON twin is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub dim: u64,
    /// Comma-separated point counts for random sampling.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub predicate: PredicateArgs,
    /// Add embedding rows built from the regular simplex with this many vertices.
    #[arg(long)]
    pub km_simplex: Option<usize>,
    /// Part sizes for the embedding rows.
    #[arg(long, value_delimiter = ',')]
    pub km_sizes: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
pub enum InitArg {
    UnitCube,
    CubeVertices,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub target: usize,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 20_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.05)]
    pub temperature: f64,
    #[arg(long, default_value_t = 0.9995)]
    pub cooling: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, value_enum, default_value = "unit-cube")]
    pub init: InitArg,
    /// Append-only results file receiving verified acute sets.
    #[arg(long, default_value = "acute_sets.jsonl")]
    pub results: PathBuf,
    /// Write the full search result as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 20_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
