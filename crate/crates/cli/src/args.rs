use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pinwheel::correlation::{Estimator, Weights};
use pinwheel::tiling::Seed;

/// Pinwheel tilings, their pair correlations and radial diffraction.
#[derive(Debug, Parser)]
#[command(name = "pinwheel", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inflate a seed and write its control points to points.csv.
    Generate(GenerateArgs),
    /// Print the orientation census f±_n(k).
    Census(CensusArgs),
    /// Estimate the radial autocorrelation of a point file into autocorr.csv.
    Autocorr(AutocorrArgs),
    /// Evaluate the radial intensity I(k) into intensity.csv.
    Diffract(DiffractArgs),
    /// Integrate rings of an intensity profile into peaks.csv and fits.csv.
    Peaks(PeaksArgs),
    /// Write the square lattice powder rings to powder.csv.
    Powder(PowderArgs),
    /// Run generate, autocorr, diffract, peaks and powder in one go.
    Pipeline(PipelineArgs),
    /// Compare profiles from several inflation depths in convergence.csv.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Directory receiving the output files and manifest.json.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker threads; defaults to the number of available cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TilingArgs {
    /// Inflation steps.
    #[arg(long, default_value_t = 7)]
    pub steps: u32,
    /// Seed patch: single or census-pair.
    #[arg(long, default_value_t = Seed::Single)]
    pub seed: Seed,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelationArgs {
    /// Weights of the two chiralities as a+,a-.
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub weights: Weights,
    /// Largest pair distance.
    #[arg(long, default_value_t = 30.0)]
    pub rmax: f64,
    /// all-pairs or eroded-core.
    #[arg(long, default_value_t = Estimator::ErodedCore)]
    pub estimator: Estimator,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Largest wave number.
    #[arg(long, default_value_t = 4.0)]
    pub kmax: f64,
    /// Wave number spacing.
    #[arg(long, default_value_t = 0.001)]
    pub dk: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RingArgs {
    /// Largest k² of the rings examined.
    #[arg(long, default_value_t = 100)]
    pub mmax: u64,
    /// Half-width of each ring window.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub tiling: TilingArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    /// Inflation steps n.
    #[arg(long, default_value_t = 7)]
    pub steps: u32,
    /// Seed patch: single or census-pair.
    #[arg(long, default_value_t = Seed::CensusPair)]
    pub seed: Seed,
}

#[derive(Debug, Args)]
pub struct AutocorrArgs {
    /// Control points as written by generate.
    #[arg(long, default_value = "points.csv")]
    pub points: PathBuf,
    #[command(flatten)]
    pub correlation: CorrelationArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DiffractArgs {
    /// Autocorrelation as written by autocorr.
    #[arg(long, default_value = "autocorr.csv")]
    pub autocorr: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PeaksArgs {
    /// Intensity profile as written by diffract.
    #[arg(long, default_value = "intensity.csv")]
    pub intensity: PathBuf,
    #[command(flatten)]
    pub rings: RingArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PowderArgs {
    /// Largest k² of the rings.
    #[arg(long, default_value_t = 100)]
    pub mmax: u64,
    /// Rescale so that the ring at k = 1 has this weight.
    #[arg(long)]
    pub first_ring: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub tiling: TilingArgs,
    #[command(flatten)]
    pub correlation: CorrelationArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub rings: RingArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    /// Inflation depths, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [5, 6, 7])]
    pub steps: Vec<u32>,
    /// Seed patch: single or census-pair.
    #[arg(long, default_value_t = Seed::Single)]
    pub seed: Seed,
    /// Weights of the two chiralities as a+,a-.
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub weights: Weights,
    /// Largest pair distance at the deepest level; shallower levels use
    /// rmax / √5 per step.
    #[arg(long, default_value_t = 30.0)]
    pub rmax: f64,
    /// all-pairs or eroded-core.
    #[arg(long, default_value_t = Estimator::ErodedCore)]
    pub estimator: Estimator,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: Common,
}
