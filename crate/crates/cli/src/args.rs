//! Command-line flags. Every field is optional so that flags can be layered
//! over a config file; defaults are filled in afterwards and the filled
//! struct is what gets recorded in output headers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "dicke", version, about = "Critical distances for Dicke superradiance in ordered atomic arrays")]
pub struct Cli {
    /// JSON config file (keys are flag names); a previous output file is also
    /// accepted, its header is used
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decay spectra and variance over a grid of spacings (dense, N ≤ 2000)
    Spectrum(SpectrumArgs),
    /// Critical-distance scans, optionally swept over size or angles
    Scan(ScanArgs),
    /// Band decay rates of infinite arrays, sum rule and critical-distance models
    Infinite(InfiniteArgs),
    /// Least-squares fit of a column pair from a CSV file
    Fit(FitArgs),
    /// Run the invariant suite
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryKind {
    Chain,
    Square,
    Rhombic,
    Triangular,
    Cubic,
    Tetrahedral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisArg {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitKind {
    PowerLaw,
    SqrtLog,
    Saturation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Linear,
    Circular,
}

/// Flags shared by every command.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CommonArgs {
    /// Output file (stdout when absent)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct GeometryArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryKind>,
    /// Atoms per axis (chain length for chains)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nz: Option<usize>,
    /// Planar lattice angle in degrees (overrides the geometry preset)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_angle: Option<f64>,
    /// perp | par | out-of-plane | in-plane-linear | in-plane-circular |
    /// angle=θ,φ | circular-angle=θ,φ (degrees)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pol: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: GeometryArgs,
    /// Single spacing in λ₀
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Spacing window `lo:hi` in λ₀
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_range: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_step: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: GeometryArgs,
    /// Scan window `lo:hi` in λ₀
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_range: Option<String>,
    /// Coarse grid step in λ₀
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_step: Option<f64>,
    /// Bisection resolution in λ₀
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    /// Sweep over atoms per axis, comma separated
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Sweep the polarization angle from the normal, `lo:hi:step` in degrees
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pol_angle_sweep: Option<String>,
    /// Azimuth for the polarization sweep, degrees
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_kind: Option<SweepKind>,
    /// Sweep the planar lattice angle, `lo:hi:step` in degrees
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_angle_sweep: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct InfiniteArgs {
    /// chain, square or cubic
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryKind>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pol: Option<String>,
    /// Polarization axis for cubic arrays
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<AxisArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Grid points per axis over the first Brillouin zone
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_points: Option<usize>,
    /// Regularization for cubic arrays
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Total atom number for the 2D/3D critical-distance models
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_total: Option<f64>,
    /// Sampling constant C of the models
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling_c: Option<f64>,
    /// Reciprocal-lattice constant (B in 2D, B̃ in 3D)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_const: Option<f64>,
    /// Skip the sum-rule quadrature
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_sum_rule: Option<bool>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct FitArgs {
    /// CSV file (lines starting with `#` are skipped)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<FitKind>,
    /// Abscissa column
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    /// Ordinate column
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

/// Field-wise `self.or(file)`.
pub trait Layer {
    fn layer(self, file: Self) -> Self;
}

macro_rules! layered {
    ($ty:ty { $($field:ident),* } $(; $($nested:ident),*)?) => {
        impl Layer for $ty {
            fn layer(self, file: Self) -> Self {
                Self {
                    $($field: self.$field.or(file.$field),)*
                    $($($nested: self.$nested.layer(file.$nested),)*)?
                }
            }
        }
    };
}

layered!(CommonArgs { out, format, threads });
layered!(GeometryArgs { geometry, n, nx, ny, nz, lattice_angle, pol });
layered!(SpectrumArgs { d, d_range, d_step }; geometry, common);
layered!(ScanArgs { d_range, d_step, resolution, n_list, pol_angle_sweep, phi, sweep_kind, lattice_angle_sweep }; geometry, common);
layered!(InfiniteArgs { geometry, pol, axis, d, k_points, delta, n_total, sampling_c, b_const, no_sum_rule }; common);
layered!(FitArgs { input, model, x, y }; common);
layered!(CheckArgs {}; common);

/// Parses `lo:hi` (or `lo,hi`).
pub fn parse_range(s: &str) -> CliResult<(f64, f64)> {
    let parts = split_numbers(s)?;
    match parts.as_slice() {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(CliError::validation(format!("expected `lo:hi` with lo < hi, got `{s}`"))),
    }
}

/// Parses `lo:hi:step` into the inclusive grid.
pub fn parse_sweep(s: &str) -> CliResult<Vec<f64>> {
    let parts = split_numbers(s)?;
    let [lo, hi, step] = parts.as_slice() else {
        return Err(CliError::validation(format!("expected `lo:hi:step`, got `{s}`")));
    };
    if !(step > &0.0 && hi >= lo) {
        return Err(CliError::validation(format!("sweep `{s}` needs lo ≤ hi and step > 0")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + step * i as f64).collect())
}

fn split_numbers(s: &str) -> CliResult<Vec<f64>> {
    s.split([':', ','])
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::validation(format!("`{p}` is not a number")))
        })
        .collect()
}
