//! Minimal conditions for Dicke superradiance in ordered atomic arrays.
//!
//! Lengths are measured in units of the resonance wavelength λ₀ (so the
//! free-space wavenumber is `k0 = 2π`) and rates in units of the single-atom
//! decay rate Γ₀. Every numerical routine is generic over [`Real`] (`f32` or
//! `f64`); the `*64` aliases below fix the common double-precision case.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigen;
pub mod error;
pub mod finite;
pub mod fit;
pub mod greens;
pub mod infinite;
pub mod lattice;
pub mod quadrature;
pub mod roots;
pub mod scalar;

pub use error::{Error, Result};
pub use finite::{
    critical_distance_scan, decay_spectrum, max_decay_rate, variance_dense, variance_fast, CriticalDistanceResult,
    DecaySummary, ScanOptions,
};
pub use fit::{fit_power_law, fit_saturation, fit_sqrt_log, FitModel, FitResult};
pub use greens::{free_space_green, pair_gamma, pair_interaction, PairRates, Polarization};
pub use infinite::{
    burst_measure_1d, critical_distance_1d, critical_distance_1d_exact, dcrit_2d_model, dcrit_3d_model, gamma_k_1d,
    gamma_k_2d, gamma_k_3d, sum_rule_check, Axis, ChainPolarization, InfiniteRateQuery, ModelMode, PlanarPolarization,
    PolClass, SumRuleReport, ThreeDModelParams, TwoDModelParams,
};
pub use lattice::{
    build_lattice, displacement_table, polarization_from_angles, Cell3d, Dimensionality, DisplacementTable, Lattice,
    LatticeSpec, PolarizationKind,
};
pub use scalar::{Real, Vec3};

pub type Polarization64 = Polarization<f64>;
pub type PairRates64 = PairRates<f64>;
pub type LatticeSpec64 = LatticeSpec<f64>;
pub type Lattice64 = Lattice<f64>;
pub type DisplacementTable64 = DisplacementTable<f64>;
pub type DecaySummary64 = DecaySummary<f64>;
pub type CriticalDistanceResult64 = CriticalDistanceResult<f64>;
pub type FitResult64 = FitResult<f64>;
pub type InfiniteRateQuery64 = InfiniteRateQuery<f64>;
pub type TwoDModelParams64 = TwoDModelParams<f64>;
pub type ThreeDModelParams64 = ThreeDModelParams<f64>;
pub type Polarization32 = Polarization<f32>;
pub type LatticeSpec32 = LatticeSpec<f32>;

/// Crate version, recorded in output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
