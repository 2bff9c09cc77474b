//! Burst criterion, decay spectra and critical-distance scans for finite
//! arrays.
//!
//! The burst criterion is `Var(Γν/Γ₀) = (1/N) Σν (Γν²/Γ₀² − 1) > 1`. Since the
//! dissipative matrix `A = Γ/Γ₀` is real symmetric with unit diagonal,
//! `Σν (Γν/Γ₀)² = Tr A² = Σᵢⱼ Aᵢⱼ² = N + 2 Σ_β n_β (Γ_β/Γ₀)²`, so the variance
//! reduces to `(2/N) Σ_β n_β (Γ_β/Γ₀)²` over the displacement table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{lanczos_max, symmetric_eigenvalues, LanczosOptions};
use crate::error::{invalid, Error, Result};
use crate::greens::{pair_gamma_with, Polarization};
use crate::lattice::{displacement_table, Dimensionality, DisplacementTable, Lattice, LatticeSpec};
use crate::roots::bisect_predicate;
use crate::scalar::{sub, Real};

pub const DEFAULT_DENSE_CAP: usize = 5_000;
pub const DEFAULT_SPECTRUM_CAP: usize = 2_000;
pub const DEFAULT_ITERATIVE_CAP: usize = 100_000;

/// Variance of the collective decay rates for one geometry and spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySummary<T> {
    pub n_atoms: usize,
    pub d: T,
    pub variance: T,
    pub burst: bool,
    pub largest_rate: Option<T>,
}

impl<T: Real> DecaySummary<T> {
    fn new(n_atoms: usize, d: T, variance: T) -> Self {
        Self {
            n_atoms,
            d,
            variance,
            // strict inequality: exactly 1 is not a burst
            burst: variance > T::one(),
            largest_rate: None,
        }
    }
}

/// `Σ_β n_β (Γ_β/Γ₀)²` at spacing `d`.
fn weighted_square_sum<T: Real>(table: &DisplacementTable<T>, proj: &[[T; 3]; 3], d: T) -> T {
    table
        .entries
        .par_iter()
        .with_min_len(2048)
        .map(|e| {
            let g = pair_gamma_with(&e.displacement(d), proj);
            T::lit(e.multiplicity as f64) * g * g
        })
        .sum()
}

/// Variance in `O(table entries)` from the displacement table.
pub fn variance_fast<T: Real>(table: &DisplacementTable<T>, pol: &Polarization<T>, d: T) -> DecaySummary<T> {
    let n = table.n_atoms;
    if n == 0 {
        return DecaySummary::new(0, d, T::zero());
    }
    let sum = weighted_square_sum(table, &pol.projector(), d);
    DecaySummary::new(n, d, T::lit(2.0) * sum / T::from_count(n))
}

/// Row-major dissipative interaction matrix `Γ^{ij}/Γ₀`.
#[derive(Debug, Clone)]
pub struct DissipativeMatrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Real> DissipativeMatrix<T> {
    pub fn build(lattice: &Lattice<T>, pol: &Polarization<T>) -> Self {
        let n = lattice.n_atoms();
        let proj = pol.projector();
        let pos = &lattice.positions;
        let data: Vec<T> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| (0..n).map(move |j| pair_gamma_with(&sub(&pos[i], &pos[j]), &proj)))
            .collect();
        Self { n, data }
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// `Tr A² = Σᵢⱼ Aᵢⱼ²`.
    pub fn frobenius_sqr(&self) -> T {
        self.data.iter().map(|&x| x * x).sum()
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::TooManyAtoms { what, n, cap })
    } else {
        Ok(())
    }
}

/// Variance from the full matrix and `Tr A²`; the independent check on
/// [`variance_fast`].
pub fn variance_dense<T: Real>(lattice: &Lattice<T>, pol: &Polarization<T>) -> Result<DecaySummary<T>> {
    variance_dense_capped(lattice, pol, DEFAULT_DENSE_CAP)
}

pub fn variance_dense_capped<T: Real>(lattice: &Lattice<T>, pol: &Polarization<T>, cap: usize) -> Result<DecaySummary<T>> {
    let n = lattice.n_atoms();
    check_cap("dense variance", n, cap)?;
    let m = DissipativeMatrix::build(lattice, pol);
    let nf = T::from_count(n);
    let variance = m.frobenius_sqr() / nf - T::one();
    Ok(DecaySummary::new(n, lattice.spec.spacing, variance))
}

/// All collective decay rates `Γν/Γ₀`, descending.
pub fn decay_spectrum<T: Real>(lattice: &Lattice<T>, pol: &Polarization<T>) -> Result<Vec<T>> {
    decay_spectrum_capped(lattice, pol, DEFAULT_SPECTRUM_CAP)
}

pub fn decay_spectrum_capped<T: Real>(lattice: &Lattice<T>, pol: &Polarization<T>, cap: usize) -> Result<Vec<T>> {
    let n = lattice.n_atoms();
    check_cap("decay spectrum", n, cap)?;
    let m = DissipativeMatrix::build(lattice, pol);
    symmetric_eigenvalues(n, &m.data)
}

/// Variance implied by a set of decay rates.
pub fn spectrum_variance<T: Real>(rates: &[T]) -> T {
    let n = T::from_count(rates.len());
    rates.iter().map(|&g| g * g - T::one()).sum::<T>() / n
}

/// Matrix-free action of the dissipative matrix of a Bravais lattice.
///
/// `Aᵢⱼ` depends only on the integer offset between sites, so the distinct
/// values fit in a `(2n₁−1)(2n₂−1)(2n₃−1)` lookup filled from the
/// displacement table.
pub struct ToeplitzOperator<T> {
    lookup: Vec<T>,
    keys: Vec<isize>,
    centre: isize,
}

impl<T: Real> ToeplitzOperator<T> {
    pub fn new(lattice: &Lattice<T>, pol: &Polarization<T>) -> Result<Self> {
        let spec = &lattice.spec;
        let table = displacement_table(spec)?;
        let [n1, n2, n3] = spec.counts.map(|n| n as isize);
        let (s1, s2) = (2 * n1 - 1, (2 * n1 - 1) * (2 * n2 - 1));
        let len = (s2 * (2 * n3 - 1)) as usize;
        let centre = (n1 - 1) + s1 * (n2 - 1) + s2 * (n3 - 1);
        let proj = pol.projector();
        let mut lookup = vec![T::zero(); len];
        lookup[centre as usize] = proj[0][0] + proj[1][1] + proj[2][2];
        for e in &table.entries {
            let g = pair_gamma_with(&e.displacement(spec.spacing), &proj);
            let [a, b, c] = e.coefficients.map(|x| x as isize);
            let off = a + s1 * b + s2 * c;
            lookup[(centre + off) as usize] = g;
            lookup[(centre - off) as usize] = g;
        }
        let keys = (0..lattice.n_atoms())
            .map(|i| {
                let [a, b, c] = lattice.coefficients(i).map(|x| x as isize);
                a + s1 * b + s2 * c
            })
            .collect();
        Ok(Self { lookup, keys, centre })
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn apply(&self, x: &[T], y: &mut [T]) {
        // TODO: embed in a circulant and use FFTs once N ≳ 10⁴ becomes routine
        y.par_iter_mut().with_min_len(64).enumerate().for_each(|(i, yi)| {
            let base = self.centre + self.keys[i];
            *yi = self
                .keys
                .iter()
                .zip(x)
                .map(|(&kj, &xj)| self.lookup[(base - kj) as usize] * xj)
                .sum();
        });
    }
}

/// Largest collective decay rate via Lanczos on the matrix-free operator.
pub fn max_decay_rate<T: Real>(lattice: &Lattice<T>, pol: &Polarization<T>) -> Result<T> {
    max_decay_rate_with(lattice, pol, DEFAULT_ITERATIVE_CAP, &LanczosOptions::default())
}

pub fn max_decay_rate_with<T: Real>(
    lattice: &Lattice<T>,
    pol: &Polarization<T>,
    cap: usize,
    opts: &LanczosOptions,
) -> Result<T> {
    let n = lattice.n_atoms();
    check_cap("largest decay rate", n, cap)?;
    let op = ToeplitzOperator::new(lattice, pol)?;
    match lanczos_max(n, |x, y| op.apply(x, y), opts) {
        // tightly clustered band edges (long chains) stall Lanczos; small
        // enough systems fall back to a dense solve
        Err(Error::NoConvergence { .. }) if n <= DEFAULT_SPECTRUM_CAP => Ok(decay_spectrum(lattice, pol)?[0]),
        other => other,
    }
}

/// Every spacing in the window where the variance crosses 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalDistanceResult<T> {
    pub crossings: Vec<T>,
    pub d_max: Option<T>,
    pub scan_range: (T, T),
    pub coarse_step: T,
    /// Bisection resolution of each crossing.
    pub resolution: T,
    /// Whether the array is still superradiant at the upper end of the window,
    /// in which case `d_max` is only a lower bound.
    pub burst_at_upper_edge: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions<T> {
    pub d_lo: T,
    pub d_hi: T,
    pub coarse_step: T,
    pub resolution: T,
}

impl<T: Real> ScanOptions<T> {
    /// `[0.05, 1.2]λ₀` for chains and planes, `[0.5, 3.5]λ₀` for 3D, with a
    /// λ₀/200 grid and 10⁻⁵λ₀ bisection.
    pub fn default_for(dim: Dimensionality) -> Self {
        let (lo, hi) = match dim {
            Dimensionality::One | Dimensionality::Two => (0.05, 1.2),
            Dimensionality::Three => (0.5, 3.5),
        };
        Self {
            d_lo: T::lit(lo),
            d_hi: T::lit(hi),
            coarse_step: T::lit(1.0 / 200.0),
            resolution: T::lit(1e-5),
        }
    }

    pub fn window(d_lo: T, d_hi: T) -> Self {
        Self {
            d_lo,
            d_hi,
            coarse_step: T::lit(1.0 / 200.0),
            resolution: T::lit(1e-5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d_lo > T::zero() && self.d_hi > self.d_lo) {
            return invalid("scan window must satisfy 0 < d_lo < d_hi");
        }
        if !(self.coarse_step > T::zero() && self.resolution > T::zero()) {
            return invalid("scan step and resolution must be positive");
        }
        Ok(())
    }

    /// Coarse grid including both ends of the window.
    pub fn grid(&self) -> Vec<T> {
        let span = self.d_hi - self.d_lo;
        let steps = (span / self.coarse_step).ceil().to_usize().unwrap_or(1).max(1);
        (0..=steps)
            .map(|k| {
                if k == steps {
                    self.d_hi
                } else {
                    self.d_lo + self.coarse_step * T::from_count(k)
                }
            })
            .collect()
    }
}

/// Critical distances of `spec` (its spacing is ignored) over a window.
pub fn critical_distance_scan<T: Real>(
    spec: &LatticeSpec<T>,
    pol: &Polarization<T>,
    opts: &ScanOptions<T>,
) -> Result<CriticalDistanceResult<T>> {
    opts.validate()?;
    let table = displacement_table(spec)?;
    critical_distance_scan_table(&table, pol, opts)
}

/// As [`critical_distance_scan`], reusing a prebuilt table.
pub fn critical_distance_scan_table<T: Real>(
    table: &DisplacementTable<T>,
    pol: &Polarization<T>,
    opts: &ScanOptions<T>,
) -> Result<CriticalDistanceResult<T>> {
    opts.validate()?;
    let grid = opts.grid();
    let bursts: Vec<bool> = grid.par_iter().map(|&d| variance_fast(table, pol, d).burst).collect();
    let crossings: Vec<T> = grid
        .windows(2)
        .zip(bursts.windows(2))
        .filter(|(_, b)| b[0] != b[1])
        .map(|(g, _)| bisect_predicate(g[0], g[1], opts.resolution, |d| variance_fast(table, pol, d).burst))
        .collect();
    Ok(CriticalDistanceResult {
        d_max: crossings.last().copied(),
        crossings,
        scan_range: (opts.d_lo, opts.d_hi),
        coarse_step: opts.coarse_step,
        resolution: opts.resolution,
        burst_at_upper_edge: *bursts.last().unwrap_or(&false),
    })
}
