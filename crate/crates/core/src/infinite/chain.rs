//! Infinite chains along `ẑ`.
//!
//! ```text
//! Γ∥(kz)/Γ₀ = 3π/(2k0 d) Σ_g (1 − (kz+g)²/k0²)
//! Γ⊥(kz)/Γ₀ = 3π/(4k0 d) Σ_g (1 + (kz+g)²/k0²)
//! ```
//!
//! with `g = 2πn/d` restricted to `|kz + g| ≤ k0`. The burst condition for an
//! infinite chain is `∫_BZ Γ²/Γ₀² dkz > 4π/d`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::reciprocal_bound;
use crate::error::Result;
use crate::quadrature::{breakpoints, integrate, QuadOptions};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainPolarization {
    /// Dipoles along the chain axis.
    Parallel,
    /// Dipoles perpendicular to the chain.
    Perpendicular,
}

impl ChainPolarization {
    fn prefactor<T: Real>(self, d: T) -> T {
        let denom = match self {
            ChainPolarization::Parallel => T::lit(2.0),
            ChainPolarization::Perpendicular => T::lit(4.0),
        };
        T::lit(3.0) * T::PI() / (denom * T::k0() * d)
    }

    fn profile<T: Real>(self, q: T) -> T {
        let x = q * q / (T::k0() * T::k0());
        match self {
            ChainPolarization::Parallel => T::one() - x,
            ChainPolarization::Perpendicular => T::one() + x,
        }
    }
}

/// Reciprocal vectors `g = 2πn/d` with `|kz + g| ≤ k0`, as shifted momenta
/// `kz + g`.
fn light_cone_momenta<T: Real>(kz: T, d: T) -> impl Iterator<Item = T> {
    let m = reciprocal_bound(d) as i64;
    let step = T::TAU() / d;
    (-m..=m)
        .map(move |n| kz + step * T::lit(n as f64))
        .filter(|q| q.abs() <= T::k0())
}

/// `Γ(kz)/Γ₀` for an infinite chain with spacing `d`.
pub fn gamma_k_1d<T: Real>(kz: T, d: T, pol: ChainPolarization) -> T {
    let sum = light_cone_momenta(kz, d).fold(T::zero(), |acc, q| acc + pol.profile(q));
    pol.prefactor(d) * sum
}

/// Band-edge points in the first zone where a folded branch enters the light
/// cone; the integrand has kinks there.
fn kinks<T: Real>(d: T) -> Vec<T> {
    let m = reciprocal_bound(d) as i64;
    let step = T::TAU() / d;
    let mut out = Vec::new();
    for n in -m..=m {
        for edge in [T::k0(), -T::k0()] {
            out.push(edge - step * T::lit(n as f64));
        }
    }
    out
}

/// `∫_BZ Γ(kz)/Γ₀ dkz` by quadrature.
pub fn integrate_gamma_1d<T: Real>(d: T, pol: ChainPolarization, opts: &QuadOptions) -> Result<T> {
    let edge = T::PI() / d;
    let pts = breakpoints(-edge, edge, kinks(d));
    Ok(integrate(|k| gamma_k_1d(k, d, pol), &pts, opts)?.value)
}

/// `∫_BZ Γ(kz)²/Γ₀² dkz` by quadrature.
pub fn integrate_gamma_sq_1d<T: Real>(d: T, pol: ChainPolarization, opts: &QuadOptions) -> Result<T> {
    let edge = T::PI() / d;
    let pts = breakpoints(-edge, edge, kinks(d));
    Ok(integrate(|k| gamma_k_1d(k, d, pol).powi(2), &pts, opts)?.value)
}

/// Closed form of `∫ Γ²` for `d ≤ λ₀/2`, where only `g = 0` contributes:
/// `(21/40k0)(2π/d)²` (⊥) and `(3/5k0)(2π/d)²` (∥).
pub fn squared_integral_single_zone<T: Real>(d: T, pol: ChainPolarization) -> T {
    let c = match pol {
        ChainPolarization::Perpendicular => T::lit(21.0 / 40.0),
        ChainPolarization::Parallel => T::lit(3.0 / 5.0),
    };
    c / T::k0() * (T::TAU() / d).powi(2)
}

/// Closed form of `∫ Γ²` for `λ₀/2 ≤ d ≤ λ₀`, where `g ∈ {0, ±2π/d}` contribute.
///
/// With `x = λ₀/(2d)`:
///
/// ```text
/// ⊥: 2π²/(k0 d²) · (−3/5 x⁵ − 3x³ + 6x² − 9/2 x + 63/20)
/// ∥: 2π²/(k0 d²) · (−12/5 x⁵ + 12x³ − 12x² + 18/5)
/// ```
pub fn squared_integral_two_zone<T: Real>(d: T, pol: ChainPolarization) -> T {
    let x = T::lit(0.5) / d;
    let p = |c: &[f64]| c.iter().rev().fold(T::zero(), |acc, &ci| acc * x + T::lit(ci));
    let poly = match pol {
        // coefficients of x⁰ … x⁵
        ChainPolarization::Perpendicular => p(&[63.0 / 20.0, -4.5, 6.0, -3.0, 0.0, -0.6]),
        ChainPolarization::Parallel => p(&[18.0 / 5.0, 0.0, -12.0, 12.0, 0.0, -12.0 / 5.0]),
    };
    T::lit(2.0) * T::PI() * T::PI() / (T::k0() * d * d) * poly
}

/// Upper bounds on `∫ Γ²` used for `d > λ₀`:
/// `21π²/(5k0d²) + 63π/(48d)` (⊥) and `24π²/(5k0d²) + 3π/(4d)` (∥).
///
/// The ∥ expression is not an upper bound beyond `d ≈ 1.92λ₀`: the exact
/// integral tends to `2π/d` while the bound tends to `3π/(4d)`.
pub fn squared_integral_bound<T: Real>(d: T, pol: ChainPolarization) -> T {
    let pi = T::PI();
    match pol {
        ChainPolarization::Perpendicular => {
            T::lit(21.0) * pi * pi / (T::lit(5.0) * T::k0() * d * d) + T::lit(63.0) * pi / (T::lit(48.0) * d)
        }
        ChainPolarization::Parallel => {
            T::lit(24.0) * pi * pi / (T::lit(5.0) * T::k0() * d * d) + T::lit(3.0) * pi / (T::lit(4.0) * d)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegralMethod {
    SingleZoneClosedForm,
    TwoZonePolynomial,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstMeasure1d<T> {
    /// `∫ Γ²/Γ₀² dkz` over the first zone.
    pub integral: T,
    /// `integral / (4π/d)`; above 1 the infinite chain bursts.
    pub ratio: T,
    pub method: IntegralMethod,
    /// Analytic upper bound on the integral, reported for `d > λ₀`.
    pub upper_bound: Option<T>,
}

/// Left-hand side over right-hand side of the infinite-chain burst condition.
pub fn burst_measure_1d<T: Real>(d: T, pol: ChainPolarization) -> Result<BurstMeasure1d<T>> {
    if !(d > T::zero()) {
        return crate::error::invalid("spacing must be positive");
    }
    let half = T::lit(0.5);
    let (integral, method, upper_bound) = if d <= half {
        (squared_integral_single_zone(d, pol), IntegralMethod::SingleZoneClosedForm, None)
    } else if d <= T::one() {
        (squared_integral_two_zone(d, pol), IntegralMethod::TwoZonePolynomial, None)
    } else {
        let opts = QuadOptions {
            rel_tol: 1e-12,
            ..Default::default()
        };
        (
            integrate_gamma_sq_1d(d, pol, &opts)?,
            IntegralMethod::Quadrature,
            Some(squared_integral_bound(d, pol)),
        )
    };
    Ok(BurstMeasure1d {
        integral,
        ratio: integral * d / (T::lit(4.0) * T::PI()),
        method,
        upper_bound,
    })
}

/// Exact infinite-chain critical distance in units of λ₀: 3/10 (∥), 21/80 (⊥).
pub fn critical_distance_1d_exact(pol: ChainPolarization) -> Ratio<i64> {
    match pol {
        ChainPolarization::Parallel => Ratio::new(3, 10),
        ChainPolarization::Perpendicular => Ratio::new(21, 80),
    }
}

pub fn critical_distance_1d<T: Real>(pol: ChainPolarization) -> T {
    let r = critical_distance_1d_exact(pol);
    T::lit(*r.numer() as f64) / T::lit(*r.denom() as f64)
}
