//! Critical-distance models for large 2D and 3D arrays.
//!
//! Finite arrays sample the zone on a grid of spacing `~2π/(d√N)` per axis,
//! which cuts the light-cone divergence of `∫Γ²` at `k0(1 − ε)` with
//! `ε = Cλ₀/(d√N)` in 2D. The constants `B` (2D) and `B̃` (3D) collect the
//! convergent cross terms between distinct reciprocal vectors and are treated
//! as user-supplied constants.

use serde::{Deserialize, Serialize};

use super::plane::{truncated_log_integral, PlanarPolarization};
use crate::error::{invalid, Result};
use crate::roots::brent;
use crate::scalar::Real;

/// Sampling constant used when none is supplied.
pub const DEFAULT_SAMPLING_C: f64 = 2.0 / 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoDModelParams<T> {
    pub a: T,
    pub b: T,
    /// Sampling constant `C`.
    pub c: T,
    /// Reciprocal-lattice constant `B`.
    pub b_recip: T,
}

impl<T: Real> TwoDModelParams<T> {
    /// `a`, `b` of the polarization class, `C = 2/15`, and `B = 4` for
    /// out-of-plane dipoles (`B = 0` otherwise).
    pub fn preset(pol: PlanarPolarization) -> Self {
        let (a, b) = pol.coefficients();
        let b_recip = match pol {
            PlanarPolarization::OutOfPlane => T::lit(4.0),
            _ => T::zero(),
        };
        Self {
            a,
            b,
            c: T::lit(DEFAULT_SAMPLING_C),
            b_recip,
        }
    }

    pub fn with_c(mut self, c: T) -> Self {
        self.c = c;
        self
    }

    pub fn with_b_recip(mut self, b: T) -> Self {
        self.b_recip = b;
        self
    }

    /// `α = 9(a − 3b − 2b ln 2C + B)/32π`.
    pub fn alpha(&self) -> T {
        let (a, b) = (self.a, self.b);
        T::lit(9.0) * (a - T::lit(3.0) * b - T::lit(2.0) * b * (T::lit(2.0) * self.c).ln() + self.b_recip)
            / (T::lit(32.0) * T::PI())
    }

    /// `β = 9b/32π`.
    pub fn beta(&self) -> T {
        T::lit(9.0) * self.b / (T::lit(32.0) * T::PI())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > T::zero()) {
            return invalid("sampling constant C must be positive");
        }
        if !(self.b > T::zero()) || self.a < T::zero() {
            return invalid("model coefficients need a ≥ 0 and b > 0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelMode {
    /// Root of `9/(16πd²)(a + B + 4b·I(ε)) = 2` with `ε = C/(d√N)`.
    Transcendental,
    /// `d = √(α + β ln N)`.
    Asymptotic,
}

/// Left-hand side minus right-hand side of the 2D burst condition under the
/// sampling cutoff.
pub fn two_d_condition<T: Real>(d: T, n: T, params: &TwoDModelParams<T>) -> T {
    let eps = params.c / (d * n.sqrt());
    let integral = truncated_log_integral(eps);
    T::lit(9.0) / (T::lit(16.0) * T::PI() * d * d) * (params.a + params.b_recip + T::lit(4.0) * params.b * integral)
        - T::lit(2.0)
}

pub fn dcrit_2d_model<T: Real>(n: T, params: &TwoDModelParams<T>, mode: ModelMode) -> Result<T> {
    if !(n >= T::lit(4.0)) {
        return invalid("2D model needs N ≥ 4");
    }
    params.validate()?;
    match mode {
        ModelMode::Asymptotic => {
            let d2 = params.alpha() + params.beta() * n.ln();
            if d2 > T::zero() {
                Ok(d2.sqrt())
            } else {
                Err(crate::Error::NoRoot("asymptotic 2D law (α + β ln N ≤ 0)"))
            }
        }
        ModelMode::Transcendental => brent(
            |d| two_d_condition(d, n, params),
            T::lit(0.05),
            T::lit(5.0),
            T::lit(1e-8),
            "2D transcendental equation",
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeDModelParams<T> {
    /// Sampling constant `C`.
    pub c: T,
    /// Cross-term constant `B̃`.
    pub b_offset: T,
    /// Finite-lattice fit `d = qN^p`.
    pub q: T,
    pub p: T,
}

impl<T: Real> ThreeDModelParams<T> {
    pub fn cubic() -> Self {
        Self {
            c: T::lit(DEFAULT_SAMPLING_C),
            b_offset: T::zero(),
            q: T::lit(0.255),
            p: T::lit(0.178),
        }
    }

    pub fn tetrahedral() -> Self {
        Self {
            q: T::lit(0.268),
            p: T::lit(0.180),
            ..Self::cubic()
        }
    }

    pub fn with_c(mut self, c: T) -> Self {
        self.c = c;
        self
    }

    pub fn with_b_offset(mut self, b: T) -> Self {
        self.b_offset = b;
        self
    }

    /// `Ā = √(3/(320π³C))`.
    pub fn a_bar(&self) -> T {
        (T::lit(3.0) / (T::lit(320.0) * T::PI().powi(3) * self.c)).sqrt()
    }

    pub fn fit_law(&self, n: T) -> T {
        self.q * n.powf(self.p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > T::zero()) {
            return invalid("sampling constant C must be positive");
        }
        if !(self.p > T::zero()) {
            return invalid("fit exponent p must be positive");
        }
        Ok(())
    }
}

/// Largest real root of `t³ + p t + q = 0`.
pub fn largest_real_root_depressed<T: Real>(p: T, q: T) -> T {
    let three = T::lit(3.0);
    let disc = q * q / T::lit(4.0) + p * p * p / T::lit(27.0);
    if disc < T::zero() {
        // three real roots
        let m = T::lit(2.0) * (-p / three).sqrt();
        let arg = (three * q / (p * m)).max(-T::one()).min(T::one());
        m * (arg.acos() / three).cos()
    } else {
        let s = disc.sqrt();
        (-q / T::lit(2.0) + s).cbrt() + (-q / T::lit(2.0) - s).cbrt()
    }
}

/// `d0 = Ā N^{1/6}` below `λ₀/2`; otherwise the largest root of
/// `d³ − d0² d − 3B̃/(320π³) = 0`.
pub fn dcrit_3d_model<T: Real>(n: T, params: &ThreeDModelParams<T>) -> Result<T> {
    if !(n >= T::lit(8.0)) {
        return invalid("3D model needs N ≥ 8");
    }
    params.validate()?;
    let d0 = params.a_bar() * n.powf(T::one() / T::lit(6.0));
    if d0 < T::lit(0.5) {
        return Ok(d0);
    }
    let q = -T::lit(3.0) * params.b_offset / (T::lit(320.0) * T::PI().powi(3));
    Ok(largest_real_root_depressed(-d0 * d0, q))
}
