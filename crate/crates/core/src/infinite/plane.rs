//! Infinite square arrays in the y–z plane.
//!
//! ```text
//! Γ(k)/Γ₀ = 3π/(k0³ d²) Σ_g f(k+g) / √(k0² − |k+g|²)
//! ```
//!
//! with `f(q) = |q|²` (out-of-plane), `k0² − q_z²` (in-plane linear along `ẑ`)
//! or `k0² − |q|²/2` (in-plane circular). Wavevectors are `[k_z, k_y]`.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use super::reciprocal_bound;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlanarPolarization {
    OutOfPlane,
    InPlaneLinear,
    InPlaneCircular,
}

impl PlanarPolarization {
    pub const ALL: [PlanarPolarization; 3] = [
        PlanarPolarization::OutOfPlane,
        PlanarPolarization::InPlaneLinear,
        PlanarPolarization::InPlaneCircular,
    ];

    /// `(a, b)` in `∫Γ² ≈ 9π/(4d⁴) (a + 4b·I(ε))`.
    pub fn coefficients<T: Real>(self) -> (T, T) {
        match self {
            PlanarPolarization::OutOfPlane => (T::zero(), T::lit(0.5)),
            PlanarPolarization::InPlaneLinear => (T::one(), T::lit(3.0 / 16.0)),
            PlanarPolarization::InPlaneCircular => (T::one(), T::lit(1.0 / 8.0)),
        }
    }

    fn numerator<T: Real>(self, q: [T; 2]) -> T {
        let k2 = T::k0() * T::k0();
        let q2 = q[0] * q[0] + q[1] * q[1];
        match self {
            PlanarPolarization::OutOfPlane => q2,
            PlanarPolarization::InPlaneLinear => k2 - q[0] * q[0],
            PlanarPolarization::InPlaneCircular => k2 - q2 / T::lit(2.0),
        }
    }
}

fn prefactor<T: Real>(d: T) -> T {
    T::lit(3.0) * T::PI() / (T::k0().powi(3) * d * d)
}

/// `Γ(k)/Γ₀` for an infinite square array. Errors when some `|k+g|` lies on
/// the light cone, where the rate diverges.
pub fn gamma_k_2d<T: Real>(k: [T; 2], d: T, pol: PlanarPolarization) -> Result<T> {
    let m = reciprocal_bound(d) as i64;
    let step = T::TAU() / d;
    let k0 = T::k0();
    let k2 = k0 * k0;
    let mut sum = T::zero();
    for n in -m..=m {
        for l in -m..=m {
            let q = [k[0] + step * T::lit(n as f64), k[1] + step * T::lit(l as f64)];
            let qn = (q[0] * q[0] + q[1] * q[1]).sqrt();
            if (qn - k0).abs() <= T::lit(1e-12) * k0 {
                return Err(Error::LightConeContact);
            }
            if qn < k0 {
                sum = sum + pol.numerator(q) / (k2 - qn * qn).sqrt();
            }
        }
    }
    Ok(prefactor(d) * sum)
}

fn quarter_breaks<T: Real>() -> Vec<T> {
    (0..=4).map(|i| T::FRAC_PI_2() * T::lit(i as f64)).collect()
}

/// `∫_BZ Γ(k)/Γ₀ d²k` for `d < λ₀/2`, where the light-cone disk lies inside the
/// zone. Polar coordinates with `|k| = k0 sin u` remove the edge singularity.
pub fn integrate_gamma_2d<T: Real>(d: T, pol: PlanarPolarization) -> Result<T> {
    if !(d > T::zero() && d < T::lit(0.5)) {
        return invalid("planar zone integral requires 0 < d < 0.5");
    }
    let failure = Cell::new(None);
    let inner_opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        max_intervals: 2_000,
    };
    let outer_opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-11,
        max_intervals: 2_000,
    };
    let k0 = T::k0();
    let radial = |phi: T| -> T {
        let (s, c) = phi.sin_cos();
        let integrand = |u: T| {
            let r = k0 * u.sin();
            match gamma_k_2d([r * c, r * s], d, pol) {
                Ok(g) => g * r * k0 * u.cos(),
                Err(e) => {
                    failure.set(Some(e));
                    T::zero()
                }
            }
        };
        match integrate(integrand, &[T::zero(), T::FRAC_PI_2()], &inner_opts) {
            Ok(r) => r.value,
            Err(e) => {
                failure.set(Some(e));
                T::zero()
            }
        }
    };
    let value = integrate(radial, &quarter_breaks(), &outer_opts)?.value;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// `I(ε) = ∫₀^{1−ε} x⁵/(1−x²) dx = −ε⁴/4 + ε³ − 2ε² + 2ε − 3/4 − ½ ln(2ε − ε²)`,
/// zero for `ε ≥ 1`.
pub fn truncated_log_integral<T: Real>(eps: T) -> T {
    if eps >= T::one() {
        return T::zero();
    }
    let e = eps;
    -e.powi(4) / T::lit(4.0) + e.powi(3) - T::lit(2.0) * e * e + T::lit(2.0) * e
        - T::lit(0.75)
        - T::lit(0.5) * (T::lit(2.0) * e - e * e).ln()
}

/// Closed form of `∫_{|k| < k0(1−ε)} Γ²/Γ₀² d²k` for `d < λ₀/2`:
/// `9π/(4d⁴) (a(1−ε)² + 4b·I(ε))`.
pub fn truncated_squared_integral_closed<T: Real>(d: T, pol: PlanarPolarization, eps: T) -> T {
    let (a, b) = pol.coefficients::<T>();
    let eps = eps.min(T::one());
    let one_minus = T::one() - eps;
    T::lit(9.0) * T::PI() / (T::lit(4.0) * d.powi(4))
        * (a * one_minus * one_minus + T::lit(4.0) * b * truncated_log_integral(eps))
}

/// `∫_{|k| < k0(1−ε)} Γ²/Γ₀² d²k` by quadrature, for `d < λ₀/2`. The radial
/// coordinate is `|k| = k0(1 − e^{−s})`, which flattens the logarithmic
/// growth toward the cutoff.
pub fn truncated_squared_integral<T: Real>(d: T, pol: PlanarPolarization, eps: T) -> Result<T> {
    if !(d > T::zero() && d < T::lit(0.5)) {
        return invalid("planar zone integral requires 0 < d < 0.5");
    }
    if !(eps > T::zero() && eps < T::one()) {
        return invalid("cutoff must lie in (0, 1)");
    }
    let failure = Cell::new(None);
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-11,
        max_intervals: 2_000,
    };
    let k0 = T::k0();
    let s_max = -eps.ln();
    let radial = |phi: T| -> T {
        let (sn, c) = phi.sin_cos();
        let integrand = |s: T| {
            let tail = (-s).exp();
            let r = k0 * (T::one() - tail);
            match gamma_k_2d([r * c, r * sn], d, pol) {
                Ok(g) => g * g * r * k0 * tail,
                Err(e) => {
                    failure.set(Some(e));
                    T::zero()
                }
            }
        };
        match integrate(integrand, &[T::zero(), s_max], &opts) {
            Ok(r) => r.value,
            Err(e) => {
                failure.set(Some(e));
                T::zero()
            }
        }
    };
    let value = integrate(radial, &quarter_breaks(), &opts)?.value;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
