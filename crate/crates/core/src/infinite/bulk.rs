//! Infinite simple-cubic arrays with the regularized rate
//!
//! ```text
//! Γ(k)/Γ₀ = 6π/(k0 d³) Σ_g Δ(k0² − ((k+g)·p)²) / ((k0² − |k+g|²)² + Δ²k0⁴)
//! ```
//!
//! for a polarization `p` along one of the cubic axes.

use serde::{Deserialize, Serialize};

use super::reciprocal_bound;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// `Γ(k)/Γ₀` for an infinite cubic array, `k = [k_x, k_y, k_z]`.
///
/// Every `g` in the index box contributes: the Lorentzian replaces the sharp
/// light-cone restriction, and clipping it at `|k+g| = k0` would drop half of
/// the on-shell weight.
pub fn gamma_k_3d<T: Real>(k: [T; 3], d: T, delta: T, axis: Axis) -> Result<T> {
    if !(delta > T::zero()) {
        return invalid("regularization delta must be positive");
    }
    if !(d > T::zero()) {
        return invalid("spacing must be positive");
    }
    Ok(lorentzian_sum(k, d, delta, axis))
}

fn lorentzian_sum<T: Real>(k: [T; 3], d: T, delta: T, axis: Axis) -> T {
    let m = reciprocal_bound(d) as i64;
    let step = T::TAU() / d;
    let k2 = T::k0() * T::k0();
    let width = delta * delta * k2 * k2;
    let ax = axis.index();
    let mut sum = T::zero();
    for n in -m..=m {
        let qx = k[0] + step * T::lit(n as f64);
        for l in -m..=m {
            let qy = k[1] + step * T::lit(l as f64);
            for j in -m..=m {
                let qz = k[2] + step * T::lit(j as f64);
                let q = [qx, qy, qz];
                let off = k2 - (qx * qx + qy * qy + qz * qz);
                sum = sum + delta * (k2 - q[ax] * q[ax]) / (off * off + width);
            }
        }
    }
    T::lit(6.0) * T::PI() / (T::k0() * d.powi(3)) * sum
}

/// `∫_BZ Γ(k)/Γ₀ d³k` at fixed `Δ` for `d < λ₀/2`.
///
/// Spherical coordinates over one octant of the zone cube; the radius follows
/// `r² = k0²(1 + Δ tan t)`, which maps the shell Lorentzian to a flat integrand.
pub fn integrate_gamma_3d<T: Real>(d: T, delta: T, axis: Axis, rel_tol: f64) -> Result<T> {
    if !(d > T::zero() && d < T::lit(0.5)) {
        return invalid("cubic zone integral requires 0 < d < 0.5");
    }
    if !(delta > T::zero()) {
        return invalid("regularization delta must be positive");
    }
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol,
        max_intervals: 4_000,
    };
    let edge = T::PI() / d;
    let k2 = T::k0() * T::k0();
    let mut failure: Option<Error> = None;

    let mut radial = |theta: T, phi: T| -> Result<T> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let dir = [st * cp, st * sp, ct];
        let r_max = edge / dir.iter().fold(T::zero(), |m, &c| m.max(c.abs()));
        let t_lo = (-T::one() / delta).atan();
        let t_hi = ((r_max * r_max / k2 - T::one()) / delta).atan();
        let integrand = |t: T| {
            let tan = t.tan();
            let r = (k2 * (T::one() + delta * tan)).max(T::zero()).sqrt();
            if r == T::zero() {
                return T::zero();
            }
            let sec2 = T::one() + tan * tan;
            let dr_dt = k2 * delta * sec2 / (T::lit(2.0) * r);
            lorentzian_sum([r * dir[0], r * dir[1], r * dir[2]], d, delta, axis) * r * r * dr_dt
        };
        Ok(integrate(integrand, &[t_lo, T::zero(), t_hi], &opts)?.value * st)
    };

    let quarter = T::FRAC_PI_4();
    let polar = |phi: T, failure: &mut Option<Error>, radial: &mut dyn FnMut(T, T) -> Result<T>| -> T {
        // the cube face hit by the ray switches at θ = atan(1/max(cos φ, sin φ))
        let theta_edge = (T::one() / phi.cos().max(phi.sin())).atan();
        let pts = [T::zero(), theta_edge, T::FRAC_PI_2()];
        let res = integrate(
            |theta| match radial(theta, phi) {
                Ok(v) => v,
                Err(e) => {
                    *failure = Some(e);
                    T::zero()
                }
            },
            &pts,
            &opts,
        );
        match res {
            Ok(r) => r.value,
            Err(e) => {
                *failure = Some(e);
                T::zero()
            }
        }
    };
    let octant = integrate(
        |phi| polar(phi, &mut failure, &mut radial),
        &[T::zero(), quarter, T::FRAC_PI_2()],
        &opts,
    )?
    .value;
    match failure {
        Some(e) => Err(e),
        None => Ok(T::lit(8.0) * octant),
    }
}

/// Zone integral extrapolated to `Δ → 0` from `Δ ∈ {4, 2, 1}·10⁻⁴`.
pub fn extrapolated_integral<T: Real>(d: T, axis: Axis) -> Result<T> {
    let h = T::lit(super::DEFAULT_DELTA);
    let i1 = integrate_gamma_3d(d, h, axis, 1e-8)?;
    let i2 = integrate_gamma_3d(d, T::lit(2.0) * h, axis, 1e-8)?;
    let i4 = integrate_gamma_3d(d, T::lit(4.0) * h, axis, 1e-8)?;
    Ok((T::lit(8.0) * i1 - T::lit(6.0) * i2 + i4) / T::lit(3.0))
}
