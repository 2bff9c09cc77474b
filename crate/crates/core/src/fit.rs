//! Least-squares fits of critical-distance and peak-rate data in linearizing
//! coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Minimum number of data points accepted by every fit.
pub const MIN_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FitModel<T> {
    /// `y = q x^p`, fitted as `ln y` against `ln x`.
    PowerLaw { q: T, p: T },
    /// `y = √(α + β ln x)`, fitted as `y²` against `ln x`.
    SqrtLog { alpha: T, beta: T },
    /// `y = y∞ (1 − c/x²)`, fitted as `y` against `1/x²`.
    Saturation { y_inf: T, c: T },
}

impl<T: Real> FitModel<T> {
    pub fn predict(&self, x: T) -> T {
        match *self {
            FitModel::PowerLaw { q, p } => q * x.powf(p),
            FitModel::SqrtLog { alpha, beta } => (alpha + beta * x.ln()).max(T::zero()).sqrt(),
            FitModel::Saturation { y_inf, c } => y_inf * (T::one() - c / (x * x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult<T> {
    #[serde(flatten)]
    pub model: FitModel<T>,
    /// RMS residual in the fitted (linearized) coordinates.
    pub residual_rms: T,
    pub r_squared: T,
    pub points: usize,
}

struct Line<T> {
    intercept: T,
    slope: T,
    rms: T,
    r_squared: T,
}

fn line_fit<T: Real>(u: &[T], v: &[T]) -> Result<Line<T>> {
    let n = u.len();
    if n < MIN_POINTS {
        return Err(Error::Underdetermined {
            points: n,
            needed: MIN_POINTS,
        });
    }
    if u.iter().chain(v).any(|x| !x.is_finite()) {
        return invalid("fit data must be finite in the linearized coordinates");
    }
    let nf = T::from_count(n);
    let mu = u.iter().copied().sum::<T>() / nf;
    let mv = v.iter().copied().sum::<T>() / nf;
    let suu: T = u.iter().map(|&x| (x - mu) * (x - mu)).sum();
    let suv: T = u.iter().zip(v).map(|(&x, &y)| (x - mu) * (y - mv)).sum();
    let svv: T = v.iter().map(|&y| (y - mv) * (y - mv)).sum();
    if !(suu > T::zero()) {
        return invalid("fit abscissae are all equal");
    }
    let slope = suv / suu;
    let intercept = mv - slope * mu;
    let ss_res: T = u
        .iter()
        .zip(v)
        .map(|(&x, &y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let r_squared = if svv > T::zero() { T::one() - ss_res / svv } else { T::one() };
    Ok(Line {
        intercept,
        slope,
        rms: (ss_res / nf).sqrt(),
        r_squared,
    })
}

fn check_lengths<T>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return invalid(format!("{} abscissae but {} ordinates", x.len(), y.len()));
    }
    Ok(())
}

/// `y = q x^p` from a log–log regression.
pub fn fit_power_law<T: Real>(x: &[T], y: &[T]) -> Result<FitResult<T>> {
    check_lengths(x, y)?;
    if x.iter().chain(y).any(|&v| !(v > T::zero())) {
        return invalid("power-law fit needs positive data");
    }
    let u: Vec<T> = x.iter().map(|v| v.ln()).collect();
    let v: Vec<T> = y.iter().map(|v| v.ln()).collect();
    let l = line_fit(&u, &v)?;
    Ok(FitResult {
        model: FitModel::PowerLaw {
            q: l.intercept.exp(),
            p: l.slope,
        },
        residual_rms: l.rms,
        r_squared: l.r_squared,
        points: x.len(),
    })
}

/// `y² = α + β ln x`.
pub fn fit_sqrt_log<T: Real>(x: &[T], y: &[T]) -> Result<FitResult<T>> {
    check_lengths(x, y)?;
    if x.iter().any(|&v| !(v > T::zero())) {
        return invalid("sqrt-log fit needs positive abscissae");
    }
    let u: Vec<T> = x.iter().map(|v| v.ln()).collect();
    let v: Vec<T> = y.iter().map(|&v| v * v).collect();
    let l = line_fit(&u, &v)?;
    Ok(FitResult {
        model: FitModel::SqrtLog {
            alpha: l.intercept,
            beta: l.slope,
        },
        residual_rms: l.rms,
        r_squared: l.r_squared,
        points: x.len(),
    })
}

/// `y = A + B/x²`, reported as `y∞ = A`, `c = −B/A`.
pub fn fit_saturation<T: Real>(x: &[T], y: &[T]) -> Result<FitResult<T>> {
    check_lengths(x, y)?;
    if x.iter().any(|&v| v == T::zero()) {
        return invalid("saturation fit needs non-zero abscissae");
    }
    let u: Vec<T> = x.iter().map(|&v| T::one() / (v * v)).collect();
    let l = line_fit(&u, y)?;
    if l.intercept == T::zero() {
        return Err(Error::NoRoot("saturation fit (zero asymptote)"));
    }
    Ok(FitResult {
        model: FitModel::Saturation {
            y_inf: l.intercept,
            c: -l.slope / l.intercept,
        },
        residual_rms: l.rms,
        r_squared: l.r_squared,
        points: x.len(),
    })
}
