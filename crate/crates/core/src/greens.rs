//! Free-space electromagnetic propagator and the pair interaction rates it
//! induces between two identical two-level emitters.
//!
//! Lengths are in units of the resonance wavelength λ₀ (so `k0 = 2π`) and
//! rates in units of the single-atom decay rate Γ₀. For a displacement `r`
//! with `ξ = k0 |r|`,
//!
//! ```text
//! G₀(r) = e^{iξ}/(4π|r|) [ (1 + (iξ − 1)/ξ²) 𝟙 + ((3 − 3iξ − ξ²)/ξ²) r̂⊗r̂ ]
//! Γ/Γ₀  = (6π/k0) p*·Im G₀·p
//! J/Γ₀  = −(3π/k0) p*·Re G₀·p
//! ```

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{norm, Real, Vec3};

pub type Tensor3<T> = [[Complex<T>; 3]; 3];

/// Below this `ξ` the sinc-type combinations are evaluated from their Taylor
/// series; above it the closed forms lose nothing to cancellation.
const SERIES_THRESHOLD: f64 = 0.5;
const SERIES_TERMS: usize = 10;

/// Transition dipole orientation: a complex unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polarization<T> {
    vector: [Complex<T>; 3],
}

impl<T: Real> Polarization<T> {
    /// Normalizes `vector`; fails on the zero vector or non-finite input.
    pub fn new(vector: [Complex<T>; 3]) -> Result<Self> {
        let n2: T = vector.iter().map(|c| c.norm_sqr()).sum();
        if !(n2 > T::zero()) || !n2.is_finite() {
            return invalid("polarization vector must be finite and non-zero");
        }
        let inv = T::one() / n2.sqrt();
        Ok(Self {
            vector: vector.map(|c| c * inv),
        })
    }

    pub fn linear(direction: Vec3<T>) -> Result<Self> {
        Self::new(direction.map(|x| Complex::new(x, T::zero())))
    }

    /// `(u + i v)/√2` for orthogonal real directions `u` and `v`.
    pub fn circular(u: Vec3<T>, v: Vec3<T>) -> Result<Self> {
        let (nu, nv) = (norm(&u), norm(&v));
        if !(nu > T::zero() && nv > T::zero()) {
            return invalid("circular polarization needs two non-zero directions");
        }
        let cos = crate::scalar::dot(&u, &v) / (nu * nv);
        if cos.abs() > T::lit(1e-9) {
            return invalid("circular polarization directions must be orthogonal");
        }
        Self::new([0, 1, 2].map(|i| Complex::new(u[i] / nu, v[i] / nv)))
    }

    pub fn x() -> Self {
        Self::linear([T::one(), T::zero(), T::zero()]).unwrap()
    }

    pub fn y() -> Self {
        Self::linear([T::zero(), T::one(), T::zero()]).unwrap()
    }

    pub fn z() -> Self {
        Self::linear([T::zero(), T::zero(), T::one()]).unwrap()
    }

    pub fn vector(&self) -> &[Complex<T>; 3] {
        &self.vector
    }

    /// `conj(p)·p`.
    pub fn norm_sqr(&self) -> T {
        self.vector.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Real symmetric part of `conj(p) ⊗ p`. Contracting a real symmetric
    /// tensor with this matrix gives the sesquilinear form `p*·M·p`.
    pub fn projector(&self) -> [[T; 3]; 3] {
        let mut out = [[T::zero(); 3]; 3];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, w) in row.iter_mut().enumerate() {
                *w = (self.vector[a].conj() * self.vector[b]).re;
            }
        }
        // symmetrize: the antisymmetric (imaginary) part never couples to a
        // symmetric tensor
        for a in 0..3 {
            for b in (a + 1)..3 {
                let m = (out[a][b] + out[b][a]) / (T::one() + T::one());
                out[a][b] = m;
                out[b][a] = m;
            }
        }
        out
    }

    /// `p*·M·p` for a real symmetric tensor `M`.
    pub fn contract(&self, m: &[[T; 3]; 3]) -> T {
        contract(&self.projector(), m)
    }
}

fn contract<T: Real>(proj: &[[T; 3]; 3], m: &[[T; 3]; 3]) -> T {
    let mut acc = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            acc = acc + proj[a][b] * m[a][b];
        }
    }
    acc
}

/// Normalized coherent and dissipative rates for one atom pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairRates<T> {
    pub j_over_gamma0: T,
    pub gamma_over_gamma0: T,
}

/// `sin ξ / ξ`
fn sinc<T: Real>(xi: T) -> T {
    if xi.abs() < T::lit(SERIES_THRESHOLD) {
        // Σ (−1)^m ξ^{2m}/(2m+1)!
        let x2 = xi * xi;
        let mut term = T::one();
        let mut acc = T::one();
        for m in 1..SERIES_TERMS {
            let mf = T::from_count(m);
            let two = T::lit(2.0);
            term = -term * x2 / ((two * mf) * (two * mf + T::one()));
            acc = acc + term;
        }
        acc
    } else {
        xi.sin() / xi
    }
}

/// `(sin ξ − ξ cos ξ)/ξ³`, which tends to 1/3 at the origin.
fn sinc_deriv_ratio<T: Real>(xi: T) -> T {
    if xi.abs() < T::lit(SERIES_THRESHOLD) {
        // Σ (−1)^m 2(m+1) ξ^{2m}/(2m+3)!
        let x2 = xi * xi;
        let mut power = T::one();
        let mut fact = T::lit(6.0); // 3!
        let mut acc = T::zero();
        for m in 0..SERIES_TERMS {
            let mf = T::from_count(m);
            let two = T::lit(2.0);
            let sign = if m % 2 == 0 { T::one() } else { -T::one() };
            acc = acc + sign * two * (mf + T::one()) * power / fact;
            power = power * x2;
            fact = fact * (two * mf + T::lit(4.0)) * (two * mf + T::lit(5.0));
        }
        acc
    } else {
        (xi.sin() - xi * xi.cos()) / (xi * xi * xi)
    }
}

/// Isotropic and longitudinal coefficients of `Im G₀ · 4π/k0`.
fn im_coefficients<T: Real>(xi: T) -> (T, T) {
    let s = sinc(xi);
    let f = sinc_deriv_ratio(xi);
    (s - f, T::lit(3.0) * f - s)
}

/// Isotropic and longitudinal coefficients of `Re G₀ · 4π/k0`.
fn re_coefficients<T: Real>(xi: T) -> (T, T) {
    let (s, c) = xi.sin_cos();
    let x2 = xi * xi;
    let x3 = x2 * xi;
    let three = T::lit(3.0);
    (c / xi - c / x3 - s / x2, three * c / x3 - c / xi + three * s / x2)
}

fn outer_unit<T: Real>(r: &Vec3<T>, len: T) -> [[T; 3]; 3] {
    let u = r.map(|x| x / len);
    let mut m = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            m[a][b] = u[a] * u[b];
        }
    }
    m
}

/// Full complex free-space dyadic propagator at displacement `r`.
pub fn free_space_green<T: Real>(r: &Vec3<T>, k0: T) -> Result<Tensor3<T>> {
    let len = norm(r);
    if len == T::zero() {
        return Err(Error::SingularDisplacement);
    }
    let xi = k0 * len;
    let i = Complex::new(T::zero(), T::one());
    let one = Complex::new(T::one(), T::zero());
    let xi_c = Complex::new(xi, T::zero());
    let x2 = xi_c * xi_c;
    let three = Complex::new(T::lit(3.0), T::zero());
    let pref = (i * xi_c).exp() / (T::lit(4.0) * T::PI() * len);
    let iso = pref * (one + (i * xi_c - one) / x2);
    let lon = pref * ((three - three * i * xi_c - x2) / x2);
    let rr = outer_unit(r, len);
    let mut g = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { one } else { Complex::new(T::zero(), T::zero()) };
            g[a][b] = iso * delta + lon * rr[a][b];
        }
    }
    Ok(g)
}

/// Imaginary part of the propagator, continuous through `r = 0` where it
/// equals `(k0/6π) 𝟙`.
pub fn im_free_space_green<T: Real>(r: &Vec3<T>, k0: T) -> [[T; 3]; 3] {
    let len = norm(r);
    let pref = k0 / (T::lit(4.0) * T::PI());
    let (iso, lon) = im_coefficients(k0 * len);
    let rr = if len > T::zero() {
        outer_unit(r, len)
    } else {
        [[T::zero(); 3]; 3]
    };
    let mut m = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { T::one() } else { T::zero() };
            m[a][b] = pref * (iso * delta + lon * rr[a][b]);
        }
    }
    m
}

/// Dissipative pair rate `Γ^{ij}/Γ₀` for a precomputed polarization projector.
///
/// This is the hot path of every variance evaluation; it avoids building the
/// tensor and works directly with `r̂ᵀ P r̂`.
#[inline]
pub fn pair_gamma_with<T: Real>(disp: &Vec3<T>, proj: &[[T; 3]; 3]) -> T {
    let len2 = disp[0] * disp[0] + disp[1] * disp[1] + disp[2] * disp[2];
    let trace = proj[0][0] + proj[1][1] + proj[2][2];
    if len2 == T::zero() {
        return trace;
    }
    let len = len2.sqrt();
    let (iso, lon) = im_coefficients(T::k0() * len);
    let mut rpr = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            rpr = rpr + disp[a] * proj[a][b] * disp[b];
        }
    }
    let half3 = T::lit(1.5);
    half3 * (iso * trace + lon * rpr / len2)
}

/// Dissipative rate only; accepts zero displacement (returns 1).
pub fn pair_gamma<T: Real>(disp: &Vec3<T>, pol: &Polarization<T>) -> T {
    pair_gamma_with(disp, &pol.projector())
}

/// Coherent and dissipative rates between atoms separated by `disp` (λ₀ units).
///
/// The coherent part diverges at zero displacement, which is reported as
/// [`Error::SingularDisplacement`].
pub fn pair_interaction<T: Real>(disp: &Vec3<T>, pol: &Polarization<T>) -> Result<PairRates<T>> {
    let len = norm(disp);
    if len == T::zero() {
        return Err(Error::SingularDisplacement);
    }
    let proj = pol.projector();
    let (iso, lon) = re_coefficients(T::k0() * len);
    let rr = outer_unit(disp, len);
    let trace = proj[0][0] + proj[1][1] + proj[2][2];
    let j = -T::lit(0.75) * (iso * trace + lon * contract(&proj, &rr));
    Ok(PairRates {
        j_over_gamma0: j,
        gamma_over_gamma0: pair_gamma_with(disp, &proj),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn circ_yz() -> Polarization<f64> {
        Polarization::circular([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn coincident_point_imaginary_part() {
        let m = im_free_space_green(&[0.0, 0.0, 0.0], 2.0 * PI);
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { 2.0 * PI / (6.0 * PI) } else { 0.0 };
                assert_relative_eq!(m[a][b], expect, epsilon = 1e-15);
            }
        }
        assert_eq!(pair_gamma(&[0.0; 3], &Polarization::x()), 1.0);
    }

    #[test]
    fn half_wavelength_transverse_and_longitudinal() {
        // ξ = π: Γ⊥ = (3/2)(sinξ/ξ + cosξ/ξ² − sinξ/ξ³) = −3/(2π²), Γ∥ = 3/π²
        let r = [0.0, 0.0, 0.5];
        let g = im_free_space_green(&r, 2.0 * PI);
        assert_relative_eq!(3.0 * g[0][0], -3.0 / (2.0 * PI * PI), epsilon = 1e-14);
        assert_relative_eq!(3.0 * g[2][2], 3.0 / (PI * PI), epsilon = 1e-14);
        let full = free_space_green(&r, 2.0 * PI).unwrap();
        assert_relative_eq!(full[0][0].im, g[0][0], epsilon = 1e-14);
        assert_relative_eq!(full[2][2].im, g[2][2], epsilon = 1e-14);
    }

    #[test]
    fn pair_examples() {
        let far = pair_interaction(&[0.0f64, 0.0, 1e4], &Polarization::x()).unwrap();
        assert!(far.gamma_over_gamma0.abs() < 1e-3);
        let perp = pair_interaction(&[0.0, 0.0, 0.5], &Polarization::x()).unwrap();
        assert_relative_eq!(perp.gamma_over_gamma0, -3.0 / (2.0 * PI * PI), epsilon = 1e-14);
        let circ_xy = Polarization::circular([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        let circ = pair_gamma(&[0.5, 0.0, 0.0], &circ_xy);
        assert_relative_eq!(circ, 3.0 / (4.0 * PI * PI), epsilon = 1e-14);
    }

    #[test]
    fn zero_displacement_coherent_is_an_error() {
        assert_eq!(
            pair_interaction(&[0.0; 3], &Polarization::<f64>::z()),
            Err(Error::SingularDisplacement)
        );
        assert!(free_space_green(&[0.0f64; 3], 1.0).is_err());
    }

    #[test]
    fn coherent_part_matches_tensor() {
        // J/Γ₀ = −(3π/k0) p*·Re G₀·p against the full complex tensor
        let r = [0.13, -0.4, 0.27];
        let g = free_space_green(&r, 2.0 * PI).unwrap();
        let re = g.map(|row| row.map(|c| c.re));
        for pol in [Polarization::x(), Polarization::z(), circ_yz()] {
            let rates = pair_interaction(&r, &pol).unwrap();
            let expect = -(3.0 * PI / (2.0 * PI)) * pol.contract(&re);
            assert_relative_eq!(rates.j_over_gamma0, expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn series_and_closed_form_agree_at_threshold() {
        for xi in [0.49, 0.5, 0.51] {
            let closed_s = f64::sin(xi) / xi;
            let closed_f = (f64::sin(xi) - xi * f64::cos(xi)) / (xi * xi * xi);
            assert_relative_eq!(sinc(xi), closed_s, epsilon = 1e-14);
            assert_relative_eq!(sinc_deriv_ratio(xi), closed_f, epsilon = 1e-13);
        }
    }

    #[test]
    fn single_precision_is_supported() {
        let g = pair_gamma(&[0.0f32, 0.0, 0.5], &Polarization::x());
        assert!((g - (-3.0 / (2.0 * std::f32::consts::PI.powi(2)))).abs() < 1e-6);
    }

    #[test]
    fn continuity_at_origin() {
        for dir in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.3, -0.5, 0.81]] {
            let n = norm(&dir);
            let r = dir.map(|x| 1e-6 * x / n);
            for pol in [Polarization::x(), Polarization::z(), circ_yz()] {
                assert!((pair_gamma(&r, &pol) - 1.0).abs() < 1e-9);
            }
        }
    }

    fn random_pol() -> impl Strategy<Value = Polarization<f64>> {
        prop::array::uniform6(-1.0f64..1.0)
            .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|v| {
                Polarization::new([
                    Complex::new(v[0], v[1]),
                    Complex::new(v[2], v[3]),
                    Complex::new(v[4], v[5]),
                ])
                .unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn dissipative_rate_bounded_and_reciprocal(
            r in prop::array::uniform3(-3.0f64..3.0),
            pol in random_pol(),
        ) {
            let g = pair_gamma(&r, &pol);
            prop_assert!(g.abs() <= 1.0 + 1e-12);
            let back = pair_gamma(&r.map(|x| -x), &pol);
            prop_assert!((g - back).abs() <= 1e-15);
            prop_assert!((pol.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn circular_is_mean_of_linear(r in prop::array::uniform3(-2.0f64..2.0)) {
            let c = pair_gamma(&r, &circ_yz());
            let l = 0.5 * (pair_gamma(&r, &Polarization::y()) + pair_gamma(&r, &Polarization::z()));
            prop_assert!((c - l).abs() < 1e-12);
        }
    }
}
