//! Symmetric eigenvalue routines: dense decomposition and a matrix-free
//! Lanczos iteration for the top of the spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// All eigenvalues of the row-major symmetric `n × n` matrix, descending.
///
/// The decomposition runs in `f64` regardless of `T`.
pub fn symmetric_eigenvalues<T: Real>(n: usize, data: &[T]) -> Result<Vec<T>> {
    assert_eq!(data.len(), n * n);
    let m = DMatrix::from_fn(n, n, |i, j| data[i * n + j].to_f64_lossy());
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 1_000 * n.max(1)).ok_or(Error::NoConvergence {
        what: "symmetric eigensolver",
        iterations: 1_000 * n.max(1),
    })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values.into_iter().map(T::lit).collect())
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Residual check cadence in Lanczos steps.
    pub check_every: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_iter: 400,
            check_every: 4,
            seed: 0x5eed,
        }
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Largest eigenvalue of the tridiagonal matrix and the magnitude of the last
/// component of its eigenvector.
fn top_ritz(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (theta, eig.eigenvectors[(k - 1, idx)].abs())
}

/// Largest eigenvalue of a symmetric operator given by its action `apply`.
///
/// Lanczos with full reorthogonalization from a seeded random start; stops
/// when the Ritz residual `β_k |s_k|` falls below `rel_tol · θ`.
pub fn lanczos_max<T: Real>(n: usize, mut apply: impl FnMut(&[T], &mut [T]), opts: &LanczosOptions) -> Result<T> {
    if n == 0 {
        return Err(Error::Invalid("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<T> = (0..n).map(|_| T::lit(rng.random::<f64>() - 0.5)).collect();
    let nv = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x = *x / nv);

    let mut basis: Vec<Vec<T>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![T::zero(); n];
    let steps = opts.max_iter.min(n);
    for k in 0..steps {
        apply(&basis[k], &mut w);
        let a = dot(&basis[k], &w);
        alpha.push(a.to_f64_lossy());
        // two passes of classical Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(wi, &qi)| *wi = *wi - c * qi);
            }
        }
        let b = dot(&w, &w).sqrt().to_f64_lossy();
        let last = k + 1 == steps;
        let (theta, s_last) = if last || (k + 1) % opts.check_every == 0 || b < 1e-12 {
            top_ritz(&alpha, &beta)
        } else {
            (f64::NAN, f64::NAN)
        };
        if !theta.is_nan() {
            let residual = b * s_last;
            if residual <= opts.rel_tol * theta.abs() || b < 1e-12 || (last && k + 1 == n) {
                return Ok(T::lit(theta));
            }
        }
        if last {
            break;
        }
        beta.push(b);
        let inv = T::one() / T::lit(b);
        basis.push(w.iter().map(|&x| x * inv).collect());
    }
    Err(Error::NoConvergence {
        what: "Lanczos iteration",
        iterations: steps,
    })
}
