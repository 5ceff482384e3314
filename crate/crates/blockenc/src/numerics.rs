//! Shared numeric primitives for the whole crate.
//!
//! Everything downstream (dictionary synthesis, circuit simulation,
//! verification) works over dense complex linear algebra in the end, so this
//! module pins down the scalar type, the dense matrix/state representations,
//! and the handful of spectral helpers the rest of the crate relies on:
//!
//! * [`principal_sqrt`] — the square-root branch used for amplitude
//!   coefficients, with its phase taken in `[0, 2π)` so that the square of
//!   the root always reproduces the original value.
//! * [`is_unitary`] / [`is_hermitian`] — max-norm structure checks.
//! * [`spectral_norm`] — largest singular value via power iteration on
//!   `M†M`, with an explicit non-convergence error instead of a silent
//!   wrong answer.

use ndarray::Array2;
use thiserror::Error;

pub use num_complex::Complex64;

/// Dense row-major complex matrix.
pub type DenseMatrix = Array2<Complex64>;

/// Dense state vector over the computational basis; index `k` is the basis
/// state whose bit `q` (qubit `q`, least significant first) is `(k >> q) & 1`.
pub type StateVector = Vec<Complex64>;

/// Relative tolerance used by [`spectral_norm`]'s power iteration.
const POWER_ITERATION_REL_TOL: f64 = 1e-8;
/// Iteration cap for [`spectral_norm`].
const POWER_ITERATION_MAX_STEPS: usize = 10_000;

#[derive(Debug, Error)]
pub enum NumericsError {
    /// Power iteration failed to stabilise within the iteration cap.  The
    /// last estimate is carried so a caller can still inspect how far the
    /// iteration got.
    #[error(
        "spectral norm power iteration did not converge after {iterations} steps \
         (last estimate {last_estimate:.6e})"
    )]
    PowerIterationDiverged { iterations: usize, last_estimate: f64 },
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Square root with the argument of the input taken in `[0, 2π)`.
///
/// With this branch `principal_sqrt(c)^2 == c` for every complex `c`, and the
/// imaginary part of the result is always non-negative.  Examples:
/// `principal_sqrt(4) = 2`, `principal_sqrt(-1) = i`, `principal_sqrt(-4) = 2i`.
pub fn principal_sqrt(c: Complex64) -> Complex64 {
    let mut theta = c.arg();
    if theta < 0.0 {
        theta += 2.0 * std::f64::consts::PI;
    }
    Complex64::from_polar(c.norm().sqrt(), 0.5 * theta)
}

/// Conjugate transpose.
pub fn adjoint(m: &DenseMatrix) -> DenseMatrix {
    m.t().mapv(|z| z.conj())
}

/// Identity matrix of the given dimension.
pub fn identity_matrix(dim: usize) -> DenseMatrix {
    Array2::from_shape_fn((dim, dim), |(i, j)| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Largest absolute value of any entry.
pub fn max_abs(m: &DenseMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry-wise difference; panics if the shapes differ.
pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff requires equal shapes");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// True when `‖M†M − I‖_max ≤ tol`.  Non-square matrices are never unitary.
pub fn is_unitary(m: &DenseMatrix, tol: f64) -> bool {
    let (rows, cols) = m.dim();
    if rows != cols {
        return false;
    }
    let gram = adjoint(m).dot(m);
    max_abs_diff(&gram, &identity_matrix(rows)) <= tol
}

/// True when `‖M − M†‖_max ≤ tol`.  Non-square matrices are never Hermitian.
pub fn is_hermitian(m: &DenseMatrix, tol: f64) -> bool {
    let (rows, cols) = m.dim();
    if rows != cols {
        return false;
    }
    max_abs_diff(m, &adjoint(m)) <= tol
}

/// Largest singular value, computed by power iteration on `M†M`.
///
/// The iteration starts from a fixed pseudo-random vector (deterministic
/// across runs), stops once the eigenvalue estimate moves by less than a
/// `1e-8` relative step, and errors out after `10_000` iterations instead of
/// returning an unconverged value.
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64> {
    let (rows, cols) = m.dim();
    if rows == 0 || cols == 0 {
        return Ok(0.0);
    }
    // Gram matrix M†M: positive semi-definite, dominant eigenvalue σ_max².
    let gram = adjoint(m).dot(m);
    let dim = cols;

    // Deterministic start vector with no exact zeros and no obvious symmetry,
    // so an accidental exact orthogonality to the dominant eigenspace is not
    // a practical concern.
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            // SplitMix64 step; map to (0, 1].
            seed = seed.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = seed;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            Complex64::new(0.5 + (z as f64) / (u64::MAX as f64), 0.0)
        })
        .collect();
    normalize(&mut v);

    let mut last = f64::INFINITY;
    for _ in 0..POWER_ITERATION_MAX_STEPS {
        let w = mat_vec(&gram, &v);
        let lambda = norm2(&w);
        if lambda == 0.0 {
            // v is in the kernel of a PSD matrix started from a generic
            // vector: the matrix is zero.
            return Ok(0.0);
        }
        if (lambda - last).abs() <= POWER_ITERATION_REL_TOL * lambda {
            return Ok(lambda.sqrt());
        }
        last = lambda;
        v = w;
        normalize(&mut v);
    }
    Err(NumericsError::PowerIterationDiverged {
        iterations: POWER_ITERATION_MAX_STEPS,
        last_estimate: last.sqrt(),
    })
}

fn mat_vec(m: &DenseMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let (rows, cols) = m.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); rows];
    for i in 0..rows {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..cols {
            acc += m[(i, j)] * v[j];
        }
        out[i] = acc;
    }
    out
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm2(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}
