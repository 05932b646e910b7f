//! Thin complex-matrix helpers shared across the crate.
//!
//! Everything here is dense `nalgebra` arithmetic; the quantum semantics
//! (layouts, states, channels) live in the modules that use these helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix used for every operator in the crate.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex vector used for state amplitudes.
pub type CVector = DVector<Complex64>;

/// Shorthand complex constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Kronecker product with the first factor as the most significant index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of vectors (amplitudes of a composite pure state).
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

/// Force exact Hermiticity by averaging with the adjoint.
///
/// Applied before every Hermitian eigendecomposition so that solver input is
/// exactly Hermitian regardless of accumulated floating-point drift.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

/// Eigenvalues of a Hermitian matrix (real, unordered).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitize(m).symmetric_eigenvalues().iter().copied().collect()
}

/// Full eigendecomposition of a Hermitian matrix: (eigenvalues, eigenvectors as columns).
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = hermitize(m).symmetric_eigen();
    (se.eigenvalues.iter().copied().collect(), se.eigenvectors)
}

/// Largest absolute entry of `m - I`.
pub fn max_deviation_from_identity(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
            max = max.max((m[(i, j)] - expected).norm());
        }
    }
    max
}

/// True when `u† u = I` within `tol` (columns orthonormal; also accepts isometries).
pub fn is_isometry(u: &CMatrix, tol: f64) -> bool {
    max_deviation_from_identity(&(u.adjoint() * u)) <= tol
}

/// 2x2 identity.
pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Pauli X.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)])
}

/// Pauli Y.
pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)])
}

/// Pauli Z.
pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermitian_eigen_recovers_diagonal_spectrum() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c64(0.25, 0.0),
            c64(0.75, 0.0),
        ]));
        let mut eigs = hermitian_eigenvalues(&m);
        eigs.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(eigs[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 0.75, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_eigen_handles_complex_off_diagonals() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c64(1.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(1.0, 0.0)],
        );
        let (eigs, vecs) = hermitian_eigen(&m);
        let mut sorted = eigs.clone();
        sorted.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(sorted[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sorted[1], 2.0, epsilon = 1e-12);
        // Reconstruct and compare.
        let mut rebuilt = CMatrix::zeros(2, 2);
        for (k, lam) in eigs.iter().enumerate() {
            let v = vecs.column(k);
            rebuilt += (v * v.adjoint()) * c64(*lam, 0.0);
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!((rebuilt[(i, j)] - m[(i, j)]).norm(), 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn kron_vec_matches_matrix_kron() {
        let a = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0)]);
        let b = CVector::from_vec(vec![c64(0.5, 0.0), c64(-0.5, 0.0), c64(0.0, 0.0)]);
        let v = kron_vec(&a, &b);
        assert_eq!(v.len(), 6);
        assert_abs_diff_eq!((v[4] - c64(0.0, -0.5)).norm(), 0.0, epsilon = 1e-15);
    }
}
