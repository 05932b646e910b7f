//! Distances, entropies, and entanglement measures on density matrices.
//!
//! Entropic quantities are in bits (log base 2). Eigenvalues below
//! [`EIGENVALUE_CLAMP`] are clamped to zero before logarithms to absorb the
//! numerical negativity of Hermitian eigensolvers.

use crate::channels::Povm;
use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eigen, hermitian_eigenvalues, CMatrix};
use crate::state::DensityMatrix;

/// Spectrum floor applied before logarithms and square roots.
pub const EIGENVALUE_CLAMP: f64 = 1e-12;

/// Trace distance `0.5 * ||rho - sigma||_1`, in `[0, 1]`.
///
/// The difference matrix is sign-canonicalized before the eigendecomposition
/// so the result is bit-identical under argument swap.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let mut delta = rho.entries() - sigma.entries();
    if let Some(first) = delta.iter().find(|z| z.re != 0.0 || z.im != 0.0) {
        if first.re < 0.0 || (first.re == 0.0 && first.im < 0.0) {
            delta = -delta;
        }
    }
    let sum: f64 = hermitian_eigenvalues(&delta).iter().map(|l| l.abs()).sum();
    Ok(0.5 * sum)
}

/// Von Neumann entropy in bits: `-sum(lambda log2 lambda)` with `0 log 0 := 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&hermitian_eigenvalues(rho.entries()))
}

fn entropy_of_spectrum(eigs: &[f64]) -> f64 {
    let mut s = 0.0;
    for &l in eigs {
        if l > EIGENVALUE_CLAMP {
            s -= l * l.log2();
        }
    }
    // Absorb -0.0 from exactly pure spectra.
    if s == 0.0 {
        0.0
    } else {
        s
    }
}

/// Mutual information `S(A) + S(B) - S(AB)` in bits.
///
/// `part_a` and `part_b` must be disjoint and together cover every subsystem
/// of `rho`.
pub fn mutual_information(rho: &DensityMatrix, part_a: &[usize], part_b: &[usize]) -> Result<f64> {
    let a = rho.layout().check_indices(part_a)?;
    let b = rho.layout().check_indices(part_b)?;
    if a.iter().any(|i| b.contains(i)) {
        return Err(Error::InvalidPartition("parts overlap".into()));
    }
    if a.len() + b.len() != rho.layout().len() {
        return Err(Error::InvalidPartition(format!(
            "parts cover {} of {} subsystems",
            a.len() + b.len(),
            rho.layout().len()
        )));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidPartition("each part needs at least one subsystem".into()));
    }
    let s_a = von_neumann_entropy(&rho.partial_trace(&a)?);
    let s_b = von_neumann_entropy(&rho.partial_trace(&b)?);
    let s_ab = von_neumann_entropy(rho);
    Ok(s_a + s_b - s_ab)
}

/// Negativity: the absolute sum of negative eigenvalues of the partial
/// transpose over `part`. Zero certifies PPT (and separability on 2x2).
pub fn negativity(rho: &DensityMatrix, part: &[usize]) -> Result<f64> {
    let pt = rho.partial_transpose(part)?;
    Ok(hermitian_eigenvalues(pt.entries())
        .into_iter()
        .filter(|l| *l < 0.0)
        .fold(0.0, |acc, l| acc - l))
}

/// Outcome probabilities `p_k = Tr(M_k rho)` of a POVM.
pub fn povm_probabilities(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<f64>> {
    povm.elements()
        .iter()
        .map(|m| rho.expectation(m))
        .collect()
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`, in `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let sqrt_rho = hermitian_sqrt(rho.entries());
    let inner = &sqrt_rho * sigma.entries() * &sqrt_rho;
    let root_sum: f64 = hermitian_eigenvalues(&inner)
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    Ok((root_sum * root_sum).min(1.0))
}

fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    let (eigs, vecs) = hermitian_eigen(m);
    let d = m.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (k, l) in eigs.iter().enumerate() {
        if *l > EIGENVALUE_CLAMP {
            let v = vecs.column(k);
            out += (v * v.adjoint()) * c64(l.sqrt(), 0.0);
        }
    }
    out
}

/// Entropy of the marginal on `keep`.
pub fn subsystem_entropy(rho: &DensityMatrix, keep: &[usize]) -> Result<f64> {
    Ok(von_neumann_entropy(&rho.partial_trace(keep)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::SubsystemLayout;
    use crate::linalg::CVector;
    use crate::state::Ket;
    use approx::assert_abs_diff_eq;

    fn bell() -> DensityMatrix {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(
            CVector::from_vec(vec![c64(inv, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(inv, 0.0)]),
            SubsystemLayout::qubits(2),
        )
        .unwrap()
        .density()
    }

    #[test]
    fn trace_distance_reference_points() {
        let zero = Ket::basis_state(SubsystemLayout::qubits(1), 0).unwrap().density();
        let one = Ket::basis_state(SubsystemLayout::qubits(1), 1).unwrap().density();
        let mixed = DensityMatrix::maximally_mixed(SubsystemLayout::qubits(1));
        assert_abs_diff_eq!(trace_distance(&zero, &zero).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(trace_distance(&zero, &one).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance(&zero, &mixed).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn trace_distance_is_exactly_symmetric() {
        let a = Ket::qubit(0.7, 0.9, "a").density();
        let b = Ket::qubit(2.1, -0.3, "a").density();
        let d1 = trace_distance(&a, &b).unwrap();
        let d2 = trace_distance(&b, &a).unwrap();
        assert_eq!(d1.to_bits(), d2.to_bits());
    }

    #[test]
    fn entropy_reference_points() {
        let pure = Ket::qubit(1.234, 0.77, "s").density();
        assert_abs_diff_eq!(von_neumann_entropy(&pure), 0.0, epsilon = 1e-9);
        let mixed = DensityMatrix::maximally_mixed(SubsystemLayout::qubits(1));
        assert_abs_diff_eq!(von_neumann_entropy(&mixed), 1.0, epsilon = 1e-12);
        // diag(1/4, 3/4): binary entropy h(1/4) = 2 - 0.75*log2(3).
        let diag = DensityMatrix::new(
            CMatrix::from_row_slice(
                2,
                2,
                &[c64(0.25, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.75, 0.0)],
            ),
            SubsystemLayout::qubits(1),
        )
        .unwrap();
        let expected = 2.0 - 0.75 * 3.0f64.log2();
        assert_abs_diff_eq!(von_neumann_entropy(&diag), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(von_neumann_entropy(&diag), 0.8112781244591328, epsilon = 1e-12);
    }

    #[test]
    fn mutual_information_reference_points() {
        let product = Ket::qubit(0.3, 0.0, "a").tensor(&Ket::qubit(1.2, 0.5, "b")).density();
        assert_abs_diff_eq!(mutual_information(&product, &[0], &[1]).unwrap(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(mutual_information(&bell(), &[0], &[1]).unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn mutual_information_rejects_bad_partitions() {
        let rho = bell();
        assert!(mutual_information(&rho, &[0], &[0]).is_err());
        assert!(mutual_information(&rho, &[0], &[]).is_err());
        let three = rho.tensor(&DensityMatrix::maximally_mixed(SubsystemLayout::single(2, "c").unwrap()));
        assert!(mutual_information(&three, &[0], &[1]).is_err());
    }

    #[test]
    fn bell_partial_transpose_spectrum_and_negativity() {
        let pt = bell().partial_transpose(&[1]).unwrap();
        let mut eigs = hermitian_eigenvalues(pt.entries());
        eigs.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(eigs[0], -0.5, epsilon = 1e-12);
        for e in &eigs[1..] {
            assert_abs_diff_eq!(*e, 0.5, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(negativity(&bell(), &[1]).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn negativity_of_separable_states_is_zero() {
        let product = Ket::qubit(0.4, 0.1, "a").tensor(&Ket::qubit(2.0, 0.9, "b")).density();
        assert_abs_diff_eq!(negativity(&product, &[0]).unwrap(), 0.0, epsilon = 1e-10);
        let mixed = DensityMatrix::maximally_mixed(SubsystemLayout::qubits(2));
        assert_abs_diff_eq!(negativity(&mixed, &[0]).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_leaves_diagonal_states_unchanged() {
        let mixed = DensityMatrix::maximally_mixed(SubsystemLayout::qubits(2));
        let pt = mixed.partial_transpose(&[0]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(
                    (pt.entries()[(i, j)] - mixed.entries()[(i, j)]).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn fidelity_reference_points() {
        let zero = Ket::basis_state(SubsystemLayout::qubits(1), 0).unwrap().density();
        let one = Ket::basis_state(SubsystemLayout::qubits(1), 1).unwrap().density();
        let mixed = DensityMatrix::maximally_mixed(SubsystemLayout::qubits(1));
        assert_abs_diff_eq!(fidelity(&zero, &zero).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fidelity(&zero, &one).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fidelity(&zero, &mixed).unwrap(), 0.5, epsilon = 1e-10);
    }
}
