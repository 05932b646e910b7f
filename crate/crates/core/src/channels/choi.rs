//! Choi-state representation of a channel.

use super::kraus::KrausChannel;
use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg::{c64, hermitian_eigen, hermitian_eigenvalues, hermitize, CMatrix};
use crate::measures::{negativity, trace_distance, EIGENVALUE_CLAMP};
use crate::state::DensityMatrix;

/// The normalized Choi state of a channel: `(id ⊗ ch)` applied to the
/// maximally entangled state on input ⊗ input, laid out as the two-subsystem
/// state `[in, out]`.
///
/// Trace preservation of the channel shows up as the input marginal being
/// `I/in_dim`.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    state: DensityMatrix,
    in_dim: usize,
    out_dim: usize,
}

impl ChoiMatrix {
    pub(super) fn of_kraus(operators: &[CMatrix], in_dim: usize, out_dim: usize) -> Self {
        let d = in_dim * out_dim;
        let mut entries = CMatrix::zeros(d, d);
        for k in operators {
            // vec(K) in (in, out) big-endian order: component (i*out + m) = K[m, i].
            let mut v = CMatrix::zeros(d, 1);
            for i in 0..in_dim {
                for m in 0..out_dim {
                    v[(i * out_dim + m, 0)] = k[(m, i)];
                }
            }
            entries += &v * v.adjoint();
        }
        entries /= c64(in_dim as f64, 0.0);
        let layout = SubsystemLayout::new(vec![in_dim, out_dim], vec!["in", "out"])
            .expect("two-subsystem Choi layout");
        Self {
            state: DensityMatrix::from_parts_unchecked(hermitize(&entries), layout),
            in_dim,
            out_dim,
        }
    }

    /// Wrap an existing state as a Choi matrix, validating the normalized
    /// trace-preservation condition (input marginal `I/in_dim`).
    pub fn new(state: DensityMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        Self::new_with_tol(state, in_dim, out_dim, crate::state::DEFAULT_TOL)
    }

    pub fn new_with_tol(state: DensityMatrix, in_dim: usize, out_dim: usize, tol: f64) -> Result<Self> {
        if state.dim() != in_dim * out_dim {
            return Err(Error::DimensionMismatch {
                expected: in_dim * out_dim,
                found: state.dim(),
            });
        }
        if state.layout().len() != 2 || state.layout().dims() != [in_dim, out_dim] {
            return Err(Error::InvalidLayout(format!(
                "Choi state layout must be [in:{in_dim} out:{out_dim}], got {}",
                state.layout()
            )));
        }
        let marginal = state.partial_trace(&[0])?;
        let scaled = marginal.entries() * c64(in_dim as f64, 0.0);
        let dev = crate::linalg::max_deviation_from_identity(&scaled);
        if dev > tol * in_dim as f64 {
            return Err(Error::InvalidState(format!(
                "input marginal deviates from I/{in_dim} by {dev:.3e}"
            )));
        }
        Ok(Self { state, in_dim, out_dim })
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Smallest eigenvalue of the Choi state (complete-positivity witness).
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(self.state.entries())
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Negativity across the input|output cut.
    pub fn negativity_across_cut(&self) -> f64 {
        negativity(&self.state, &[0]).expect("input subsystem always exists")
    }

    /// Whether zero negativity is conclusive for separability of this Choi
    /// state: the PPT criterion is exact only on 2x2 and 2x3 systems.
    pub fn ppt_conclusive(&self) -> bool {
        let (a, b) = (self.in_dim.min(self.out_dim), self.in_dim.max(self.out_dim));
        (a, b) == (2, 2) || (a, b) == (2, 3)
    }

    /// Kraus operators reconstructed from the spectral decomposition.
    pub(super) fn kraus_operators(&self) -> Vec<CMatrix> {
        let (eigs, vecs) = hermitian_eigen(self.state.entries());
        let mut operators = Vec::new();
        for (idx, lam) in eigs.iter().enumerate() {
            if *lam <= EIGENVALUE_CLAMP {
                continue;
            }
            let scale = (lam * self.in_dim as f64).sqrt();
            let mut k = CMatrix::zeros(self.out_dim, self.in_dim);
            for i in 0..self.in_dim {
                for m in 0..self.out_dim {
                    k[(m, i)] = vecs[(i * self.out_dim + m, idx)] * c64(scale, 0.0);
                }
            }
            operators.push(k);
        }
        operators
    }
}

/// Trace distance between the normalized Choi states of two channels with
/// matching input and output dimensions.
///
/// This is the crate's channel metric. It bounds the diamond-norm distance
/// two-sidedly: `choi distance <= diamond distance <= in_dim * choi distance`.
pub fn choi_trace_distance(a: &KrausChannel, b: &KrausChannel) -> Result<f64> {
    if a.in_dim() != b.in_dim() {
        return Err(Error::DimensionMismatch { expected: a.in_dim(), found: b.in_dim() });
    }
    if a.out_dim() != b.out_dim() {
        return Err(Error::DimensionMismatch { expected: a.out_dim(), found: b.out_dim() });
    }
    trace_distance(a.choi().state(), b.choi().state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn qubit() -> SubsystemLayout {
        SubsystemLayout::qubits(1)
    }

    #[test]
    fn identity_choi_is_bell_state_with_negativity_half() {
        let id = KrausChannel::identity(qubit());
        let choi = id.choi();
        // Bell state entries: 1/2 at the four corners of the {00, 11} block.
        let e = choi.state().entries();
        assert_abs_diff_eq!(e[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(e[(0, 3)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(e[(3, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(e[(3, 3)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(choi.negativity_across_cut(), 0.5, epsilon = 1e-10);
        assert!(choi.ppt_conclusive());
    }

    #[test]
    fn depolarizing_choi_is_maximally_mixed() {
        let ch = KrausChannel::fully_depolarizing_qubit(qubit()).unwrap();
        let choi = ch.choi();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(choi.state().entries()[(i, j)].re, expected, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(choi.negativity_across_cut(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_vs_depolarizing_choi_distance() {
        let id = KrausChannel::identity(qubit());
        let dep = KrausChannel::fully_depolarizing_qubit(qubit()).unwrap();
        // Trace distance between the Bell state and I/4.
        let d = choi_trace_distance(&id, &dep).unwrap();
        assert_abs_diff_eq!(d, 0.75, epsilon = 1e-10);
        assert_abs_diff_eq!(choi_trace_distance(&id, &id).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn choi_kraus_round_trip() {
        let dep = KrausChannel::fully_depolarizing_qubit(qubit()).unwrap();
        let rebuilt = KrausChannel::from_choi(dep.choi(), qubit(), qubit()).unwrap();
        let d = choi_trace_distance(&dep, &rebuilt).unwrap();
        assert!(d < 1e-9, "round-trip Choi distance {d}");
    }

    #[test]
    fn choi_validation_checks_input_marginal() {
        // A product state |0><0| ⊗ |0><0| has input marginal |0><0|, not I/2.
        let layout = SubsystemLayout::new(vec![2, 2], vec!["in", "out"]).unwrap();
        let bad = crate::state::Ket::basis_state(layout, 0).unwrap().density();
        assert!(ChoiMatrix::new(bad, 2, 2).is_err());
    }
}
