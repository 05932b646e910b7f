//! Completely positive trace-preserving maps in operator-sum form.

use super::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg::{c64, hermitize, is_isometry, kron, max_deviation_from_identity, CMatrix};
use crate::state::{DensityMatrix, DEFAULT_TOL};
use std::sync::OnceLock;

/// A quantum channel given by Kraus operators (`out_dim` rows, `in_dim`
/// columns each), satisfying `sum K† K = I` within tolerance.
///
/// Kraus form is the primary representation; the Choi state is derived on
/// demand and cached by value.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
    in_layout: SubsystemLayout,
    out_layout: SubsystemLayout,
    choi_cache: OnceLock<ChoiMatrix>,
}

/// Result of a CPTP validation run: trace-preservation deviation and the
/// smallest Choi eigenvalue (complete positivity witness).
#[derive(Debug, Clone, Copy)]
pub struct CptpValidation {
    pub tp_deviation: f64,
    pub min_choi_eigenvalue: f64,
    pub tol: f64,
}

impl CptpValidation {
    pub fn passes(&self) -> bool {
        self.tp_deviation <= self.tol && self.min_choi_eigenvalue >= -self.tol
    }
}

impl KrausChannel {
    /// Build a channel from Kraus operators, validating shapes and trace
    /// preservation within `DEFAULT_TOL`.
    pub fn new(
        operators: Vec<CMatrix>,
        in_layout: SubsystemLayout,
        out_layout: SubsystemLayout,
    ) -> Result<Self> {
        Self::new_with_tol(operators, in_layout, out_layout, DEFAULT_TOL)
    }

    pub fn new_with_tol(
        operators: Vec<CMatrix>,
        in_layout: SubsystemLayout,
        out_layout: SubsystemLayout,
        tol: f64,
    ) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidOperator("channel needs at least one Kraus operator".into()));
        }
        let in_dim = in_layout.total_dim();
        let out_dim = out_layout.total_dim();
        for k in &operators {
            if k.nrows() != out_dim || k.ncols() != in_dim {
                return Err(Error::InvalidOperator(format!(
                    "Kraus operator is {}x{}, expected {out_dim}x{in_dim}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        let dev = Self::tp_deviation_of(&operators, in_dim);
        if dev > tol {
            return Err(Error::InvalidOperator(format!(
                "not trace preserving: |sum K†K - I| = {dev:.3e}"
            )));
        }
        Ok(Self { operators, in_layout, out_layout, choi_cache: OnceLock::new() })
    }

    fn tp_deviation_of(operators: &[CMatrix], in_dim: usize) -> f64 {
        let mut acc = CMatrix::zeros(in_dim, in_dim);
        for k in operators {
            acc += k.adjoint() * k;
        }
        max_deviation_from_identity(&acc)
    }

    /// Unitary conjugation channel `rho -> U rho U†`.
    pub fn unitary(u: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::InvalidOperator("unitary must be square".into()));
        }
        if u.nrows() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: u.nrows(),
            });
        }
        if !is_isometry(&u, DEFAULT_TOL) {
            return Err(Error::InvalidOperator("matrix is not unitary".into()));
        }
        Ok(Self {
            operators: vec![u],
            in_layout: layout.clone(),
            out_layout: layout,
            choi_cache: OnceLock::new(),
        })
    }

    /// Isometry channel `rho -> V rho V†` with `V† V = I` (e.g. a unitary
    /// interaction acting on a fixed initial environment).
    pub fn isometry(v: CMatrix, in_layout: SubsystemLayout, out_layout: SubsystemLayout) -> Result<Self> {
        if v.nrows() != out_layout.total_dim() || v.ncols() != in_layout.total_dim() {
            return Err(Error::InvalidOperator(format!(
                "isometry is {}x{}, expected {}x{}",
                v.nrows(),
                v.ncols(),
                out_layout.total_dim(),
                in_layout.total_dim()
            )));
        }
        if !is_isometry(&v, DEFAULT_TOL) {
            return Err(Error::InvalidOperator("columns are not orthonormal".into()));
        }
        Ok(Self { operators: vec![v], in_layout, out_layout, choi_cache: OnceLock::new() })
    }

    /// Identity channel on a layout.
    pub fn identity(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        Self {
            operators: vec![CMatrix::identity(d, d)],
            in_layout: layout.clone(),
            out_layout: layout,
            choi_cache: OnceLock::new(),
        }
    }

    /// Fully depolarizing qubit channel (Kraus set: Paulis over 2).
    pub fn fully_depolarizing_qubit(layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != 2 {
            return Err(Error::InvalidParameter("depolarizing constructor is qubit-only".into()));
        }
        let half = c64(0.5, 0.0);
        let operators = vec![
            crate::linalg::identity(2) * half,
            crate::linalg::pauli_x() * half,
            crate::linalg::pauli_y() * half,
            crate::linalg::pauli_z() * half,
        ];
        Ok(Self { operators, in_layout: layout.clone(), out_layout: layout, choi_cache: OnceLock::new() })
    }

    /// The channel that traces out every subsystem of `layout` not in `keep`.
    pub fn partial_trace_channel(layout: SubsystemLayout, keep: &[usize]) -> Result<Self> {
        let keep_sorted = layout.check_indices(keep)?;
        let kept_layout = layout.keep(&keep_sorted)?;
        let rest = layout.complement(&keep_sorted);
        let keep_off = layout.group_offsets(&keep_sorted);
        let rest_off = layout.group_offsets(&rest);
        let dk = keep_off.len();
        let dt = layout.total_dim();
        let mut operators = Vec::with_capacity(rest_off.len());
        for &e in &rest_off {
            let mut k = CMatrix::zeros(dk, dt);
            for (a, &ka) in keep_off.iter().enumerate() {
                k[(a, ka + e)] = c64(1.0, 0.0);
            }
            operators.push(k);
        }
        Ok(Self { operators, in_layout: layout, out_layout: kept_layout, choi_cache: OnceLock::new() })
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// The lone Kraus operator, when the channel is unitary or an isometry.
    pub fn single_kraus(&self) -> Option<&CMatrix> {
        if self.operators.len() == 1 {
            Some(&self.operators[0])
        } else {
            None
        }
    }

    pub fn in_layout(&self) -> &SubsystemLayout {
        &self.in_layout
    }

    pub fn out_layout(&self) -> &SubsystemLayout {
        &self.out_layout
    }

    pub fn in_dim(&self) -> usize {
        self.in_layout.total_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.out_layout.total_dim()
    }

    /// Apply the channel: `rho -> sum K rho K†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.in_dim() {
            return Err(Error::DimensionMismatch { expected: self.in_dim(), found: rho.dim() });
        }
        let mut out = CMatrix::zeros(self.out_dim(), self.out_dim());
        for k in &self.operators {
            out += k * rho.entries() * k.adjoint();
        }
        Ok(DensityMatrix::from_parts_unchecked(hermitize(&out), self.out_layout.clone()))
    }

    /// Sequential composition `self ∘ other`; `other` acts first.
    pub fn compose(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if !other.out_layout.same_dims(&self.in_layout) {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim(),
                found: other.out_dim(),
            });
        }
        let mut operators = Vec::with_capacity(self.operators.len() * other.operators.len());
        for f in &self.operators {
            for g in &other.operators {
                operators.push(f * g);
            }
        }
        Ok(KrausChannel {
            operators,
            in_layout: other.in_layout.clone(),
            out_layout: self.out_layout.clone(),
            choi_cache: OnceLock::new(),
        })
    }

    /// Parallel composition: Kraus set `{F_i ⊗ G_j}` on concatenated layouts.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let mut operators = Vec::with_capacity(self.operators.len() * other.operators.len());
        for f in &self.operators {
            for g in &other.operators {
                operators.push(kron(f, g));
            }
        }
        KrausChannel {
            operators,
            in_layout: self.in_layout.concat(&other.in_layout),
            out_layout: self.out_layout.concat(&other.out_layout),
            choi_cache: OnceLock::new(),
        }
    }

    /// Report trace-preservation deviation and the minimum Choi eigenvalue.
    pub fn validate_cptp(&self, tol: f64) -> CptpValidation {
        CptpValidation {
            tp_deviation: Self::tp_deviation_of(&self.operators, self.in_dim()),
            min_choi_eigenvalue: self.choi().min_eigenvalue(),
            tol,
        }
    }

    /// The (normalized) Choi state of the channel, computed once and cached.
    pub fn choi(&self) -> &ChoiMatrix {
        self.choi_cache.get_or_init(|| ChoiMatrix::of_kraus(&self.operators, self.in_dim(), self.out_dim()))
    }

    /// Restriction to a single output subsystem: trace out everything else.
    ///
    /// `fragment` indexes `out_layout`; for the interaction models in this
    /// crate the system sits at output index 0 and fragments at 1..=n.
    pub fn restrict_to_fragment(&self, fragment: usize) -> Result<KrausChannel> {
        if fragment >= self.out_layout.len() {
            return Err(Error::IndexOutOfRange { index: fragment, len: self.out_layout.len() });
        }
        let tracer = KrausChannel::partial_trace_channel(self.out_layout.clone(), &[fragment])?;
        tracer.compose(self)
    }

    /// Negativity of the Choi state across the input|output cut. Zero iff
    /// entanglement breaking for qubit-to-qubit channels (2x2 PPT is exact);
    /// for larger systems see [`ChoiMatrix::ppt_conclusive`].
    pub fn eb_negativity(&self) -> f64 {
        self.choi().negativity_across_cut()
    }

    /// Rebuild a Kraus channel from a Choi state (spectral decomposition).
    pub fn from_choi(
        choi: &ChoiMatrix,
        in_layout: SubsystemLayout,
        out_layout: SubsystemLayout,
    ) -> Result<KrausChannel> {
        if choi.in_dim() != in_layout.total_dim() || choi.out_dim() != out_layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: choi.in_dim() * choi.out_dim(),
                found: in_layout.total_dim() * out_layout.total_dim(),
            });
        }
        let operators = choi.kraus_operators();
        KrausChannel::new_with_tol(operators, in_layout, out_layout, 1e-8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_x, CVector};
    use crate::state::Ket;
    use approx::assert_abs_diff_eq;

    fn qubit() -> SubsystemLayout {
        SubsystemLayout::qubits(1)
    }

    #[test]
    fn unitary_channel_requires_unitarity() {
        assert!(KrausChannel::unitary(CMatrix::identity(2, 2), qubit()).is_ok());
        let bad = CMatrix::identity(2, 2) * c64(0.9, 0.0);
        assert!(KrausChannel::unitary(bad, qubit()).is_err());
    }

    #[test]
    fn bit_flip_moves_zero_to_one() {
        let x = KrausChannel::unitary(pauli_x(), qubit()).unwrap();
        let rho = Ket::basis_state(qubit(), 0).unwrap().density();
        let out = x.apply(&rho).unwrap();
        assert_abs_diff_eq!(out.entries()[(1, 1)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn depolarizing_sends_everything_to_maximally_mixed() {
        let ch = KrausChannel::fully_depolarizing_qubit(qubit()).unwrap();
        let rho = Ket::qubit(0.8, 0.3, "q").density();
        let out = ch.apply(&rho).unwrap();
        assert_abs_diff_eq!(out.entries()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(out.entries()[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(out.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn compose_applies_right_channel_first() {
        let x = KrausChannel::unitary(pauli_x(), qubit()).unwrap();
        let id = KrausChannel::identity(qubit());
        // X ∘ X = identity.
        let xx = x.compose(&x).unwrap();
        let d = super::super::choi_trace_distance(&xx, &id).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn compose_rejects_dimension_mismatch() {
        let tracer = KrausChannel::partial_trace_channel(SubsystemLayout::qubits(2), &[0]).unwrap();
        let x = KrausChannel::unitary(pauli_x(), qubit()).unwrap();
        // x expects a qubit input but tracer produces... qubit, so flip order:
        assert!(tracer.compose(&x).is_err());
    }

    #[test]
    fn validation_reports_scaled_identity_deviation() {
        // A single Kraus operator 0.9 I gives sum K†K = 0.81 I: deviation 0.19.
        let ops = vec![CMatrix::identity(2, 2) * c64(0.9, 0.0)];
        let dev = KrausChannel::tp_deviation_of(&ops, 2);
        assert_abs_diff_eq!(dev, 0.19, epsilon = 1e-12);
        assert!(KrausChannel::new(ops, qubit(), qubit()).is_err());
    }

    #[test]
    fn unitary_channels_validate_as_cptp() {
        let x = KrausChannel::unitary(pauli_x(), qubit()).unwrap();
        let report = x.validate_cptp(1e-10);
        assert!(report.passes());
        assert!(report.tp_deviation < 1e-12);
        assert!(report.min_choi_eigenvalue > -1e-12);
    }

    #[test]
    fn partial_trace_channel_matches_direct_partial_trace() {
        let layout = SubsystemLayout::qubits(2);
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Ket::new(
            CVector::from_vec(vec![c64(inv, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(inv, 0.0)]),
            layout.clone(),
        )
        .unwrap()
        .density();
        let tracer = KrausChannel::partial_trace_channel(layout, &[1]).unwrap();
        let via_channel = tracer.apply(&bell).unwrap();
        let direct = bell.partial_trace(&[1]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (via_channel.entries()[(i, j)] - direct.entries()[(i, j)]).norm(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn restriction_of_a_product_form_channel_recovers_the_factor() {
        // rho -> sigma ⊗ f(rho): restricting the output to the second factor
        // gives back f.
        let sigma = Ket::qubit(0.9, 0.4, "B0").density();
        let f = KrausChannel::unitary(pauli_x(), SubsystemLayout::single(2, "B1").unwrap()).unwrap();
        let (eigs, vecs) = crate::linalg::hermitian_eigen(sigma.entries());
        let mut operators = Vec::new();
        for (i, lam) in eigs.iter().enumerate() {
            if *lam <= 0.0 {
                continue;
            }
            let col = vecs.column(i).into_owned();
            let v = CMatrix::from_column_slice(2, 1, col.as_slice()) * c64(lam.sqrt(), 0.0);
            for k in f.operators() {
                operators.push(crate::linalg::kron(&v, k));
            }
        }
        let product = KrausChannel::new(
            operators,
            SubsystemLayout::single(2, "S").unwrap(),
            SubsystemLayout::new(vec![2, 2], vec!["B0", "B1"]).unwrap(),
        )
        .unwrap();
        let restricted = product.restrict_to_fragment(1).unwrap();
        let d = super::super::choi_trace_distance(&restricted, &f).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let id = KrausChannel::identity(qubit());
        let both = id.tensor(&id);
        let rho = Ket::qubit(1.0, 0.5, "a").tensor(&Ket::qubit(0.2, 0.0, "b")).density();
        let out = both.apply(&rho).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(
                    (out.entries()[(i, j)] - rho.entries()[(i, j)]).norm(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
    }
}
