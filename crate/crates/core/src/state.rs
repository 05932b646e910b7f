//! Pure states, density matrices, and Hermitian operators over explicit
//! tensor-product layouts.
//!
//! All values are immutable after construction. Constructors validate the
//! defining invariants (norm, Hermiticity, unit trace, positivity) against a
//! tolerance, `DEFAULT_TOL` unless a `_with_tol` variant is used.

use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg::{c64, hermitian_eigenvalues, kron, kron_vec, CMatrix, CVector};
use num_complex::Complex64;

/// Default tolerance for every invariant check in the crate.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A pure state: complex amplitudes over a subsystem layout.
#[derive(Debug, Clone)]
pub struct Ket {
    amplitudes: CVector,
    layout: SubsystemLayout,
}

impl Ket {
    /// Build a ket, requiring unit norm within `DEFAULT_TOL`.
    pub fn new(amplitudes: CVector, layout: SubsystemLayout) -> Result<Self> {
        Self::new_with_tol(amplitudes, layout, DEFAULT_TOL)
    }

    pub fn new_with_tol(amplitudes: CVector, layout: SubsystemLayout, tol: f64) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("ket norm is {norm}, expected 1")));
        }
        Ok(Self { amplitudes, layout })
    }

    /// Build a ket from raw amplitudes, normalizing them.
    pub fn normalized(amplitudes: CVector, layout: SubsystemLayout) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if norm < DEFAULT_TOL {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes / c64(norm, 0.0),
            layout,
        })
    }

    /// Computational basis state `|index>` of the given layout.
    pub fn basis_state(layout: SubsystemLayout, index: usize) -> Result<Self> {
        if index >= layout.total_dim() {
            return Err(Error::IndexOutOfRange { index, len: layout.total_dim() });
        }
        let mut amplitudes = CVector::zeros(layout.total_dim());
        amplitudes[index] = c64(1.0, 0.0);
        Ok(Self { amplitudes, layout })
    }

    /// Single-qubit state `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn qubit(theta: f64, phi: f64, label: impl Into<String>) -> Self {
        let layout = SubsystemLayout::single(2, label).expect("single qubit layout");
        let amplitudes = CVector::from_vec(vec![
            c64((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ]);
        Self { amplitudes, layout }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Tensor product; `self` becomes the most significant factor.
    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
            layout: self.layout.concat(&other.layout),
        }
    }

    /// The projector `|self><self|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let entries = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix { entries, layout: self.layout.clone() }
    }

    /// The projector `|self><self|` as a Hermitian operator.
    pub fn projector(&self) -> HermitianOperator {
        HermitianOperator {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
            layout: self.layout.clone(),
        }
    }

    /// Reduced density matrix of the kept subsystems, computed directly from
    /// the amplitudes (no intermediate full-space density matrix).
    pub fn reduced_density_matrix(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep_sorted = self.layout.check_indices(keep)?;
        let new_layout = self.layout.keep(&keep_sorted)?;
        let rest = self.layout.complement(&keep_sorted);
        let keep_off = self.layout.group_offsets(&keep_sorted);
        let rest_off = self.layout.group_offsets(&rest);
        let dk = keep_off.len();
        let mut entries = CMatrix::zeros(dk, dk);
        for (a, &ka) in keep_off.iter().enumerate() {
            for (b, &kb) in keep_off.iter().enumerate() {
                let mut acc = c64(0.0, 0.0);
                for &e in &rest_off {
                    acc += self.amplitudes[ka + e] * self.amplitudes[kb + e].conj();
                }
                entries[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix { entries, layout: new_layout })
    }

    /// Apply a projector and renormalize: returns the post-selected state and
    /// the outcome probability `|P psi|^2`.
    ///
    /// Fails when the projector is not idempotent or the outcome has
    /// (numerically) zero probability.
    pub fn project_and_renormalize(&self, projector: &HermitianOperator) -> Result<(Ket, f64)> {
        self.project_and_renormalize_with_tol(projector, DEFAULT_TOL)
    }

    pub fn project_and_renormalize_with_tol(
        &self,
        projector: &HermitianOperator,
        tol: f64,
    ) -> Result<(Ket, f64)> {
        if projector.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: projector.dim() });
        }
        let p2 = &projector.entries * &projector.entries;
        let dev = (&p2 - &projector.entries).norm();
        if dev > tol * (projector.dim() as f64) {
            return Err(Error::InvalidOperator(format!(
                "projector is not idempotent: |P^2 - P| = {dev:.3e}"
            )));
        }
        let projected = &projector.entries * &self.amplitudes;
        let prob = projected.norm_squared();
        if prob < tol {
            return Err(Error::ZeroProbability(format!(
                "post-selection probability {prob:.3e}"
            )));
        }
        let state = Ket {
            amplitudes: projected / c64(prob.sqrt(), 0.0),
            layout: self.layout.clone(),
        };
        Ok((state, prob))
    }
}

/// A mixed state: Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: CMatrix,
    layout: SubsystemLayout,
}

impl DensityMatrix {
    /// Build a density matrix, validating Hermiticity, unit trace, and
    /// positivity within `DEFAULT_TOL`.
    pub fn new(entries: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        Self::new_with_tol(entries, layout, DEFAULT_TOL)
    }

    pub fn new_with_tol(entries: CMatrix, layout: SubsystemLayout, tol: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        if entries.nrows() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: entries.nrows(),
            });
        }
        let herm_dev = (&entries - entries.adjoint()).norm();
        if herm_dev > tol * (entries.nrows() as f64) {
            return Err(Error::InvalidState(format!(
                "not Hermitian: |rho - rho†| = {herm_dev:.3e}"
            )));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min_eig = hermitian_eigenvalues(&entries)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { entries, layout })
    }

    /// Internal constructor for operation outputs that preserve validity by
    /// construction (partial traces, Kraus sums of valid inputs).
    pub(crate) fn from_parts_unchecked(entries: CMatrix, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(entries.nrows(), layout.total_dim());
        Self { entries, layout }
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        let entries = CMatrix::identity(d, d) * c64(1.0 / d as f64, 0.0);
        Self { entries, layout }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `Tr(rho^2)`, in `[1/d, 1]`.
    pub fn purity(&self) -> f64 {
        // For Hermitian rho, Tr(rho^2) = sum of |entries|^2.
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Tensor product; `self` becomes the most significant factor.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            entries: kron(&self.entries, &other.entries),
            layout: self.layout.concat(&other.layout),
        }
    }

    /// Trace out every subsystem not in `keep`; the kept subsystems stay in
    /// their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep_sorted = self.layout.check_indices(keep)?;
        let new_layout = self.layout.keep(&keep_sorted)?;
        let rest = self.layout.complement(&keep_sorted);
        let keep_off = self.layout.group_offsets(&keep_sorted);
        let rest_off = self.layout.group_offsets(&rest);
        let dk = keep_off.len();
        let mut entries = CMatrix::zeros(dk, dk);
        for (a, &ka) in keep_off.iter().enumerate() {
            for (b, &kb) in keep_off.iter().enumerate() {
                let mut acc = c64(0.0, 0.0);
                for &e in &rest_off {
                    acc += self.entries[(ka + e, kb + e)];
                }
                entries[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix { entries, layout: new_layout })
    }

    /// Transpose the chosen tensor factors only. The result is Hermitian but
    /// in general not positive, so it is returned as an operator.
    pub fn partial_transpose(&self, part: &[usize]) -> Result<HermitianOperator> {
        let part_sorted = self.layout.check_indices(part)?;
        let rest = self.layout.complement(&part_sorted);
        let part_off = self.layout.group_offsets(&part_sorted);
        let rest_off = self.layout.group_offsets(&rest);
        let d = self.dim();
        let mut entries = CMatrix::zeros(d, d);
        for &pr in &part_off {
            for &pc in &part_off {
                for &rr in &rest_off {
                    for &rc in &rest_off {
                        // Swap the transposed group's digits between row and column.
                        entries[(pc + rr, pr + rc)] = self.entries[(pr + rr, pc + rc)];
                    }
                }
            }
        }
        Ok(HermitianOperator { entries, layout: self.layout.clone() })
    }

    /// `Tr(rho M)` for a Hermitian observable; the imaginary residue is
    /// checked against `DEFAULT_TOL` in debug builds.
    pub fn expectation(&self, observable: &HermitianOperator) -> Result<f64> {
        if observable.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: observable.dim(),
            });
        }
        let mut acc = c64(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.entries[(i, j)] * observable.entries[(j, i)];
            }
        }
        debug_assert!(acc.im.abs() < DEFAULT_TOL * self.dim() as f64);
        Ok(acc.re)
    }
}

/// A Hermitian matrix over a layout: observables, POVM elements, projectors.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    entries: CMatrix,
    layout: SubsystemLayout,
}

impl HermitianOperator {
    pub fn new(entries: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        Self::new_with_tol(entries, layout, DEFAULT_TOL)
    }

    pub fn new_with_tol(entries: CMatrix, layout: SubsystemLayout, tol: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidOperator("operator must be square".into()));
        }
        if entries.nrows() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: entries.nrows(),
            });
        }
        let dev = (&entries - entries.adjoint()).norm();
        if dev > tol * (entries.nrows() as f64) {
            return Err(Error::InvalidOperator(format!(
                "not Hermitian: |M - M†| = {dev:.3e}"
            )));
        }
        Ok(Self { entries, layout })
    }

    pub fn identity(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        Self { entries: CMatrix::identity(d, d), layout }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Tensor product; `self` becomes the most significant factor.
    pub fn tensor(&self, other: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            entries: kron(&self.entries, &other.entries),
            layout: self.layout.concat(&other.layout),
        }
    }
}
