//! Generalized measurements and measure-and-prepare channels.

use super::kraus::KrausChannel;
use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg::{c64, hermitian_eigen, max_deviation_from_identity, CMatrix};
use crate::measures::EIGENVALUE_CLAMP;
use crate::state::{DensityMatrix, HermitianOperator, Ket, DEFAULT_TOL};

/// A positive operator-valued measure: PSD elements summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianOperator>) -> Result<Self> {
        Self::new_with_tol(elements, DEFAULT_TOL)
    }

    pub fn new_with_tol(elements: Vec<HermitianOperator>, tol: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidOperator("POVM needs at least one element".into()));
        }
        let dim = elements[0].dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for (k, m) in elements.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            let min_eig = crate::linalg::hermitian_eigenvalues(m.entries())
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if min_eig < -tol {
                return Err(Error::InvalidOperator(format!(
                    "POVM element {k} has negative eigenvalue {min_eig:.3e}"
                )));
            }
            sum += m.entries();
        }
        let dev = max_deviation_from_identity(&sum);
        if dev > tol {
            return Err(Error::InvalidOperator(format!(
                "POVM elements sum to I only within {dev:.3e}"
            )));
        }
        Ok(Self { elements })
    }

    /// Projective measurement onto the given (orthonormal) states.
    pub fn projective(states: &[Ket]) -> Result<Self> {
        Self::new(states.iter().map(Ket::projector).collect())
    }

    /// The single-outcome POVM `{I}`.
    pub fn trivial(layout: SubsystemLayout) -> Self {
        Self { elements: vec![HermitianOperator::identity(layout)] }
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn layout(&self) -> &SubsystemLayout {
        self.elements[0].layout()
    }
}

/// A measurement `{M_k}` paired with prepared states `{sigma_k}`, one per
/// outcome: the data of a measure-and-prepare channel
/// `rho -> sum_k Tr(M_k rho) sigma_k`.
#[derive(Debug, Clone)]
pub struct MeasureAndPrepareSpec {
    povm: Povm,
    prepared: Vec<DensityMatrix>,
    fragment_label: String,
}

impl MeasureAndPrepareSpec {
    pub fn new(povm: Povm, prepared: Vec<DensityMatrix>, fragment_label: impl Into<String>) -> Result<Self> {
        if prepared.len() != povm.len() {
            return Err(Error::InvalidOperator(format!(
                "{} prepared states for {} POVM outcomes",
                prepared.len(),
                povm.len()
            )));
        }
        let out_dim = prepared[0].dim();
        if prepared.iter().any(|s| s.dim() != out_dim) {
            return Err(Error::InvalidOperator("prepared states must share one layout".into()));
        }
        Ok(Self { povm, prepared, fragment_label: fragment_label.into() })
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn prepared(&self) -> &[DensityMatrix] {
        &self.prepared
    }

    pub fn fragment_label(&self) -> &str {
        &self.fragment_label
    }

    /// Evaluate `sum_k Tr(M_k rho) sigma_k` directly from the definition.
    ///
    /// This is the independent evaluation path used to cross-check the Kraus
    /// construction in [`Self::to_channel`]; keep the two separate.
    pub fn apply_direct(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out_dim = self.prepared[0].dim();
        let mut entries = CMatrix::zeros(out_dim, out_dim);
        for (m, sigma) in self.povm.elements().iter().zip(&self.prepared) {
            let p = rho.expectation(m)?;
            entries += sigma.entries() * c64(p, 0.0);
        }
        Ok(DensityMatrix::from_parts_unchecked(entries, self.prepared[0].layout().clone()))
    }

    /// Build the measure-and-prepare channel in Kraus form.
    ///
    /// For each outcome the Kraus factors are `sqrt(m_a s_b) |v_b><u_a|` from
    /// the spectral decompositions `M_k = sum m_a |u_a><u_a|` and
    /// `sigma_k = sum s_b |v_b><v_b|`; such channels are entanglement breaking
    /// by construction.
    pub fn to_channel(&self) -> Result<KrausChannel> {
        let in_dim = self.povm.dim();
        let out_dim = self.prepared[0].dim();
        let mut operators = Vec::new();
        for (m, sigma) in self.povm.elements().iter().zip(&self.prepared) {
            let (m_eigs, m_vecs) = hermitian_eigen(m.entries());
            let (s_eigs, s_vecs) = hermitian_eigen(sigma.entries());
            for (a, ma) in m_eigs.iter().enumerate() {
                if *ma <= EIGENVALUE_CLAMP {
                    continue;
                }
                for (b, sb) in s_eigs.iter().enumerate() {
                    if *sb <= EIGENVALUE_CLAMP {
                        continue;
                    }
                    let scale = c64((ma * sb).sqrt(), 0.0);
                    let mut k = CMatrix::zeros(out_dim, in_dim);
                    for row in 0..out_dim {
                        for col in 0..in_dim {
                            k[(row, col)] = scale * s_vecs[(row, b)] * m_vecs[(col, a)].conj();
                        }
                    }
                    operators.push(k);
                }
            }
        }
        KrausChannel::new_with_tol(
            operators,
            self.povm.layout().clone(),
            self.prepared[0].layout().clone(),
            1e-8,
        )
    }
}
