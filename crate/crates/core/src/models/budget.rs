//! Dense dimension budget for scenario constructors.

use crate::error::{Error, Result};

/// Cap on the total qubit count a dense scenario may allocate.
///
/// The default of 12 qubits (dimension 4096) keeps full density matrices at
/// desk scale; raise it explicitly for state-vector-only scenarios such as
/// long cat–photon chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionBudget {
    max_qubits: usize,
}

impl DimensionBudget {
    pub const DEFAULT_QUBITS: usize = 12;

    pub fn new(max_qubits: usize) -> Self {
        Self { max_qubits }
    }

    pub fn max_qubits(&self) -> usize {
        self.max_qubits
    }

    pub fn require(&self, qubits: usize) -> Result<()> {
        if qubits > self.max_qubits {
            Err(Error::BudgetExceeded { qubits, budget: self.max_qubits })
        } else {
            Ok(())
        }
    }
}

impl Default for DimensionBudget {
    fn default() -> Self {
        Self { max_qubits: Self::DEFAULT_QUBITS }
    }
}
