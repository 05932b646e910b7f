//! Cat–photon decoherence model.
//!
//! The cat qubit (basis: `|0> = dead`, `|1> = alive`) interacts with a chain
//! of photon qubits, each initialized "ready" in `|0>`. An alive cat leaves a
//! photon in `|0>`; a dead cat rotates it to the record state
//! `gamma|0> + sqrt(1-gamma^2)|1>`, so the two records have overlap `gamma`.

use super::budget::DimensionBudget;
use super::gates::{apply_two_qubit_gate, controlled_on, record_rotation};
use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg::{c64, CVector};
use crate::state::{DensityMatrix, Ket};

/// Pointer-basis states of the cat.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatState {
    Dead,
    Alive,
}

fn cat_layout(n_env: usize) -> SubsystemLayout {
    let mut labels = vec!["cat".to_string()];
    labels.extend((1..=n_env).map(|i| format!("ph{i}")));
    SubsystemLayout::new(vec![2; n_env + 1], labels).expect("cat layout")
}

fn record_gate(overlap: f64) -> crate::linalg::CMatrix {
    // Dead cat (control value 0) writes the rotated record.
    controlled_on(0, &record_rotation(overlap.acos()))
}

fn evolve(initial_cat: CVector, n_env: usize, overlap: f64) -> Result<Ket> {
    let layout = cat_layout(n_env);
    let dim = layout.total_dim();
    let mut state = CVector::zeros(dim);
    // Environment starts ready: cat amplitudes occupy the |...0...0> slots.
    state[0] = initial_cat[0];
    state[dim / 2] = initial_cat[1];
    let gate = record_gate(overlap);
    for photon in 1..=n_env {
        apply_two_qubit_gate(&mut state, n_env + 1, 0, photon, &gate);
    }
    Ket::new(state, layout)
}

/// Reduced cat state after a superposed cat, `(|dead> + |alive>)/sqrt(2)`,
/// has been recorded by `n_env` photons with pairwise record overlap
/// `overlap`. The surviving off-diagonal coherence is `overlap^n / 2`.
pub fn cat_photon(n_env: usize, overlap: f64, budget: &DimensionBudget) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidParameter(format!(
            "record overlap {overlap} outside [0, 1]"
        )));
    }
    budget.require(n_env + 1)?;
    let inv = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let state = evolve(CVector::from_vec(vec![inv, inv]), n_env, overlap)?;
    state.reduced_density_matrix(&[0])
}

/// Run a pointer-basis cat through the photon interaction and return its
/// reduced state, which equals the initial projector: the pointer states
/// survive the recording untouched.
pub fn pointer_state_check(initial: CatState) -> DensityMatrix {
    let cat = match initial {
        CatState::Dead => CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0)]),
        CatState::Alive => CVector::from_vec(vec![c64(0.0, 0.0), c64(1.0, 0.0)]),
    };
    let state = evolve(cat, 1, 0.0).expect("two-qubit evolution");
    state
        .reduced_density_matrix(&[0])
        .expect("cat subsystem exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn coherence(rho: &DensityMatrix) -> f64 {
        rho.entries()[(0, 1)].norm()
    }

    #[test]
    fn single_orthogonal_photon_fully_decoheres_the_cat() {
        let rho = cat_photon(1, 0.0, &DimensionBudget::default()).unwrap();
        assert_abs_diff_eq!(rho.entries()[(0, 0)].re, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(rho.entries()[(1, 1)].re, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(coherence(&rho), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn no_environment_keeps_the_superposition() {
        let rho = cat_photon(0, 0.7, &DimensionBudget::default()).unwrap();
        assert_abs_diff_eq!(coherence(&rho), 0.5, epsilon = 1e-13);
    }

    #[test]
    fn coherence_decays_as_overlap_to_the_n() {
        for (n, gamma) in [(1usize, 0.5f64), (3, 0.9), (6, 0.8), (10, 0.95)] {
            let rho = cat_photon(n, gamma, &DimensionBudget::default()).unwrap();
            assert_abs_diff_eq!(
                coherence(&rho),
                0.5 * gamma.powi(n as i32),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn twenty_photon_chain_matches_closed_form() {
        // State-vector route vs the closed form 0.9^20 / 2.
        let rho = cat_photon(20, 0.9, &DimensionBudget::new(21)).unwrap();
        assert_abs_diff_eq!(coherence(&rho), 0.5 * 0.9f64.powi(20), epsilon = 1e-10);
        assert_abs_diff_eq!(coherence(&rho), 0.06078832729528464, epsilon = 1e-10);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            cat_photon(20, 0.9, &DimensionBudget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn pointer_states_survive_recording() {
        let alive = pointer_state_check(CatState::Alive);
        assert_abs_diff_eq!(alive.entries()[(1, 1)].re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(alive.entries()[(0, 0)].re, 0.0, epsilon = 1e-13);
        let dead = pointer_state_check(CatState::Dead);
        assert_abs_diff_eq!(dead.entries()[(0, 0)].re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(dead.purity(), 1.0, epsilon = 1e-13);
    }
}
