//! System–environment record interactions, as channels from the system qubit
//! to system ⊗ fragments.
//!
//! Each constructor returns an isometry channel: the unitary interaction acts
//! on an environment explicitly initialized to `|0...0>`, so the channel is
//! CPTP by construction. The system basis is `|0> = up`, `|1> = down`; output
//! subsystem 0 is the system, 1..=n are the fragments.

use super::budget::DimensionBudget;
use super::gates::apply_two_qubit_gate;
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg::{c64, CMatrix, CVector};
use crate::random::random_unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Layout of the interaction output: system qubit, then `n` fragment qubits.
pub fn system_fragment_layout(n: usize) -> SubsystemLayout {
    let mut labels = vec!["S".to_string()];
    labels.extend((1..=n).map(|i| format!("B{i}")));
    SubsystemLayout::new(vec![2; n + 1], labels).expect("system-fragment layout")
}

fn system_layout() -> SubsystemLayout {
    SubsystemLayout::single(2, "S").expect("system layout")
}

fn isometry_from_columns(col_up: CVector, col_down: CVector, n: usize) -> Result<KrausChannel> {
    let dim = col_up.len();
    let mut v = CMatrix::zeros(dim, 2);
    v.column_mut(0).copy_from(&col_up);
    v.column_mut(1).copy_from(&col_down);
    KrausChannel::isometry(v, system_layout(), system_fragment_layout(n))
}

/// Perfect record interaction: `|up, 0...0> -> |up, 0...0>` and
/// `|down, 0...0> -> |down, 1...1>`. Every fragment ends up holding the same
/// pointer-basis record of the system.
pub fn spam_interaction(n: usize, budget: &DimensionBudget) -> Result<KrausChannel> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one fragment".into()));
    }
    budget.require(n + 1)?;
    let dim = 1usize << (n + 1);
    let mut col_up = CVector::zeros(dim);
    col_up[0] = c64(1.0, 0.0);
    let mut col_down = CVector::zeros(dim);
    col_down[dim - 1] = c64(1.0, 0.0);
    isometry_from_columns(col_up, col_down, n)
}

/// Partial record interaction: conditioned on the system being down, each
/// fragment is rotated by `theta`, so the two per-fragment records have
/// overlap `cos(theta/2)`. `theta = pi` recovers the perfect record,
/// `theta = 0` records nothing.
pub fn partial_record_interaction(
    n: usize,
    theta: f64,
    budget: &DimensionBudget,
) -> Result<KrausChannel> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one fragment".into()));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta {theta} outside [0, pi]")));
    }
    budget.require(n + 1)?;
    let dim = 1usize << (n + 1);
    let mut col_up = CVector::zeros(dim);
    col_up[0] = c64(1.0, 0.0);
    // Down branch: |1> ⊗ (cos(theta/2)|0> + sin(theta/2)|1>)^{⊗n}.
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let mut col_down = CVector::zeros(dim);
    for e in 0..(1usize << n) {
        let ones = e.count_ones() as i32;
        col_down[(dim >> 1) + e] = c64(c.powi(n as i32 - ones) * s.powi(ones), 0.0);
    }
    isometry_from_columns(col_up, col_down, n)
}

/// Generic seeded interaction: `depth` layers of Haar-random two-qubit
/// unitaries coupling the system to each fragment and neighbouring fragments
/// pairwise, acting on the environment initialized to `|0...0>`.
/// Deterministic for a given seed.
pub fn random_interaction(
    n: usize,
    depth: usize,
    seed: u64,
    budget: &DimensionBudget,
) -> Result<KrausChannel> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one fragment".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("need at least one layer".into()));
    }
    budget.require(n + 1)?;
    let qubits = n + 1;
    let dim = 1usize << qubits;
    let mut col_up = CVector::zeros(dim);
    col_up[0] = c64(1.0, 0.0);
    let mut col_down = CVector::zeros(dim);
    col_down[dim >> 1] = c64(1.0, 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..depth {
        for fragment in 1..=n {
            let u = random_unitary(&mut rng, 4);
            apply_two_qubit_gate(&mut col_up, qubits, 0, fragment, &u);
            apply_two_qubit_gate(&mut col_down, qubits, 0, fragment, &u);
        }
        for fragment in 1..n {
            let u = random_unitary(&mut rng, 4);
            apply_two_qubit_gate(&mut col_up, qubits, fragment, fragment + 1, &u);
            apply_two_qubit_gate(&mut col_down, qubits, fragment, fragment + 1, &u);
        }
    }
    isometry_from_columns(col_up, col_down, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, CVector};
    use crate::measures::trace_distance;
    use crate::state::{DensityMatrix, Ket};
    use approx::assert_abs_diff_eq;

    fn balanced_input() -> DensityMatrix {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(
            CVector::from_vec(vec![c64(inv, 0.0), c64(inv, 0.0)]),
            SubsystemLayout::single(2, "S").unwrap(),
        )
        .unwrap()
        .density()
    }

    #[test]
    fn spam_on_superposition_builds_the_branch_state() {
        let ch = spam_interaction(3, &DimensionBudget::default()).unwrap();
        let v = ch.single_kraus().unwrap();
        let inv = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let input = CVector::from_vec(vec![inv, inv]);
        let global = v * input;
        // (|up,000> + |down,111>)/sqrt(2): amplitudes at flats 0 and 15.
        assert_abs_diff_eq!(global[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
        assert_abs_diff_eq!(global[15].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
        let rest: f64 = (1..15).map(|i| global[i].norm_sqr()).sum();
        assert_abs_diff_eq!(rest, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn spam_leaves_pointer_input_unchanged() {
        let ch = spam_interaction(2, &DimensionBudget::default()).unwrap();
        let up = Ket::basis_state(SubsystemLayout::single(2, "S").unwrap(), 0)
            .unwrap()
            .density();
        let out = ch.apply(&up).unwrap();
        assert_abs_diff_eq!(out.entries()[(0, 0)].re, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn spam_fragments_all_hold_the_same_mixture() {
        let ch = spam_interaction(4, &DimensionBudget::default()).unwrap();
        let out = ch.apply(&balanced_input()).unwrap();
        let mut marginals = Vec::new();
        for j in 1..=4 {
            let m = out.partial_trace(&[j]).unwrap();
            assert_abs_diff_eq!(m.entries()[(0, 0)].re, 0.5, epsilon = 1e-13);
            assert_abs_diff_eq!(m.entries()[(1, 1)].re, 0.5, epsilon = 1e-13);
            assert_abs_diff_eq!(m.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-13);
            marginals.push(m);
        }
        for a in &marginals {
            for b in &marginals {
                assert!(trace_distance(a, b).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn mixed_pointer_input_gives_matching_fragment_weights() {
        // diag(w, 1-w) input: every fragment marginal is diag(w, 1-w).
        let w = 0.3;
        let rho = DensityMatrix::new(
            CMatrix::from_row_slice(
                2,
                2,
                &[c64(w, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0 - w, 0.0)],
            ),
            SubsystemLayout::single(2, "S").unwrap(),
        )
        .unwrap();
        let ch = spam_interaction(3, &DimensionBudget::default()).unwrap();
        let out = ch.apply(&rho).unwrap();
        for j in 1..=3 {
            let m = out.partial_trace(&[j]).unwrap();
            assert_abs_diff_eq!(m.entries()[(0, 0)].re, w, epsilon = 1e-13);
            assert_abs_diff_eq!(m.entries()[(1, 1)].re, 1.0 - w, epsilon = 1e-13);
        }
    }

    #[test]
    fn spam_fragment_restrictions_reproduce_the_records() {
        let ch = spam_interaction(3, &DimensionBudget::default()).unwrap();
        for j in 1..=3 {
            let frag = ch.restrict_to_fragment(j).unwrap();
            // Superposition input: the fragment holds the half-half mixture.
            let mixed = frag.apply(&balanced_input()).unwrap();
            assert_abs_diff_eq!(mixed.entries()[(0, 0)].re, 0.5, epsilon = 1e-13);
            assert_abs_diff_eq!(mixed.entries()[(1, 1)].re, 0.5, epsilon = 1e-13);
            assert_abs_diff_eq!(mixed.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-13);
            // Pointer input: the fragment record is pure.
            let up = Ket::basis_state(SubsystemLayout::single(2, "S").unwrap(), 0)
                .unwrap()
                .density();
            let recorded = frag.apply(&up).unwrap();
            assert_abs_diff_eq!(recorded.entries()[(0, 0)].re, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn partial_record_limits_match_spam_and_identity() {
        let budget = DimensionBudget::default();
        let spam = spam_interaction(2, &budget).unwrap();
        let full = partial_record_interaction(2, std::f64::consts::PI, &budget).unwrap();
        let d = crate::channels::choi_trace_distance(&spam, &full).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);

        let none = partial_record_interaction(2, 0.0, &budget).unwrap();
        let out = none.apply(&balanced_input()).unwrap();
        let system = out.partial_trace(&[0]).unwrap();
        assert_abs_diff_eq!(system.entries()[(0, 1)].norm(), 0.5, epsilon = 1e-12);
        for j in 1..=2 {
            let frag = out.partial_trace(&[j]).unwrap();
            assert_abs_diff_eq!(frag.entries()[(0, 0)].re, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn partial_record_coherence_follows_overlap_power() {
        // System coherence after n fragments: cos(theta/2)^n / 2.
        let budget = DimensionBudget::default();
        let theta = std::f64::consts::FRAC_PI_2;
        let ch = partial_record_interaction(1, theta, &budget).unwrap();
        let out = ch.apply(&balanced_input()).unwrap();
        let system = out.partial_trace(&[0]).unwrap();
        assert_abs_diff_eq!(
            system.entries()[(0, 1)].norm(),
            0.5 * (theta / 2.0).cos(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(system.entries()[(0, 1)].norm(), 0.3535533905932738, epsilon = 1e-12);
    }

    #[test]
    fn random_interaction_is_deterministic_and_cptp() {
        let budget = DimensionBudget::default();
        let a = random_interaction(4, 2, 7, &budget).unwrap();
        let b = random_interaction(4, 2, 7, &budget).unwrap();
        assert_eq!(a.single_kraus().unwrap(), b.single_kraus().unwrap());
        assert!(a.validate_cptp(1e-9).passes());
        for j in 1..=4 {
            let frag = a.restrict_to_fragment(j).unwrap();
            assert!(frag.validate_cptp(1e-9).passes());
        }
        // Different seeds give different interactions.
        let c = random_interaction(4, 2, 8, &budget).unwrap();
        assert_ne!(a.single_kraus().unwrap(), c.single_kraus().unwrap());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let budget = DimensionBudget::default();
        assert!(spam_interaction(0, &budget).is_err());
        assert!(partial_record_interaction(1, -0.1, &budget).is_err());
        assert!(partial_record_interaction(1, 4.0, &budget).is_err());
        assert!(random_interaction(1, 0, 5, &budget).is_err());
        assert!(matches!(
            spam_interaction(15, &budget),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
