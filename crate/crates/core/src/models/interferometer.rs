//! Two-path interferometer with an optional which-path detector.
//!
//! The photon occupies two path modes `a` and `b` (single-photon sector of a
//! qubit pair); a third qubit models the detector environment on path `a`.
//! Everything is computed by explicit state evolution through the two beam
//! splitters, never from closed-form probabilities.

use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg::{c64, kron, CMatrix, CVector};
use crate::state::{DensityMatrix, HermitianOperator, Ket};

/// Outcome of one interferometer run.
#[derive(Debug, Clone)]
pub struct InterferometerResult {
    /// Probability of a click at detector A (photon exits on path `a`).
    pub p_detector_a: f64,
    /// Probability of a click at detector B.
    pub p_detector_b: f64,
    /// Photon state just before the second beam splitter, environment traced out.
    pub pre_bs2_reduced: DensityMatrix,
    /// Signed fringe visibility `P(B) - P(A)`; negative for an inverted fringe.
    pub visibility: f64,
}

/// Which environment superposition the eraser post-selects on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EraserOutcome {
    Plus,
    Minus,
}

fn mode_layout() -> SubsystemLayout {
    SubsystemLayout::new(vec![2, 2], vec!["a", "b"]).expect("mode layout")
}

fn full_layout() -> SubsystemLayout {
    SubsystemLayout::new(vec![2, 2, 2], vec!["a", "b", "D"]).expect("interferometer layout")
}

/// 50:50 beam splitter on the two path modes, acting on the single-photon
/// sector as `|10> -> (|10> + |01>)/sqrt(2)`, `|01> -> (|01> - |10>)/sqrt(2)`,
/// and as the identity on the empty and doubly-occupied patterns.
fn beam_splitter_modes() -> CMatrix {
    let inv = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    // Basis order |a b>: 00, 01, 10, 11 (columns are images of basis states).
    CMatrix::from_row_slice(
        4,
        4,
        &[
            one, zero, zero, zero, //
            zero, inv, inv, zero, //
            zero, -inv, inv, zero, //
            zero, zero, zero, one,
        ],
    )
}

/// Environment recording between the beam splitters: path `a` writes the
/// record state `|0>`, path `b` writes `gamma|0> + sqrt(1-gamma^2)|1>`, so the
/// two records have real overlap `gamma`.
fn recording_unitary(gamma: f64) -> CMatrix {
    let s = (1.0 - gamma * gamma).sqrt();
    let record_b = CMatrix::from_row_slice(
        2,
        2,
        &[c64(gamma, 0.0), c64(-s, 0.0), c64(s, 0.0), c64(gamma, 0.0)],
    );
    let id2 = CMatrix::identity(2, 2);
    let mut u = CMatrix::zeros(8, 8);
    // Block per mode pattern: |10> (flat 2) records via identity, |01> (flat 1)
    // records via the rotation, empty/double patterns leave the detector alone.
    for (pattern, env_op) in [(0usize, &id2), (1, &record_b), (2, &id2), (3, &id2)] {
        for r in 0..2 {
            for c in 0..2 {
                u[(2 * pattern + r, 2 * pattern + c)] = env_op[(r, c)];
            }
        }
    }
    u
}

fn evolve_to_recording(detector_on: bool, gamma: f64) -> Result<Ket> {
    let layout = full_layout();
    // Photon enters on path a with the detector ready: |1, 0, 0>.
    let mut state = CVector::zeros(8);
    state[4] = c64(1.0, 0.0);
    let bs = kron(&beam_splitter_modes(), &CMatrix::identity(2, 2));
    state = &bs * state;
    if detector_on {
        state = recording_unitary(gamma) * state;
    }
    Ket::new(state, layout)
}

fn finish_run(state: Ket) -> Result<InterferometerResult> {
    let pre_bs2_reduced = state.reduced_density_matrix(&[0, 1])?;
    let bs = kron(&beam_splitter_modes(), &CMatrix::identity(2, 2));
    let after = &bs * state.amplitudes();
    // Path patterns |1 0 D> occupy flats 4..6, |0 1 D> flats 2..4.
    let p_detector_a = after[4].norm_sqr() + after[5].norm_sqr();
    let p_detector_b = after[2].norm_sqr() + after[3].norm_sqr();
    Ok(InterferometerResult {
        p_detector_a,
        p_detector_b,
        pre_bs2_reduced,
        visibility: p_detector_b - p_detector_a,
    })
}

/// Run the interferometer with or without the which-path detector.
///
/// `overlap` is the real overlap of the two detector record states; it is
/// ignored when the detector is off.
pub fn mach_zehnder(detector_on: bool, overlap: f64) -> Result<InterferometerResult> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidParameter(format!(
            "record overlap {overlap} outside [0, 1]"
        )));
    }
    finish_run(evolve_to_recording(detector_on, overlap)?)
}

/// Erase the which-path record by post-selecting the detector environment on
/// `(|0> ± |1>)/sqrt(2)` before the second beam splitter, in the orthogonal
/// record scenario (detector on, overlap 0).
///
/// Returns the post-selected run and the post-selection probability.
pub fn erase_and_postselect(outcome: EraserOutcome) -> Result<(InterferometerResult, f64)> {
    let state = evolve_to_recording(true, 0.0)?;
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let sign = match outcome {
        EraserOutcome::Plus => 1.0,
        EraserOutcome::Minus => -1.0,
    };
    let env_state = Ket::new(
        CVector::from_vec(vec![c64(inv, 0.0), c64(sign * inv, 0.0)]),
        SubsystemLayout::single(2, "D")?,
    )?;
    let projector = HermitianOperator::identity(mode_layout()).tensor(&env_state.projector());
    let (projected, probability) = state.project_and_renormalize(&projector)?;
    Ok((finish_run(projected)?, probability))
}
