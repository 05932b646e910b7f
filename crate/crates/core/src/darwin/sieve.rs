//! Pointer-state sieve: which pure inputs survive a recording interaction.

use super::bloch::{bloch_ket, fibonacci_sphere};
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Purity of the system marginal after the channel, for one pure input.
#[derive(Debug, Clone, Copy)]
pub struct SievePoint {
    pub bloch: [f64; 3],
    pub purity: f64,
}

/// Full sieve map over a Bloch-sphere grid plus the set of maximizers.
#[derive(Debug, Clone)]
pub struct PointerSieve {
    pub points: Vec<SievePoint>,
    pub max_purity: f64,
    /// Indices of every grid point within `1e-9` of the maximum purity.
    pub argmax: Vec<usize>,
}

const ARGMAX_TOL: f64 = 1e-9;

fn system_output_index(channel: &KrausChannel) -> Result<usize> {
    if channel.in_dim() != 2 || channel.in_layout().len() != 1 {
        return Err(Error::InvalidParameter("sieve requires a single-qubit system input".into()));
    }
    let label = &channel.in_layout().labels()[0];
    channel.out_layout().position_of(label).ok_or_else(|| {
        Error::InvalidLayout(format!(
            "output layout {} does not contain the system `{label}`",
            channel.out_layout()
        ))
    })
}

/// Purity of the system marginal after the channel for the pure input along
/// `direction`.
pub fn system_purity_after(channel: &KrausChannel, direction: [f64; 3]) -> Result<f64> {
    let system_out = system_output_index(channel)?;
    purity_at(channel, system_out, direction)
}

fn purity_at(channel: &KrausChannel, system_out: usize, direction: [f64; 3]) -> Result<f64> {
    let label = channel.in_layout().labels()[0].clone();
    let input = bloch_ket(direction, label);
    let marginal: DensityMatrix = if let Some(v) = channel.single_kraus() {
        // Isometry channel: evolve the ket and reduce, skipping the full
        // output density matrix.
        let out = crate::state::Ket::new_with_tol(
            v * input.amplitudes(),
            channel.out_layout().clone(),
            1e-8,
        )?;
        out.reduced_density_matrix(&[system_out])?
    } else {
        channel.apply(&input.density())?.partial_trace(&[system_out])?
    };
    Ok(marginal.purity())
}

/// Evaluate the post-channel system purity over a Fibonacci-sphere grid of
/// pure inputs and report the maximizing set.
///
/// The channel must take a single qubit to a layout containing that qubit's
/// label (the interaction models put the system at output index 0).
pub fn pointer_sieve(channel: &KrausChannel, resolution: usize) -> Result<PointerSieve> {
    if resolution < 8 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution {resolution} below the minimum of 8"
        )));
    }
    let system_out = system_output_index(channel)?;
    let mut points = Vec::with_capacity(resolution);
    for direction in fibonacci_sphere(resolution) {
        let purity = purity_at(channel, system_out, direction)?;
        points.push(SievePoint { bloch: direction, purity });
    }
    let max_purity = points.iter().map(|p| p.purity).fold(f64::NEG_INFINITY, f64::max);
    let argmax = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.purity >= max_purity - ARGMAX_TOL)
        .map(|(i, _)| i)
        .collect();
    Ok(PointerSieve { points, max_purity, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::SubsystemLayout;
    use crate::models::{partial_record_interaction, spam_interaction, DimensionBudget};
    use approx::assert_abs_diff_eq;

    #[test]
    fn spam_sieve_singles_out_the_pointer_basis() {
        let ch = spam_interaction(2, &DimensionBudget::default()).unwrap();
        let sieve = pointer_sieve(&ch, 64).unwrap();
        assert_abs_diff_eq!(sieve.max_purity, 1.0, epsilon = 1e-9);
        assert_eq!(sieve.argmax.len(), 2);
        let mut poles: Vec<f64> = sieve.argmax.iter().map(|&i| sieve.points[i].bloch[2]).collect();
        poles.sort_by(f64::total_cmp);
        assert_eq!(poles, vec![-1.0, 1.0]);
        // A balanced superposition input scores 1/2.
        assert_abs_diff_eq!(
            system_purity_after(&ch, [1.0, 0.0, 0.0]).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn argmax_is_stable_across_resolutions() {
        let ch = spam_interaction(2, &DimensionBudget::default()).unwrap();
        for resolution in [32, 64, 128] {
            let sieve = pointer_sieve(&ch, resolution).unwrap();
            let mut poles: Vec<f64> =
                sieve.argmax.iter().map(|&i| sieve.points[i].bloch[2]).collect();
            poles.sort_by(f64::total_cmp);
            assert_eq!(poles, vec![-1.0, 1.0], "resolution {resolution}");
        }
    }

    #[test]
    fn identity_channel_keeps_every_input_pure() {
        let ch = crate::channels::KrausChannel::identity(SubsystemLayout::single(2, "S").unwrap());
        let sieve = pointer_sieve(&ch, 32).unwrap();
        assert_eq!(sieve.argmax.len(), 32);
        for p in &sieve.points {
            assert_abs_diff_eq!(p.purity, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn partial_record_equator_purity_matches_closed_form() {
        // theta = pi/2, one fragment: equator purity (1 + cos^2(pi/4))/2 = 0.75.
        let ch = partial_record_interaction(1, std::f64::consts::FRAC_PI_2, &DimensionBudget::default())
            .unwrap();
        let sieve = pointer_sieve(&ch, 64).unwrap();
        let mut poles: Vec<f64> = sieve.argmax.iter().map(|&i| sieve.points[i].bloch[2]).collect();
        poles.sort_by(f64::total_cmp);
        assert_eq!(poles, vec![-1.0, 1.0]);
        assert_abs_diff_eq!(
            system_purity_after(&ch, [1.0, 0.0, 0.0]).unwrap(),
            0.75,
            epsilon = 1e-12
        );
        let min = sieve.points.iter().map(|p| p.purity).fold(f64::INFINITY, f64::min);
        assert!(min >= 0.75 - 1e-9);
    }

    #[test]
    fn sieve_rejects_coarse_grids_and_non_qubit_systems() {
        let ch = spam_interaction(1, &DimensionBudget::default()).unwrap();
        assert!(pointer_sieve(&ch, 4).is_err());
        let two_qubit_id = crate::channels::KrausChannel::identity(SubsystemLayout::qubits(2));
        assert!(pointer_sieve(&two_qubit_id, 32).is_err());
    }
}
