//! Fitting a measure-and-prepare channel to a qubit-to-qubit channel.

use super::bloch::{basis_pair, fibonacci_sphere};
use crate::channels::{choi_trace_distance, KrausChannel, MeasureAndPrepareSpec, Povm};
use crate::error::{Error, Result};
use crate::measures::fidelity;

/// Best measure-and-prepare approximation found for a channel.
#[derive(Debug, Clone)]
pub struct MpFit {
    pub spec: MeasureAndPrepareSpec,
    /// Choi trace distance between the fitted channel and the target.
    pub distance: f64,
    /// Bloch direction of the fitted projective measurement basis.
    pub basis_direction: [f64; 3],
    /// Pairwise fidelity of the two prepared states; 1 means the records are
    /// indistinguishable, 0 means orthogonal.
    pub sigma_fidelity: f64,
}

const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

fn direction_from_angles(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Candidate spec for one measurement direction: measure along the basis pair
/// and prepare whatever the channel itself produces on those basis states.
fn candidate(channel: &KrausChannel, direction: [f64; 3]) -> Result<(MeasureAndPrepareSpec, f64)> {
    let label = &channel.in_layout().labels()[0];
    let (up, down) = basis_pair(direction, label);
    let povm = Povm::projective(&[up.clone(), down.clone()])?;
    let prepared = vec![channel.apply(&up.density())?, channel.apply(&down.density())?];
    let spec = MeasureAndPrepareSpec::new(povm, prepared, label.clone())?;
    let fitted = spec.to_channel()?;
    let distance = choi_trace_distance(&fitted, channel)?;
    Ok((spec, distance))
}

fn golden_section<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    iterations: usize,
) -> Result<f64> {
    let mut x1 = hi - (hi - lo) / GOLDEN_RATIO;
    let mut x2 = lo + (hi - lo) / GOLDEN_RATIO;
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iterations {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - (hi - lo) / GOLDEN_RATIO;
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + (hi - lo) / GOLDEN_RATIO;
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Search projective qubit measurement bases for the measure-and-prepare
/// channel closest (in Choi trace distance) to `channel`.
///
/// A Fibonacci grid of `resolution` directions is scanned, followed by one
/// golden-section refinement pass per spherical angle around the best grid
/// point; the best candidate seen anywhere is returned.
pub fn mp_fit(channel: &KrausChannel, resolution: usize) -> Result<MpFit> {
    if channel.in_dim() != 2 || channel.out_dim() != 2 {
        return Err(Error::InvalidParameter("fit requires a qubit-to-qubit channel".into()));
    }
    if resolution < 8 {
        return Err(Error::InvalidParameter(format!(
            "basis grid resolution {resolution} below the minimum of 8"
        )));
    }
    let mut best_direction = [0.0, 0.0, 1.0];
    let mut best: Option<(MeasureAndPrepareSpec, f64)> = None;
    for direction in fibonacci_sphere(resolution) {
        let (spec, distance) = candidate(channel, direction)?;
        if best.as_ref().is_none_or(|(_, d)| distance < *d) {
            best = Some((spec, distance));
            best_direction = direction;
        }
    }
    let (mut best_spec, mut best_distance) = best.expect("grid is nonempty");

    // Local refinement around the best grid point, one angle at a time.
    let [x, y, z] = best_direction;
    let mut theta = z.clamp(-1.0, 1.0).acos();
    let mut phi = y.atan2(x);
    let window = 2.0 / (resolution as f64).sqrt();
    theta = golden_section(
        |t| Ok(candidate(channel, direction_from_angles(t, phi))?.1),
        (theta - window).max(0.0),
        (theta + window).min(std::f64::consts::PI),
        24,
    )?;
    phi = golden_section(
        |p| Ok(candidate(channel, direction_from_angles(theta, p))?.1),
        phi - window,
        phi + window,
        24,
    )?;
    let refined_direction = direction_from_angles(theta, phi);
    let (refined_spec, refined_distance) = candidate(channel, refined_direction)?;
    if refined_distance < best_distance {
        best_spec = refined_spec;
        best_distance = refined_distance;
        best_direction = refined_direction;
    }

    let sigma_fidelity = fidelity(&best_spec.prepared()[0], &best_spec.prepared()[1])?;
    Ok(MpFit {
        spec: best_spec,
        distance: best_distance,
        basis_direction: best_direction,
        sigma_fidelity,
    })
}
