//! Fragment information curves and redundancy.

use crate::error::{Error, Result};
use crate::measures::{mutual_information, subsystem_entropy};
use crate::random::derive_seed;
use crate::state::DensityMatrix;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How fragment subsets are drawn for each curve point: exhaustive when the
/// subset count stays at or below `max_subsets`, otherwise that many seeded
/// uniform samples.
#[derive(Debug, Clone, Copy)]
pub struct SamplingPolicy {
    pub max_subsets: usize,
    pub seed: u64,
}

impl SamplingPolicy {
    pub const DEFAULT_MAX_SUBSETS: usize = 200;

    pub fn new(seed: u64) -> Self {
        Self { max_subsets: Self::DEFAULT_MAX_SUBSETS, seed }
    }
}

/// One point of an information curve.
#[derive(Debug, Clone, Copy)]
pub struct InfoPoint {
    pub fragment_size: usize,
    pub mean_information: f64,
    pub sample_count: usize,
}

/// Mean mutual information between the system and fragment subsets of each
/// size `m = 0..=n`.
#[derive(Debug, Clone)]
pub struct InfoCurve {
    pub points: Vec<InfoPoint>,
    pub system_entropy: f64,
}

impl InfoCurve {
    /// Number of fragments covered by the curve.
    pub fn fragment_count(&self) -> usize {
        self.points.last().map_or(0, |p| p.fragment_size)
    }
}

fn binomial_capped(n: usize, m: usize, cap: usize) -> usize {
    // Smallest of C(n, m) and cap + 1, without overflow.
    let m = m.min(n - m);
    let mut value: u128 = 1;
    for i in 0..m {
        value = value * (n - i) as u128 / (i + 1) as u128;
        if value > cap as u128 {
            return cap + 1;
        }
    }
    value as usize
}

/// Mutual information (in bits) between `global`'s `system` subsystem and
/// subsets of the remaining subsystems, per subset size.
///
/// Exhaustive over subsets when their count is within the policy cap,
/// otherwise averaged over `max_subsets` seeded uniform samples.
pub fn fragment_information_curve(
    global: &DensityMatrix,
    system: usize,
    policy: &SamplingPolicy,
) -> Result<InfoCurve> {
    let layout = global.layout();
    if system >= layout.len() {
        return Err(Error::IndexOutOfRange { index: system, len: layout.len() });
    }
    if layout.len() < 2 {
        return Err(Error::InvalidPartition("state needs a system and at least one fragment".into()));
    }
    let fragments: Vec<usize> = (0..layout.len()).filter(|&i| i != system).collect();
    let n = fragments.len();
    let system_entropy = subsystem_entropy(global, &[system])?;

    let info_of_subset = |subset: &[usize]| -> Result<f64> {
        let mut keep = subset.to_vec();
        keep.push(system);
        keep.sort_unstable();
        let reduced = global.partial_trace(&keep)?;
        let system_pos = keep.iter().position(|&i| i == system).expect("system kept");
        let others: Vec<usize> = (0..keep.len()).filter(|&i| i != system_pos).collect();
        mutual_information(&reduced, &[system_pos], &others)
    };

    let mut points = vec![InfoPoint { fragment_size: 0, mean_information: 0.0, sample_count: 1 }];
    for m in 1..=n {
        let count = binomial_capped(n, m, policy.max_subsets);
        let (total, samples) = if count <= policy.max_subsets {
            let mut total = 0.0;
            let mut samples = 0usize;
            for subset in fragments.iter().copied().combinations(m) {
                total += info_of_subset(&subset)?;
                samples += 1;
            }
            (total, samples)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(policy.seed, m as u64));
            let mut total = 0.0;
            for _ in 0..policy.max_subsets {
                let subset: Vec<usize> = fragments
                    .choose_multiple(&mut rng, m)
                    .copied()
                    .collect();
                total += info_of_subset(&subset)?;
            }
            (total, policy.max_subsets)
        };
        points.push(InfoPoint {
            fragment_size: m,
            mean_information: total / samples as f64,
            sample_count: samples,
        });
    }
    Ok(InfoCurve { points, system_entropy })
}

/// Redundancy `R_delta = n / m_delta`, where `m_delta` is the smallest
/// fragment-subset size whose mean information reaches `(1 - delta)` of the
/// system entropy.
pub fn redundancy(curve: &InfoCurve, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1)")));
    }
    if curve.system_entropy <= 0.0 {
        return Err(Error::InvalidState("system entropy is zero; redundancy undefined".into()));
    }
    let threshold = (1.0 - delta) * curve.system_entropy;
    let n = curve.fragment_count();
    for p in &curve.points {
        if p.fragment_size >= 1 && p.mean_information >= threshold {
            return Ok(n as f64 / p.fragment_size as f64);
        }
    }
    Err(Error::InvalidState(format!(
        "information curve never reaches {threshold:.6} bits"
    )))
}
