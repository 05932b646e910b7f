//! Scan of fragment channels over growing environments: how close each
//! system-to-fragment channel is to measure-and-prepare form.

use super::mpfit::mp_fit;
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::models::{partial_record_interaction, random_interaction, spam_interaction, DimensionBudget};
use crate::random::derive_seed;
use rayon::prelude::*;

/// Which interaction family the scan draws channels from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InteractionFamily {
    /// Seeded layers of Haar-random two-qubit couplings.
    Random { depth: usize },
    /// The perfect pointer-record interaction (seed-independent).
    Spam,
    /// Partial records with per-fragment rotation `theta` (seed-independent).
    PartialRecord { theta: f64 },
}

impl InteractionFamily {
    pub fn build(&self, n: usize, seed: u64, budget: &DimensionBudget) -> Result<KrausChannel> {
        match *self {
            InteractionFamily::Random { depth } => random_interaction(n, depth, seed, budget),
            InteractionFamily::Spam => spam_interaction(n, budget),
            InteractionFamily::PartialRecord { theta } => {
                partial_record_interaction(n, theta, budget)
            }
        }
    }
}

/// Scan configuration. Per-channel seeds are pre-derived from the master seed
/// so any parallel schedule yields identical output.
#[derive(Debug, Clone)]
pub struct EmergenceConfig {
    pub n_values: Vec<usize>,
    pub seeds_per_n: usize,
    pub family: InteractionFamily,
    pub master_seed: u64,
    pub mp_resolution: usize,
    pub budget: DimensionBudget,
}

/// One (environment size, seed, fragment) measurement.
#[derive(Debug, Clone, Copy)]
pub struct EmergenceRow {
    pub n: usize,
    pub seed_index: usize,
    pub seed: u64,
    pub fragment: usize,
    pub negativity: f64,
    pub mp_distance: f64,
    pub sigma_fidelity: f64,
    /// Whether zero negativity certifies separability for this fragment's
    /// Choi state (true for qubit fragments; a witness only beyond that).
    pub ppt_exact: bool,
}

/// Per-n statistics over all seeds and fragments.
#[derive(Debug, Clone, Copy)]
pub struct EmergenceSummary {
    pub n: usize,
    pub rows: usize,
    pub min_negativity: f64,
    pub median_negativity: f64,
    pub max_negativity: f64,
    pub min_mp_distance: f64,
    pub median_mp_distance: f64,
    pub max_mp_distance: f64,
}

#[derive(Debug, Clone)]
pub struct EmergenceScan {
    pub rows: Vec<EmergenceRow>,
    pub summaries: Vec<EmergenceSummary>,
}

impl EmergenceScan {
    pub fn summary_for(&self, n: usize) -> Option<&EmergenceSummary> {
        self.summaries.iter().find(|s| s.n == n)
    }
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// Run the scan: for every environment size, seed, and fragment, measure the
/// Choi negativity of the restricted channel and its distance to the fitted
/// measure-and-prepare channel.
///
/// Rows are independent work items evaluated in parallel; output order and
/// content are fixed by the configuration alone.
pub fn emergence_scan(config: &EmergenceConfig) -> Result<EmergenceScan> {
    if config.n_values.is_empty() {
        return Err(Error::InvalidParameter("scan needs at least one environment size".into()));
    }
    if config.seeds_per_n == 0 {
        return Err(Error::InvalidParameter("scan needs at least one seed per n".into()));
    }
    for &n in &config.n_values {
        if n == 0 {
            return Err(Error::InvalidParameter("environment sizes must be >= 1".into()));
        }
        config.budget.require(n + 1)?;
    }

    let tasks: Vec<(usize, usize, u64)> = config
        .n_values
        .iter()
        .flat_map(|&n| {
            (0..config.seeds_per_n).map(move |s| {
                let stream = ((n as u64) << 32) | s as u64;
                (n, s, derive_seed(config.master_seed, stream))
            })
        })
        .collect();

    let per_task: Vec<Result<Vec<EmergenceRow>>> = tasks
        .par_iter()
        .map(|&(n, seed_index, seed)| {
            let channel = config.family.build(n, seed, &config.budget)?;
            let mut rows = Vec::with_capacity(n);
            for fragment in 1..=n {
                let restricted = channel.restrict_to_fragment(fragment)?;
                let fit = mp_fit(&restricted, config.mp_resolution)?;
                rows.push(EmergenceRow {
                    n,
                    seed_index,
                    seed,
                    fragment,
                    negativity: restricted.eb_negativity(),
                    mp_distance: fit.distance,
                    sigma_fidelity: fit.sigma_fidelity,
                    ppt_exact: restricted.choi().ppt_conclusive(),
                });
            }
            Ok(rows)
        })
        .collect();

    let mut rows = Vec::new();
    for task_rows in per_task {
        rows.extend(task_rows?);
    }

    let summaries = config
        .n_values
        .iter()
        .map(|&n| {
            let mut negs: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.negativity).collect();
            let mut dists: Vec<f64> =
                rows.iter().filter(|r| r.n == n).map(|r| r.mp_distance).collect();
            EmergenceSummary {
                n,
                rows: negs.len(),
                min_negativity: negs.iter().copied().fold(f64::INFINITY, f64::min),
                max_negativity: negs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                median_negativity: median(&mut negs),
                min_mp_distance: dists.iter().copied().fold(f64::INFINITY, f64::min),
                max_mp_distance: dists.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                median_mp_distance: median(&mut dists),
            }
        })
        .collect();

    Ok(EmergenceScan { rows, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(family: InteractionFamily) -> EmergenceConfig {
        EmergenceConfig {
            n_values: vec![1, 2, 3],
            seeds_per_n: 4,
            family,
            master_seed: 42,
            mp_resolution: 16,
            budget: DimensionBudget::default(),
        }
    }

    #[test]
    fn single_fragments_typically_carry_entanglement() {
        let scan = emergence_scan(&small_config(InteractionFamily::Random { depth: 2 })).unwrap();
        let n1: Vec<&EmergenceRow> = scan.rows.iter().filter(|r| r.n == 1).collect();
        assert_eq!(n1.len(), 4);
        let positive = n1.iter().filter(|r| r.negativity > 1e-6).count();
        assert!(positive >= 3, "only {positive} of 4 single-fragment rows entangled");
    }

    #[test]
    fn spam_family_is_measure_and_prepare_at_every_size() {
        let scan = emergence_scan(&small_config(InteractionFamily::Spam)).unwrap();
        for row in &scan.rows {
            assert!(row.negativity < 1e-9, "n={} j={}", row.n, row.fragment);
            assert!(row.mp_distance < 1e-9, "n={} j={}", row.n, row.fragment);
        }
    }

    #[test]
    fn scan_is_reproducible_and_order_independent() {
        let config = small_config(InteractionFamily::Random { depth: 1 });
        let a = emergence_scan(&config).unwrap();
        let b = emergence_scan(&config).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.seed, rb.seed);
            assert_eq!(ra.negativity.to_bits(), rb.negativity.to_bits());
            assert_eq!(ra.mp_distance.to_bits(), rb.mp_distance.to_bits());
        }
        // Sequential evaluation gives byte-identical rows.
        let sequential = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| emergence_scan(&config).unwrap());
        for (ra, rb) in a.rows.iter().zip(&sequential.rows) {
            assert_eq!(ra.negativity.to_bits(), rb.negativity.to_bits());
        }
    }

    #[test]
    fn median_of_even_and_odd_slices() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn config_validation() {
        let mut config = small_config(InteractionFamily::Spam);
        config.n_values.clear();
        assert!(emergence_scan(&config).is_err());
        let mut config = small_config(InteractionFamily::Spam);
        config.seeds_per_n = 0;
        assert!(emergence_scan(&config).is_err());
        let mut config = small_config(InteractionFamily::Spam);
        config.n_values = vec![40];
        assert!(matches!(emergence_scan(&config), Err(Error::BudgetExceeded { .. })));
    }
}
