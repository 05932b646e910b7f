//! Embedded acceptance suite.
//!
//! Each criterion pins its tolerances in code and runs against the library's
//! public surface; the `selftest` command prints one pass/fail line per
//! criterion, and the `acceptance` integration test target runs the same
//! functions one test per criterion.

use crate::config::{CommandKind, ModelKind, RunConfig};
use crate::run::execute_with_threads;
use qdarwin::darwin::{
    emergence_scan, fragment_information_curve, mp_fit, pointer_sieve, redundancy,
    system_purity_after, EmergenceConfig, InteractionFamily, SamplingPolicy,
};
use qdarwin::layout::SubsystemLayout;
use qdarwin::linalg::{c64, kron, CMatrix, CVector};
use qdarwin::measures::{fidelity, povm_probabilities, trace_distance};
use qdarwin::models::{
    cat_photon, erase_and_postselect, mach_zehnder, observer_cat_scenario, pointer_state_check,
    spam_interaction, CatState, DimensionBudget, EraserOutcome,
};
use qdarwin::random::{random_density_matrix, random_hermitian};
use qdarwin::state::{HermitianOperator, Ket};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Paper,
    Derived,
    Trivial,
}

pub struct Criterion {
    pub id: usize,
    pub tag: Tag,
    pub name: &'static str,
    pub run: fn() -> Result<(), String>,
}

fn close(actual: f64, expected: f64, tol: f64, what: &str) -> Result<(), String> {
    if (actual - expected).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: got {actual:.17e}, expected {expected:.17e} within {tol:.1e}"))
    }
}

fn entrywise(actual: &CMatrix, expected: &CMatrix, tol: f64, what: &str) -> Result<(), String> {
    for i in 0..actual.nrows() {
        for j in 0..actual.ncols() {
            let d = (actual[(i, j)] - expected[(i, j)]).norm();
            if d > tol {
                return Err(format!("{what}: entry ({i},{j}) off by {d:.3e} (tol {tol:.1e})"));
            }
        }
    }
    Ok(())
}

fn system_ket(alpha: f64) -> Ket {
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    Ket::new(
        CVector::from_vec(vec![c64(alpha, 0.0), c64(beta, 0.0)]),
        SubsystemLayout::single(2, "S").expect("layout"),
    )
    .expect("system ket")
}

fn criterion_1_interference_destruction() -> Result<(), String> {
    let start = Instant::now();
    let off = mach_zehnder(false, 0.0).map_err(|e| e.to_string())?;
    close(off.p_detector_a, 0.0, 1e-12, "detector off: P(A)")?;
    close(off.p_detector_b, 1.0, 1e-12, "detector off: P(B)")?;
    let on = mach_zehnder(true, 0.0).map_err(|e| e.to_string())?;
    close(on.p_detector_a, 0.5, 1e-12, "detector on: P(A)")?;
    close(on.p_detector_b, 0.5, 1e-12, "detector on: P(B)")?;
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        return Err(format!("runtime {elapsed:?} exceeds 1 s"));
    }
    Ok(())
}

fn criterion_2_partial_trace_equivalence() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ace);
    let layout = SubsystemLayout::qubits(3);
    for round in 0..200 {
        let rho = random_density_matrix(&mut rng, layout.clone());
        let local = random_hermitian(&mut rng, SubsystemLayout::qubits(1))
            .map_err(|e| e.to_string())?;
        let full = HermitianOperator::new(
            kron(local.entries(), &CMatrix::identity(4, 4)),
            layout.clone(),
        )
        .map_err(|e| e.to_string())?;
        let direct = rho.expectation(&full).map_err(|e| e.to_string())?;
        let reduced = rho
            .partial_trace(&[0])
            .and_then(|r| r.expectation(&local))
            .map_err(|e| e.to_string())?;
        close(direct, reduced, 1e-10, &format!("round {round}"))?;
    }
    Ok(())
}

fn criterion_3_cat_decoherence() -> Result<(), String> {
    let rho = cat_photon(1, 0.0, &DimensionBudget::default()).map_err(|e| e.to_string())?;
    let expected = CMatrix::from_row_slice(
        2,
        2,
        &[c64(0.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.5, 0.0)],
    );
    entrywise(rho.entries(), &expected, 1e-12, "decohered cat state")?;
    for (initial, index) in [(CatState::Alive, 1usize), (CatState::Dead, 0usize)] {
        let reduced = pointer_state_check(initial);
        let target = Ket::basis_state(SubsystemLayout::single(2, "cat").unwrap(), index)
            .unwrap()
            .density();
        let f = fidelity(&reduced, &target).map_err(|e| e.to_string())?;
        close(f, 1.0, 1e-12, &format!("pointer fidelity for {initial:?}"))?;
    }
    Ok(())
}

fn criterion_4_spam_objectivity() -> Result<(), String> {
    let budget = DimensionBudget::default();
    let balanced = std::f64::consts::FRAC_1_SQRT_2;
    for n in [2usize, 4, 8] {
        let channel = spam_interaction(n, &budget).map_err(|e| e.to_string())?;
        for alpha in [balanced, 0.6] {
            let out = channel
                .apply(&system_ket(alpha).density())
                .map_err(|e| e.to_string())?;
            let expected = CMatrix::from_row_slice(
                2,
                2,
                &[
                    c64(alpha * alpha, 0.0),
                    c64(0.0, 0.0),
                    c64(0.0, 0.0),
                    c64(1.0 - alpha * alpha, 0.0),
                ],
            );
            let mut marginals = Vec::new();
            for j in 1..=n {
                let m = out.partial_trace(&[j]).map_err(|e| e.to_string())?;
                entrywise(m.entries(), &expected, 1e-12, &format!("n={n} alpha={alpha} fragment {j}"))?;
                marginals.push(m);
            }
            for (i, a) in marginals.iter().enumerate() {
                for b in &marginals[i + 1..] {
                    let d = trace_distance(a, b).map_err(|e| e.to_string())?;
                    if d >= 1e-12 {
                        return Err(format!("n={n}: fragments differ by {d:.3e}"));
                    }
                }
            }
            if alpha == balanced {
                let povm = qdarwin::darwin::bloch::plus_minus_povm("B").map_err(|e| e.to_string())?;
                let p = povm_probabilities(&marginals[0], &povm).map_err(|e| e.to_string())?;
                close(p[0], 0.5, 1e-12, &format!("n={n}: plus probability"))?;
                close(p[1], 0.5, 1e-12, &format!("n={n}: minus probability"))?;
            }
        }
    }
    Ok(())
}

fn criterion_5_spam_is_measure_and_prepare() -> Result<(), String> {
    let budget = DimensionBudget::default();
    for n in 1..=6usize {
        let channel = spam_interaction(n, &budget).map_err(|e| e.to_string())?;
        for j in 1..=n {
            let restricted = channel.restrict_to_fragment(j).map_err(|e| e.to_string())?;
            let negativity = restricted.eb_negativity();
            if negativity >= 1e-9 {
                return Err(format!("n={n} j={j}: Choi negativity {negativity:.3e}"));
            }
            let fit = mp_fit(&restricted, 32).map_err(|e| e.to_string())?;
            if fit.distance >= 1e-9 {
                return Err(format!("n={n} j={j}: fit distance {:.3e}", fit.distance));
            }
        }
    }
    Ok(())
}

fn criterion_6_pointer_sieve() -> Result<(), String> {
    let channel = spam_interaction(2, &DimensionBudget::default()).map_err(|e| e.to_string())?;
    let sieve = pointer_sieve(&channel, 64).map_err(|e| e.to_string())?;
    if sieve.argmax.len() != 2 {
        return Err(format!("argmax set has {} points, expected 2", sieve.argmax.len()));
    }
    let mut poles: Vec<[f64; 3]> = sieve.argmax.iter().map(|&i| sieve.points[i].bloch).collect();
    poles.sort_by(|a, b| a[2].total_cmp(&b[2]));
    if poles[0] != [0.0, 0.0, -1.0] || poles[1] != [0.0, 0.0, 1.0] {
        return Err(format!("argmax is not the pointer basis: {poles:?}"));
    }
    for &i in &sieve.argmax {
        close(sieve.points[i].purity, 1.0, 1e-9, "pointer-state purity")?;
    }
    let plus = system_purity_after(&channel, [1.0, 0.0, 0.0]).map_err(|e| e.to_string())?;
    close(plus, 0.5, 1e-9, "purity at the balanced superposition")?;
    Ok(())
}

fn criterion_7_information_plateau() -> Result<(), String> {
    let budget = DimensionBudget::default();
    let channel = spam_interaction(4, &budget).map_err(|e| e.to_string())?;
    let global = channel
        .apply(&system_ket(std::f64::consts::FRAC_1_SQRT_2).density())
        .map_err(|e| e.to_string())?;
    let curve = fragment_information_curve(&global, 0, &SamplingPolicy::new(0))
        .map_err(|e| e.to_string())?;
    let expected = [0.0, 1.0, 1.0, 1.0, 2.0];
    if curve.points.len() != expected.len() {
        return Err(format!("curve has {} points, expected 5", curve.points.len()));
    }
    for (point, want) in curve.points.iter().zip(expected) {
        close(
            point.mean_information,
            want,
            1e-9,
            &format!("information at m={}", point.fragment_size),
        )?;
    }
    let r = redundancy(&curve, 0.1).map_err(|e| e.to_string())?;
    close(r, 4.0, 1e-12, "redundancy R_0.1")?;
    Ok(())
}

fn criterion_8_erasure() -> Result<(), String> {
    let (plus, p_plus) = erase_and_postselect(EraserOutcome::Plus).map_err(|e| e.to_string())?;
    close(plus.p_detector_a, 0.0, 1e-12, "plus outcome: P(A)")?;
    close(p_plus, 0.5, 1e-12, "plus outcome: probability")?;
    let (minus, p_minus) = erase_and_postselect(EraserOutcome::Minus).map_err(|e| e.to_string())?;
    close(minus.p_detector_a, 1.0, 1e-12, "minus outcome: P(A)")?;
    close(p_minus, 0.5, 1e-12, "minus outcome: probability")?;
    let mixture = p_plus * plus.p_detector_a + p_minus * minus.p_detector_a;
    close(mixture, 0.5, 1e-12, "probability-weighted mixture: P(A)")?;
    Ok(())
}

fn criterion_9_emergence_trend() -> Result<(), String> {
    let start = Instant::now();
    let config = EmergenceConfig {
        n_values: (1..=6).collect(),
        seeds_per_n: 100,
        family: InteractionFamily::Random { depth: 2 },
        master_seed: 42,
        mp_resolution: 32,
        budget: DimensionBudget::default(),
    };
    let scan = emergence_scan(&config).map_err(|e| e.to_string())?;
    let medians: Vec<f64> = scan.summaries.iter().map(|s| s.median_negativity).collect();
    for (i, pair) in medians.windows(2).enumerate() {
        if pair[1] > pair[0] + 1e-12 {
            return Err(format!(
                "median negativity increases from n={} ({:.6e}) to n={} ({:.6e})",
                i + 1,
                pair[0],
                i + 2,
                pair[1]
            ));
        }
    }
    if medians[5] >= 0.25 * medians[0] {
        return Err(format!(
            "median at n=6 ({:.6e}) is not below a quarter of n=1 ({:.6e})",
            medians[5], medians[0]
        ));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 600.0 {
        return Err(format!("runtime {elapsed:?} exceeds 10 minutes"));
    }
    Ok(())
}

fn criterion_10_observer_branch_mixture() -> Result<(), String> {
    let report = observer_cat_scenario(0.0).map_err(|e| e.to_string())?;
    if report.max_branch_coherence >= 1e-12 {
        return Err(format!("branch coherence {:.3e}", report.max_branch_coherence));
    }
    let reduced = report
        .full_state
        .reduced_density_matrix(&[0, 1])
        .map_err(|e| e.to_string())?;
    let mut expected = CMatrix::zeros(4, 4);
    expected[(1, 1)] = c64(0.5, 0.0); // |dead, sad>
    expected[(2, 2)] = c64(0.5, 0.0); // |alive, happy>
    entrywise(reduced.entries(), &expected, 1e-12, "observer branch mixture")?;
    Ok(())
}

fn criterion_11_determinism() -> Result<(), String> {
    let emergence = RunConfig {
        command: CommandKind::Emergence,
        n_min: 1,
        n_max: 2,
        seeds: 3,
        depth: 1,
        resolution: 16,
        seed: Some(7),
        detail: true,
        ..RunConfig::default()
    };
    let mut outputs = Vec::new();
    for threads in [1usize, 3, 1] {
        let config = RunConfig { threads, ..emergence.clone() };
        outputs.push(execute_with_threads(&config).map_err(|e| e.to_string())?);
    }
    if outputs[0] != outputs[1] || outputs[0] != outputs[2] {
        return Err("emergence CSV differs across runs or thread counts".into());
    }

    let mp = RunConfig {
        command: CommandKind::MpFit,
        model: ModelKind::Random,
        n: 2,
        depth: 2,
        fragment: 1,
        resolution: 16,
        seed: Some(11),
        ..RunConfig::default()
    };
    let a = execute_with_threads(&mp).map_err(|e| e.to_string())?;
    let b = execute_with_threads(&mp).map_err(|e| e.to_string())?;
    if a != b {
        return Err("mp-fit CSV differs between repeated runs".into());
    }

    // Ten fragments force subset sampling (C(10, 5) = 252 > 200).
    let curve = RunConfig {
        command: CommandKind::InfoCurve,
        n: 10,
        seed: Some(5),
        ..RunConfig::default()
    };
    let a = execute_with_threads(&curve).map_err(|e| e.to_string())?;
    let b = execute_with_threads(&curve).map_err(|e| e.to_string())?;
    if a != b {
        return Err("info-curve CSV differs between repeated runs".into());
    }

    let sieve = RunConfig {
        command: CommandKind::PointerSieve,
        model: ModelKind::Random,
        n: 2,
        depth: 1,
        resolution: 16,
        seed: Some(3),
        ..RunConfig::default()
    };
    let a = execute_with_threads(&sieve).map_err(|e| e.to_string())?;
    let b = execute_with_threads(&sieve).map_err(|e| e.to_string())?;
    if a != b {
        return Err("pointer-sieve CSV differs between repeated runs".into());
    }
    Ok(())
}

/// The full acceptance suite in criterion order.
pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, tag: Tag::Paper, name: "interference-destruction", run: criterion_1_interference_destruction },
        Criterion { id: 2, tag: Tag::Paper, name: "partial-trace-equivalence", run: criterion_2_partial_trace_equivalence },
        Criterion { id: 3, tag: Tag::Paper, name: "cat-decoherence", run: criterion_3_cat_decoherence },
        Criterion { id: 4, tag: Tag::Paper, name: "spam-objectivity", run: criterion_4_spam_objectivity },
        Criterion { id: 5, tag: Tag::Paper, name: "spam-measure-and-prepare", run: criterion_5_spam_is_measure_and_prepare },
        Criterion { id: 6, tag: Tag::Paper, name: "pointer-sieve", run: criterion_6_pointer_sieve },
        Criterion { id: 7, tag: Tag::Derived, name: "information-plateau", run: criterion_7_information_plateau },
        Criterion { id: 8, tag: Tag::Derived, name: "erasure", run: criterion_8_erasure },
        Criterion { id: 9, tag: Tag::Derived, name: "emergence-trend", run: criterion_9_emergence_trend },
        Criterion { id: 10, tag: Tag::Paper, name: "observer-branch-mixture", run: criterion_10_observer_branch_mixture },
        Criterion { id: 11, tag: Tag::Trivial, name: "determinism", run: criterion_11_determinism },
    ]
}

/// Run the suite and print one line per criterion. Returns the process exit
/// code: 0 when everything passes, 1 otherwise. `quick` restricts the run to
/// the externally anchored checks.
pub fn run_cli(quick: bool) -> i32 {
    let mut failures = 0usize;
    let mut ran = 0usize;
    for criterion in criteria() {
        if quick && criterion.tag != Tag::Paper {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        match (criterion.run)() {
            Ok(()) => {
                println!(
                    "PASS  {:>2} {:<28} ({:.2?})",
                    criterion.id,
                    criterion.name,
                    start.elapsed()
                );
            }
            Err(msg) => {
                failures += 1;
                println!(
                    "FAIL  {:>2} {:<28} ({:.2?}): {msg}",
                    criterion.id,
                    criterion.name,
                    start.elapsed()
                );
            }
        }
    }
    println!("{} of {ran} criteria passed", ran - failures);
    if failures == 0 {
        0
    } else {
        1
    }
}
