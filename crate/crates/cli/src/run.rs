//! Command execution: build the scenario, compute metrics, emit CSV.

use crate::config::{CommandKind, EraserChoice, ModelKind, RunConfig};
use crate::error::CliError;
use crate::table::{fmt_real, Table};
use qdarwin::channels::KrausChannel;
use qdarwin::darwin::{
    emergence_scan, fragment_information_curve, mp_fit, pointer_sieve, redundancy,
    EmergenceConfig, InteractionFamily, SamplingPolicy,
};
use qdarwin::layout::SubsystemLayout;
use qdarwin::linalg::{c64, CVector};
use qdarwin::measures::{povm_probabilities, trace_distance};
use qdarwin::models::{
    cat_photon, erase_and_postselect, mach_zehnder, partial_record_interaction,
    random_interaction, spam_interaction, DimensionBudget, EraserOutcome,
};
use qdarwin::state::{DensityMatrix, Ket};

fn budget(config: &RunConfig) -> DimensionBudget {
    DimensionBudget::new(config.budget_qubits)
}

fn system_ket(alpha: f64) -> Result<Ket, CliError> {
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    Ket::new(
        CVector::from_vec(vec![c64(alpha, 0.0), c64(beta, 0.0)]),
        SubsystemLayout::single(2, "S")?,
    )
    .map_err(CliError::from)
}

fn model_channel(config: &RunConfig) -> Result<KrausChannel, CliError> {
    let budget = budget(config);
    let channel = match config.model {
        ModelKind::Spam => spam_interaction(config.n, &budget)?,
        ModelKind::PartialRecord => partial_record_interaction(config.n, config.theta, &budget)?,
        ModelKind::Random => {
            let seed = config.seed.expect("validated: random model requires a seed");
            random_interaction(config.n, config.depth, seed, &budget)?
        }
    };
    Ok(channel)
}

fn gamma_values(config: &RunConfig) -> Vec<f64> {
    match config.gamma_grid {
        Some(k) => (0..k).map(|i| i as f64 / (k - 1) as f64).collect(),
        None => vec![config.gamma],
    }
}

fn theta_values(config: &RunConfig) -> Vec<f64> {
    match config.theta_grid {
        Some(k) => (0..k)
            .map(|i| std::f64::consts::PI * i as f64 / (k - 1) as f64)
            .collect(),
        None => vec![config.theta],
    }
}

fn run_mach_zehnder(config: &RunConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&["detector", "gamma", "p_detector_a", "p_detector_b", "visibility"]);
    for gamma in gamma_values(config) {
        let r = mach_zehnder(config.detector_on, gamma)?;
        table.push(vec![
            if config.detector_on { "on" } else { "off" }.into(),
            fmt_real(gamma),
            fmt_real(r.p_detector_a),
            fmt_real(r.p_detector_b),
            fmt_real(r.visibility),
        ]);
    }
    Ok(table)
}

fn run_eraser(config: &RunConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&[
        "outcome",
        "postselect_probability",
        "p_detector_a",
        "p_detector_b",
        "visibility",
    ]);
    let outcomes: &[(EraserOutcome, &str)] = match config.outcome {
        EraserChoice::Plus => &[(EraserOutcome::Plus, "plus")],
        EraserChoice::Minus => &[(EraserOutcome::Minus, "minus")],
        EraserChoice::Both => &[(EraserOutcome::Plus, "plus"), (EraserOutcome::Minus, "minus")],
    };
    for (outcome, name) in outcomes {
        let (r, probability) = erase_and_postselect(*outcome)?;
        table.push(vec![
            (*name).into(),
            fmt_real(probability),
            fmt_real(r.p_detector_a),
            fmt_real(r.p_detector_b),
            fmt_real(r.visibility),
        ]);
    }
    Ok(table)
}

fn run_cat(config: &RunConfig) -> Result<Table, CliError> {
    let budget = budget(config);
    let mut table = Table::new(&["n_env", "gamma", "coherence"]);
    for m in 0..=config.n {
        let rho = cat_photon(m, config.gamma, &budget)?;
        table.push(vec![
            m.to_string(),
            fmt_real(config.gamma),
            fmt_real(rho.entries()[(0, 1)].norm()),
        ]);
    }
    Ok(table)
}

fn run_spam(config: &RunConfig) -> Result<Table, CliError> {
    let channel = spam_interaction(config.n, &budget(config))?;
    let input = system_ket(config.alpha)?;
    let out = channel.apply(&input.density())?;
    let marginals: Vec<DensityMatrix> = (1..=config.n)
        .map(|j| out.partial_trace(&[j]))
        .collect::<Result<_, _>>()?;
    let mut max_pairwise: f64 = 0.0;
    for (i, a) in marginals.iter().enumerate() {
        for b in &marginals[i + 1..] {
            max_pairwise = max_pairwise.max(trace_distance(a, b)?);
        }
    }
    let plus_minus = qdarwin::darwin::bloch::plus_minus_povm("B")?;
    let mut table = Table::new(&[
        "n",
        "alpha",
        "fragment",
        "p0",
        "p1",
        "p_plus",
        "p_minus",
        "max_pairwise_distance",
    ]);
    for (j, marginal) in marginals.iter().enumerate() {
        let pm = povm_probabilities(marginal, &plus_minus)?;
        table.push(vec![
            config.n.to_string(),
            fmt_real(config.alpha),
            (j + 1).to_string(),
            fmt_real(marginal.entries()[(0, 0)].re),
            fmt_real(marginal.entries()[(1, 1)].re),
            fmt_real(pm[0]),
            fmt_real(pm[1]),
            fmt_real(max_pairwise),
        ]);
    }
    Ok(table)
}

fn run_partial_record(config: &RunConfig) -> Result<Table, CliError> {
    let budget = budget(config);
    let layout = SubsystemLayout::single(2, "S")?;
    let up = Ket::basis_state(layout.clone(), 0)?.density();
    let down = Ket::basis_state(layout, 1)?.density();
    let balanced = system_ket(std::f64::consts::FRAC_1_SQRT_2)?.density();
    let mut table = Table::new(&["n", "theta", "system_coherence", "fragment_distinguishability"]);
    for theta in theta_values(config) {
        let channel = partial_record_interaction(config.n, theta, &budget)?;
        let system = channel.apply(&balanced)?.partial_trace(&[0])?;
        let fragment = channel.restrict_to_fragment(1)?;
        let distinguishability =
            trace_distance(&fragment.apply(&up)?, &fragment.apply(&down)?)?;
        table.push(vec![
            config.n.to_string(),
            fmt_real(theta),
            fmt_real(system.entries()[(0, 1)].norm()),
            fmt_real(distinguishability),
        ]);
    }
    Ok(table)
}

fn run_pointer_sieve(config: &RunConfig) -> Result<Table, CliError> {
    let channel = model_channel(config)?;
    let sieve = pointer_sieve(&channel, config.resolution)?;
    let mut table = Table::new(&[
        "model",
        "n",
        "theta",
        "depth",
        "seed",
        "resolution",
        "point",
        "bloch_x",
        "bloch_y",
        "bloch_z",
        "purity",
        "is_argmax",
    ]);
    for (idx, point) in sieve.points.iter().enumerate() {
        table.push(vec![
            config.model.name().into(),
            config.n.to_string(),
            fmt_real(config.theta),
            config.depth.to_string(),
            config.seed.unwrap_or(0).to_string(),
            config.resolution.to_string(),
            idx.to_string(),
            fmt_real(point.bloch[0]),
            fmt_real(point.bloch[1]),
            fmt_real(point.bloch[2]),
            fmt_real(point.purity),
            if sieve.argmax.contains(&idx) { "1" } else { "0" }.into(),
        ]);
    }
    Ok(table)
}

fn run_info_curve(config: &RunConfig) -> Result<Table, CliError> {
    let channel = spam_interaction(config.n, &budget(config))?;
    let global = channel.apply(&system_ket(config.alpha)?.density())?;
    let policy = SamplingPolicy {
        max_subsets: config.subset_cap,
        seed: config.seed.expect("validated: info-curve requires a seed"),
    };
    let curve = fragment_information_curve(&global, 0, &policy)?;
    let r = redundancy(&curve, config.delta)?;
    let mut table = Table::new(&[
        "n",
        "alpha",
        "m",
        "mean_information_bits",
        "sample_count",
        "system_entropy_bits",
        "redundancy",
    ]);
    for point in &curve.points {
        table.push(vec![
            config.n.to_string(),
            fmt_real(config.alpha),
            point.fragment_size.to_string(),
            fmt_real(point.mean_information),
            point.sample_count.to_string(),
            fmt_real(curve.system_entropy),
            fmt_real(r),
        ]);
    }
    Ok(table)
}

fn run_mp_fit(config: &RunConfig) -> Result<Table, CliError> {
    let channel = model_channel(config)?;
    let restricted = channel.restrict_to_fragment(config.fragment)?;
    let fit = mp_fit(&restricted, config.resolution)?;
    let mut table = Table::new(&[
        "model",
        "n",
        "fragment",
        "theta",
        "depth",
        "seed",
        "resolution",
        "basis_x",
        "basis_y",
        "basis_z",
        "mp_distance",
        "negativity",
        "sigma_fidelity",
        "ppt_exact",
    ]);
    table.push(vec![
        config.model.name().into(),
        config.n.to_string(),
        config.fragment.to_string(),
        fmt_real(config.theta),
        config.depth.to_string(),
        config.seed.unwrap_or(0).to_string(),
        config.resolution.to_string(),
        fmt_real(fit.basis_direction[0]),
        fmt_real(fit.basis_direction[1]),
        fmt_real(fit.basis_direction[2]),
        fmt_real(fit.distance),
        fmt_real(restricted.eb_negativity()),
        fmt_real(fit.sigma_fidelity),
        if restricted.choi().ppt_conclusive() { "1" } else { "0" }.into(),
    ]);
    Ok(table)
}

fn run_emergence(config: &RunConfig) -> Result<Table, CliError> {
    let scan_config = EmergenceConfig {
        n_values: (config.n_min..=config.n_max).collect(),
        seeds_per_n: config.seeds,
        family: InteractionFamily::Random { depth: config.depth },
        master_seed: config.seed.expect("validated: emergence requires a seed"),
        mp_resolution: config.resolution,
        budget: budget(config),
    };
    let scan = emergence_scan(&scan_config)?;
    if config.detail {
        let mut table = Table::new(&[
            "n",
            "seed_index",
            "seed",
            "fragment",
            "negativity",
            "mp_distance",
            "sigma_fidelity",
            "ppt_exact",
        ]);
        for row in &scan.rows {
            table.push(vec![
                row.n.to_string(),
                row.seed_index.to_string(),
                row.seed.to_string(),
                row.fragment.to_string(),
                fmt_real(row.negativity),
                fmt_real(row.mp_distance),
                fmt_real(row.sigma_fidelity),
                if row.ppt_exact { "1" } else { "0" }.into(),
            ]);
        }
        Ok(table)
    } else {
        let mut table = Table::new(&[
            "n",
            "rows",
            "min_negativity",
            "median_negativity",
            "max_negativity",
            "min_mp_distance",
            "median_mp_distance",
            "max_mp_distance",
        ]);
        for s in &scan.summaries {
            table.push(vec![
                s.n.to_string(),
                s.rows.to_string(),
                fmt_real(s.min_negativity),
                fmt_real(s.median_negativity),
                fmt_real(s.max_negativity),
                fmt_real(s.min_mp_distance),
                fmt_real(s.median_mp_distance),
                fmt_real(s.max_mp_distance),
            ]);
        }
        Ok(table)
    }
}

/// Run one command and return its CSV text.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    let table = match config.command {
        CommandKind::MachZehnder => run_mach_zehnder(config)?,
        CommandKind::Eraser => run_eraser(config)?,
        CommandKind::Cat => run_cat(config)?,
        CommandKind::Spam => run_spam(config)?,
        CommandKind::PartialRecord => run_partial_record(config)?,
        CommandKind::PointerSieve => run_pointer_sieve(config)?,
        CommandKind::InfoCurve => run_info_curve(config)?,
        CommandKind::MpFit => run_mp_fit(config)?,
        CommandKind::Emergence => run_emergence(config)?,
        CommandKind::Selftest => {
            return Err(CliError::Config("selftest does not emit CSV".into()))
        }
    };
    Ok(table.to_csv())
}

/// Run a command inside a thread pool of the configured size (0 = rayon's
/// default pool). Output is identical for every thread count.
pub fn execute_with_threads(config: &RunConfig) -> Result<String, CliError> {
    if config.threads == 0 {
        execute(config)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| CliError::Invariant(format!("thread pool: {e}")))?;
        pool.install(|| execute(config))
    }
}

/// Execute and deliver: CSV to stdout or `--output`, plot script if requested.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let csv = execute_with_threads(config)?;
    match &config.output {
        None => {
            print!("{csv}");
        }
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| CliError::Invariant(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    if let Some(plot_path) = &config.emit_plot {
        let csv_path = config.output.as_ref().expect("validated: emit-plot requires output");
        crate::plot::emit_plot_script(csv_path, config.command, plot_path)?;
    }
    Ok(())
}
