//! The named experiments behind each CLI subcommand. Every command writes
//! self-describing CSV ('#' manifest header, 17-significant-digit numbers)
//! and returns an error if any runtime invariant check fails.

use crate::config::{fmt_spin, ExperimentConfig};
use crate::csvout::{fmt_f64, write_file, CsvBuilder};
use crate::parallel;
use crate::run::{Engines, JointRun};
use spinsim_core::analysis::{
    equilibrium_sigma, qc_difference, scaling_fit, shannon_entropy, ScalingRecord,
};
use spinsim_core::classical::{lyapunov, PhasePoint, SpinMagnitudes};
use spinsim_core::marginals::{microcanonical_pjz, microcanonical_plz, Observable};
use spinsim_core::SpinMagnitude;

const NORM_DRIFT_TOL: f64 = 1e-10;
const SUM_TOL: f64 = 1e-10;

fn check_total(
    d: &spinsim_core::marginals::DiscreteDistribution,
    what: &str,
) -> Result<(), String> {
    let t = d.total();
    if (t - 1.0).abs() > SUM_TOL {
        return Err(format!("invariant violation: {what} sums to {t}, not 1"));
    }
    Ok(())
}

/// Marginal-distribution time series from the quantum engine.
pub fn cmd_quantum(cfg: &ExperimentConfig, out: &str) -> Result<(), String> {
    let snapshots = cfg.snapshot_steps();
    let mut run = JointRun::new(cfg, Engines::Quantum)?;
    let mut main = CsvBuilder::new(&cfg.header_lines("quantum"));
    main.columns(&["step", "m", "prob"]);
    let mut moments = CsvBuilder::new(&cfg.header_lines("quantum"));
    moments.columns(&["step", "mean", "variance"]);

    for step in 0..=cfg.steps {
        if step > 0 {
            run.advance()?;
        }
        let d = run.quantum_marginal(cfg.observable)?;
        check_total(&d, "quantum marginal")?;
        let (mean, var) = d.mean_variance();
        moments.row(&[step.to_string(), fmt_f64(mean), fmt_f64(var)]);
        if snapshots.contains(&step) {
            for (m, p) in d.labels().zip(d.probs.iter()) {
                main.row(&[step.to_string(), fmt_f64(m), fmt_f64(*p)]);
            }
        }
    }
    if run.norm_drift() > NORM_DRIFT_TOL {
        return Err(format!(
            "invariant violation: quantum norm drift {} after {} steps",
            run.norm_drift(),
            cfg.steps
        ));
    }
    write_file(out, &main.finish())?;
    write_file(&format!("{out}.moments.csv"), &moments.finish())
}

/// Binned classical marginals from the Liouville ensemble.
pub fn cmd_classical(cfg: &ExperimentConfig, out: &str) -> Result<(), String> {
    let snapshots = cfg.snapshot_steps();
    let mut run = JointRun::new(cfg, Engines::Classical)?;
    let mut main = CsvBuilder::new(&cfg.header_lines("classical"));
    main.columns(&["step", "m", "prob", "overflow"]);
    let mut moments = CsvBuilder::new(&cfg.header_lines("classical"));
    moments.columns(&["step", "mean", "variance", "overflow"]);

    for step in 0..=cfg.steps {
        if step > 0 {
            run.advance()?;
        }
        let d = run.classical_marginal(cfg.observable)?;
        check_total(&d, "classical marginal")?;
        let (mean, var) = d.mean_variance();
        moments.row(&[
            step.to_string(),
            fmt_f64(mean),
            fmt_f64(var),
            fmt_f64(d.overflow),
        ]);
        if snapshots.contains(&step) {
            for (m, p) in d.labels().zip(d.probs.iter()) {
                main.row(&[
                    step.to_string(),
                    fmt_f64(m),
                    fmt_f64(*p),
                    fmt_f64(d.overflow),
                ]);
            }
        }
    }
    write_file(out, &main.finish())?;
    write_file(&format!("{out}.moments.csv"), &moments.finish())
}

fn microcanonical_entropy(cfg: &ExperimentConfig) -> f64 {
    match cfg.observable {
        Observable::Lz | Observable::Lx => shannon_entropy(&microcanonical_plz(cfg.l)),
        Observable::Jz => shannon_entropy(&microcanonical_pjz(cfg.s, cfg.l)),
    }
}

/// Joint quantum + classical run: per-step entropies and sigma_qc, plus
/// aligned per-bin differences at the snapshot steps.
pub fn cmd_compare(cfg: &ExperimentConfig, out: &str) -> Result<(), String> {
    let snapshots = cfg.snapshot_steps();
    let mut run = JointRun::new(cfg, Engines::Both)?;
    let mut header = cfg.header_lines("compare");
    header.push(format!("# h_mc = {}", fmt_f64(microcanonical_entropy(cfg))));
    let mut main = CsvBuilder::new(&header);
    main.columns(&["step", "h_q", "h_c", "sigma_qc", "sigma_rel"]);
    let mut bins = CsvBuilder::new(&header);
    bins.columns(&["step", "m", "p_q", "p_c", "diff"]);

    for step in 0..=cfg.steps {
        if step > 0 {
            run.advance()?;
        }
        let pq = run.quantum_marginal(cfg.observable)?;
        let pc = run.classical_marginal(cfg.observable)?;
        check_total(&pq, "quantum marginal")?;
        check_total(&pc, "classical marginal")?;
        let diff = qc_difference(&pq, &pc).map_err(|e| format!("comparison failed: {e}"))?;
        main.row(&[
            step.to_string(),
            fmt_f64(shannon_entropy(&pq)),
            fmt_f64(shannon_entropy(&pc)),
            fmt_f64(diff.sigma_qc),
            fmt_f64(diff.relative_sigma()),
        ]);
        if snapshots.contains(&step) {
            for (((m, q), c), d) in pq
                .labels()
                .zip(pq.probs.iter())
                .zip(pc.probs.iter())
                .zip(diff.per_bin.iter())
            {
                bins.row(&[
                    step.to_string(),
                    fmt_f64(m),
                    fmt_f64(*q),
                    fmt_f64(*c),
                    fmt_f64(*d),
                ]);
            }
        }
    }
    if run.norm_drift() > NORM_DRIFT_TOL {
        return Err(format!(
            "invariant violation: quantum norm drift {}",
            run.norm_drift()
        ));
    }
    write_file(out, &main.finish())?;
    write_file(&format!("{out}.bins.csv"), &bins.finish())
}

/// Largest Lyapunov exponent on a grid of initial conditions
/// (theta_s, theta_l) with the configured azimuths.
pub fn cmd_lyapunov(cfg: &ExperimentConfig, grid: usize, out: &str) -> Result<(), String> {
    if grid < 1 {
        return Err("grid must be at least 1".into());
    }
    cfg.validate()?;
    let steps = if cfg.steps >= 1000 { cfg.steps } else { 10_000 };
    let transient = 100;
    let mags = SpinMagnitudes::from_spins(cfg.s, cfg.l);
    let (_, phi_s, _, phi_l) = cfg.angles_rad();
    let deg = 180.0 / std::f64::consts::PI;

    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        for k in 0..grid {
            let theta_s = std::f64::consts::PI * (i as f64 + 0.5) / grid as f64;
            let theta_l = std::f64::consts::PI * (k as f64 + 0.5) / grid as f64;
            cells.push((theta_s, theta_l, 0.0));
        }
    }
    let fp = cfg.params;
    let mut failure = std::sync::Mutex::new(None::<String>);
    parallel::for_chunks_mut(&mut cells, |_, chunk| {
        for cell in chunk.iter_mut() {
            let p = PhasePoint::from_angles(cell.0, phi_s, cell.1, phi_l);
            match lyapunov(&p, &fp, &mags, steps, transient) {
                Ok(lam) => cell.2 = lam,
                Err(e) => {
                    let mut slot = failure.lock().unwrap();
                    if slot.is_none() {
                        *slot = Some(format!("lyapunov failed: {e}"));
                    }
                }
            }
        }
    });
    if let Some(err) = failure.get_mut().unwrap().take() {
        return Err(err);
    }

    let mut header = cfg.header_lines("lyapunov");
    header.push(format!("# grid = {grid}"));
    header.push(format!("# lyapunov_steps = {steps}"));
    header.push(format!("# transient = {transient}"));
    let mut csv = CsvBuilder::new(&header);
    csv.columns(&["theta_s", "phi_s", "theta_l", "phi_l", "lambda"]);
    for (theta_s, theta_l, lam) in &cells {
        csv.row(&[
            fmt_f64(theta_s * deg),
            fmt_f64(cfg.phi_s_deg),
            fmt_f64(theta_l * deg),
            fmt_f64(cfg.phi_l_deg),
            fmt_f64(*lam),
        ]);
    }
    write_file(out, &csv.finish())
}

/// Equilibrium sigma for one system size: (pure-state J_z variant,
/// reduced-state L_z variant), both as relative fluctuations.
pub fn scaling_size_sigmas(
    base: &ExperimentConfig,
    l_value: u32,
) -> Result<(ScalingRecord, ScalingRecord), String> {
    let mut cfg = base.clone();
    cfg.l = SpinMagnitude::from_two_j(2 * l_value);
    let s_value = (l_value as f64 / base.params.r).round();
    cfg.s = SpinMagnitude::from_two_j((2.0 * s_value) as u32);
    let window = cfg.equilibrium_window();

    let mut run = JointRun::new(&cfg, Engines::Both)?;
    let mut steps_rec = Vec::new();
    let mut sig_pure = Vec::new();
    let mut sig_reduced = Vec::new();
    for step in 0..=cfg.steps {
        if step > 0 {
            run.advance()?;
        }
        if step < window.0 || step > window.1 {
            continue;
        }
        let dq_j = run.quantum_marginal(Observable::Jz)?;
        let dc_j = run.classical_marginal(Observable::Jz)?;
        let dq_l = run.quantum_marginal(Observable::Lz)?;
        let dc_l = run.classical_marginal(Observable::Lz)?;
        let dj = qc_difference(&dq_j, &dc_j).map_err(|e| e.to_string())?;
        let dl = qc_difference(&dq_l, &dc_l).map_err(|e| e.to_string())?;
        steps_rec.push(step);
        sig_pure.push(dj.relative_sigma());
        sig_reduced.push(dl.relative_sigma());
    }
    if run.norm_drift() > NORM_DRIFT_TOL {
        return Err(format!(
            "invariant violation: norm drift {}",
            run.norm_drift()
        ));
    }
    let pure = equilibrium_sigma(&steps_rec, &sig_pure, window, l_value as f64, None)
        .map_err(|e| e.to_string())?;
    let reduced = equilibrium_sigma(&steps_rec, &sig_reduced, window, l_value as f64, None)
        .map_err(|e| e.to_string())?;
    Ok((pure, reduced))
}

/// Equilibrium fluctuation scaling across system sizes, with a synthetic
/// injection hook (exact c / sqrt(l) records) for testing the fit path.
pub fn cmd_scaling(
    cfg: &ExperimentConfig,
    sizes: &[u32],
    synthetic: Option<f64>,
    out: &str,
) -> Result<(), String> {
    if sizes.len() < 3 {
        return Err("scaling needs at least 3 sizes".into());
    }
    let window = cfg.equilibrium_window();
    let mut pure_records = Vec::new();
    let mut reduced_records = Vec::new();
    for &l_value in sizes {
        if let Some(c) = synthetic {
            let sigma = c / (l_value as f64).sqrt();
            let rec = ScalingRecord {
                size: l_value as f64,
                sigma_qc: sigma,
                early_window: false,
            };
            pure_records.push(rec);
            reduced_records.push(rec);
        } else {
            let (p, r) = scaling_size_sigmas(cfg, l_value)?;
            pure_records.push(p);
            reduced_records.push(r);
        }
    }
    let (slope_pure, icept_pure) = scaling_fit(&pure_records).map_err(|e| e.to_string())?;
    let (slope_reduced, icept_reduced) =
        scaling_fit(&reduced_records).map_err(|e| e.to_string())?;

    let mut header = cfg.header_lines("scaling");
    header.push(format!(
        "# sizes = {}",
        sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    if let Some(c) = synthetic {
        header.push(format!("# synthetic = {}", fmt_f64(c)));
    }
    header.push(format!("# slope_pure = {}", fmt_f64(slope_pure)));
    header.push(format!("# intercept_pure = {}", fmt_f64(icept_pure)));
    header.push(format!("# slope_reduced = {}", fmt_f64(slope_reduced)));
    header.push(format!("# intercept_reduced = {}", fmt_f64(icept_reduced)));
    let mut csv = CsvBuilder::new(&header);
    csv.columns(&[
        "l",
        "s",
        "sigma_pure_rel",
        "sigma_reduced_rel",
        "window_start",
        "window_end",
    ]);
    for ((rec_p, rec_r), &l_value) in pure_records.iter().zip(reduced_records.iter()).zip(sizes) {
        let s_value = (l_value as f64 / cfg.params.r).round() as u32;
        csv.row(&[
            l_value.to_string(),
            s_value.to_string(),
            fmt_f64(rec_p.sigma_qc),
            fmt_f64(rec_r.sigma_qc),
            window.0.to_string(),
            window.1.to_string(),
        ]);
    }
    write_file(out, &csv.finish())
}

/// Exact microcanonical reference distributions and entropies.
pub fn cmd_microcanonical(s: SpinMagnitude, l: SpinMagnitude, out: &str) -> Result<(), String> {
    let plz = microcanonical_plz(l);
    let pjz = microcanonical_pjz(s, l);
    let header = vec![
        format!("# spinsim {}", env!("CARGO_PKG_VERSION")),
        "# command = microcanonical".to_string(),
        format!("# s = {}", fmt_spin(s)),
        format!("# l = {}", fmt_spin(l)),
        format!("# h_lz = {}", fmt_f64(shannon_entropy(&plz))),
        format!("# h_jz = {}", fmt_f64(shannon_entropy(&pjz))),
    ];
    let mut csv = CsvBuilder::new(&header);
    csv.columns(&["observable", "m", "prob"]);
    for (m, p) in plz.labels().zip(plz.probs.iter()) {
        csv.row(&["lz".into(), fmt_f64(m), fmt_f64(*p)]);
    }
    for (m, p) in pjz.labels().zip(pjz.probs.iter()) {
        csv.row(&["jz".into(), fmt_f64(m), fmt_f64(*p)]);
    }
    write_file(out, &csv.finish())
}
