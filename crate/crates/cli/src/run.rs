//! Stepping drivers that pair the quantum and classical engines on one
//! configuration and expose aligned marginal distributions per step.

use crate::config::ExperimentConfig;
use crate::parallel;
use spinsim_core::classical::{
    evolve_points, sample_point, ClassicalDensityParams, Ensemble, PhasePoint, SpinMagnitudes,
};
use spinsim_core::floquet::{apply_step, build_plan, FloquetOperatorPlan};
use spinsim_core::marginals::{
    classical_marginal, quantum_pjz, quantum_plx, quantum_plz, DiscreteDistribution, Observable,
};
use spinsim_core::state::{coherent_state, product_state, QuantumState};

pub fn initial_state(cfg: &ExperimentConfig) -> QuantumState {
    let (ts, ps, tl, pl) = cfg.angles_rad();
    product_state(
        &coherent_state(cfg.s, ts, ps),
        &coherent_state(cfg.l, tl, pl),
    )
}

pub fn initial_ensemble(cfg: &ExperimentConfig) -> Ensemble {
    let (ts, ps, tl, pl) = cfg.angles_rad();
    let mags = SpinMagnitudes::from_spins(cfg.s, cfg.l);
    let dp_s = ClassicalDensityParams::coherent_matched(ts, ps, mags.s_mag);
    let dp_l = ClassicalDensityParams::coherent_matched(tl, pl, mags.l_mag);
    // Sample in parallel chunks; streams are keyed by point index, so the
    // result matches the sequential construction bitwise.
    let mut points = vec![
        PhasePoint {
            s_hat: [0.0, 0.0, 1.0],
            l_hat: [0.0, 0.0, 1.0],
        };
        cfg.ensemble
    ];
    parallel::for_chunks_mut(&mut points, |start, chunk| {
        for (k, p) in chunk.iter_mut().enumerate() {
            *p = sample_point(&dp_s, &dp_l, cfg.seed, (start + k) as u64);
        }
    });
    Ensemble {
        points,
        magnitudes: mags,
        seed: cfg.seed,
    }
}

/// Which engines a driver runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engines {
    Quantum,
    Classical,
    Both,
}

pub struct JointRun {
    pub cfg: ExperimentConfig,
    plan: Option<FloquetOperatorPlan>,
    pub state: Option<QuantumState>,
    pub ensemble: Option<Ensemble>,
    pub step: usize,
}

impl JointRun {
    pub fn new(cfg: &ExperimentConfig, engines: Engines) -> Result<Self, String> {
        cfg.validate()?;
        let want_q = engines != Engines::Classical;
        let want_c = engines != Engines::Quantum;
        // The x-basis transforms are needed for any quantum work and for
        // nothing classical.
        let plan = if want_q {
            Some(
                build_plan(cfg.s, cfg.l, cfg.params)
                    .map_err(|e| format!("propagator construction failed: {e}"))?,
            )
        } else {
            None
        };
        Ok(JointRun {
            cfg: cfg.clone(),
            state: want_q.then(|| initial_state(cfg)),
            ensemble: want_c.then(|| initial_ensemble(cfg)),
            plan,
            step: 0,
        })
    }

    /// Advance both active engines by one period.
    pub fn advance(&mut self) -> Result<(), String> {
        if let (Some(state), Some(plan)) = (self.state.as_mut(), self.plan.as_ref()) {
            *state = apply_step(state, plan).map_err(|e| format!("quantum step failed: {e}"))?;
        }
        if let Some(e) = self.ensemble.as_mut() {
            let fp = self.cfg.params;
            let mags = e.magnitudes;
            parallel::for_chunks_mut(&mut e.points, |_, chunk| {
                evolve_points(chunk, &fp, &mags, 1);
            });
        }
        self.step += 1;
        Ok(())
    }

    pub fn quantum_marginal(&self, obs: Observable) -> Result<DiscreteDistribution, String> {
        let state = self.state.as_ref().ok_or("quantum engine not active")?;
        match obs {
            Observable::Lz => Ok(quantum_plz(state)),
            Observable::Jz => Ok(quantum_pjz(state)),
            Observable::Lx => {
                let plan = self.plan.as_ref().ok_or("quantum engine not active")?;
                quantum_plx(state, &plan.xl).map_err(|e| format!("L_x marginal failed: {e}"))
            }
        }
    }

    pub fn classical_marginal(&self, obs: Observable) -> Result<DiscreteDistribution, String> {
        let e = self
            .ensemble
            .as_ref()
            .ok_or("classical engine not active")?;
        Ok(classical_marginal(e, obs, self.cfg.s, self.cfg.l))
    }

    /// |norm - 1| of the quantum state.
    pub fn norm_drift(&self) -> f64 {
        self.state.as_ref().map_or(0.0, |s| (s.norm() - 1.0).abs())
    }
}
