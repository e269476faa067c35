//! One-period quantum propagator for the coupled kicked spins.
//!
//! A period consists of the impulsive spin-spin kick followed by free
//! precession about z:
//!
//!   U = exp(-i a (S_z + L_z)) . exp(-i (gamma / |S|) S_x L_x),
//!
//! with |S| = sqrt(s(s+1)). Scaling the coupling by 1/|S| keeps the
//! classical kick strength fixed as the spins grow, so one parameter set
//! describes every system size. The kick is diagonal in the product x-basis,
//! so a step is two real-orthogonal basis changes per factor plus elementwise
//! phases; the full Hilbert-space unitary is never materialized.

use crate::linalg::{cis, gemm_cr, gemm_rc, Mat};
use crate::spin::{x_basis_transform, SpinMagnitude, XBasisTransform};
use crate::state::{check_dims, QuantumState};
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Map parameters shared by the quantum and classical engines.
///
/// `a` is the precession angle per period, `gamma` the kick strength, and
/// `r` the spin-magnitude ratio |L|/|S| used when choosing paired system
/// sizes (l = r s); `r` does not enter the one-period operator itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetParams {
    pub a: f64,
    pub r: f64,
    pub gamma: f64,
}

/// Precomputed factorization of the one-period unitary.
#[derive(Debug, Clone)]
pub struct FloquetOperatorPlan {
    pub s: SpinMagnitude,
    pub l: SpinMagnitude,
    pub params: FloquetParams,
    /// exp(-i a (m_s + m_l)) over the z-basis grid, m_s slow.
    pub free_phases: Vec<Complex64>,
    /// exp(-i (gamma/|S|) m_s' m_l') over the x-basis grid.
    pub kick_phases: Vec<Complex64>,
    pub xs: XBasisTransform,
    pub xl: XBasisTransform,
    /// Transposes cached so both directions of the sandwich are row-major
    /// matrix products.
    vs_t: Mat,
    vl_t: Mat,
}

/// Build the reusable plan for spins (s, l) and parameters `p`.
pub fn build_plan(
    s: SpinMagnitude,
    l: SpinMagnitude,
    p: FloquetParams,
) -> Result<FloquetOperatorPlan> {
    let xs = x_basis_transform(s)?;
    let xl = x_basis_transform(l)?;
    let (ds, dl) = (s.dim(), l.dim());
    let c = p.gamma / s.magnitude();

    let mut free_phases = Vec::with_capacity(ds * dl);
    for ms in s.labels() {
        for ml in l.labels() {
            free_phases.push(cis(-p.a * (ms.value() + ml.value())));
        }
    }
    let mut kick_phases = Vec::with_capacity(ds * dl);
    for &es in &xs.eigenvalues {
        for &el in &xl.eigenvalues {
            kick_phases.push(cis(-c * es * el));
        }
    }
    let vs_t = xs.v.transpose();
    let vl_t = xl.v.transpose();
    Ok(FloquetOperatorPlan {
        s,
        l,
        params: p,
        free_phases,
        kick_phases,
        xs,
        xl,
        vs_t,
        vl_t,
    })
}

/// Advance the state by one period.
pub fn apply_step(state: &QuantumState, plan: &FloquetOperatorPlan) -> Result<QuantumState> {
    check_dims(state, plan.s, plan.l)?;
    let (ds, dl) = (plan.s.dim(), plan.l.dim());
    let mut tmp = vec![Complex64::new(0.0, 0.0); ds * dl];
    let mut x = vec![Complex64::new(0.0, 0.0); ds * dl];

    // Into the product x-basis: X = Vs^T Psi Vl.
    gemm_rc(&plan.vs_t, &state.amps, dl, &mut tmp);
    gemm_cr(&tmp, dl, &plan.xl.v, &mut x);
    for (v, ph) in x.iter_mut().zip(plan.kick_phases.iter()) {
        *v *= ph;
    }
    // Back to the z-basis: Psi = Vs X Vl^T, then the free precession phases.
    gemm_rc(&plan.xs.v, &x, dl, &mut tmp);
    gemm_cr(&tmp, dl, &plan.vl_t, &mut x);
    for (v, ph) in x.iter_mut().zip(plan.free_phases.iter()) {
        *v *= ph;
    }
    Ok(QuantumState {
        s: plan.s,
        l: plan.l,
        amps: x,
    })
}

/// Iterate the map, returning snapshots of the state at the requested steps
/// (which must be sorted ascending; step 0 is the input state).
pub fn evolve(
    state: &QuantumState,
    plan: &FloquetOperatorPlan,
    snapshot_steps: &[usize],
) -> Result<Vec<QuantumState>> {
    check_dims(state, plan.s, plan.l)?;
    let mut out = Vec::with_capacity(snapshot_steps.len());
    let mut current = state.clone();
    let mut step = 0usize;
    for &want in snapshot_steps {
        while step < want {
            current = apply_step(&current, plan)?;
            step += 1;
        }
        out.push(current.clone());
    }
    Ok(out)
}
