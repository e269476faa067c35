//! Quantum states on H_s (x) H_l: coherent-state construction, product
//! states, reduced density matrices, and low-order moments.

use crate::eigen::hermitian_eigenvalues;
use crate::spin::SpinMagnitude;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Which factor of the product space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    S,
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Single-spin state vector, amplitudes indexed by m = -j .. j.
#[derive(Debug, Clone)]
pub struct SpinVector {
    pub j: SpinMagnitude,
    pub amps: Vec<Complex64>,
}

/// Pure state of the coupled pair. Amplitudes are stored row-major with m_s
/// as the slow index and m_l as the fast index, so the kick sandwich is a
/// plain two-sided matrix product.
#[derive(Debug, Clone)]
pub struct QuantumState {
    pub s: SpinMagnitude,
    pub l: SpinMagnitude,
    pub amps: Vec<Complex64>,
}

/// Reduced state operator of the l factor.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    pub l: SpinMagnitude,
    /// Row-major (2l+1) x (2l+1).
    pub rho: Vec<Complex64>,
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for k in 2..=n {
        t[k] = t[k - 1] + libm::log(k as f64);
    }
    t
}

/// SU(2) coherent state with maximum polarization along (theta, phi).
///
/// amps_m = sqrt(C(2j, j+m)) cos(theta/2)^{j+m} sin(theta/2)^{j-m}
///          e^{-i (m - j) phi},
/// the global phase chosen so the m = j amplitude is real and non-negative.
/// Amplitudes are evaluated in log space so large j does not overflow.
pub fn coherent_state(j: SpinMagnitude, theta: f64, phi: f64) -> SpinVector {
    let two_j = j.two_j() as usize;
    let dim = j.dim();
    let lnf = ln_factorials(two_j);
    let (ct, st) = (libm::cos(theta / 2.0), libm::sin(theta / 2.0));
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..dim {
        // k = j + m, so the exponents are k and two_j - k.
        let up = k as f64;
        let down = (two_j - k) as f64;
        let magnitude = if (ct == 0.0 && up > 0.0) || (st == 0.0 && down > 0.0) {
            0.0
        } else {
            let mut ln = 0.5 * (lnf[two_j] - lnf[k] - lnf[two_j - k]);
            if up > 0.0 {
                ln += up * libm::log(ct);
            }
            if down > 0.0 {
                ln += down * libm::log(st);
            }
            libm::exp(ln)
        };
        // m - j = k - 2j.
        let phase_angle = -((k as f64) - two_j as f64) * phi;
        amps[k] = magnitude * crate::linalg::cis(phase_angle);
    }
    // Renormalize to absorb rounding in the log-space products.
    let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
    if norm > 0.0 {
        for a in amps.iter_mut() {
            *a /= norm;
        }
    }
    SpinVector { j, amps }
}

/// Tensor product of two single-spin states.
pub fn product_state(psi_s: &SpinVector, psi_l: &SpinVector) -> QuantumState {
    let (ds, dl) = (psi_s.j.dim(), psi_l.j.dim());
    let mut amps = Vec::with_capacity(ds * dl);
    for a in &psi_s.amps {
        for b in &psi_l.amps {
            amps.push(a * b);
        }
    }
    QuantumState {
        s: psi_s.j,
        l: psi_l.j,
        amps,
    }
}

impl QuantumState {
    #[inline]
    pub fn dim_s(&self) -> usize {
        self.s.dim()
    }

    #[inline]
    pub fn dim_l(&self) -> usize {
        self.l.dim()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>())
    }
}

/// Partial trace over the s factor: rho(m_l, m_l') =
/// sum_{m_s} psi(m_s, m_l) conj(psi(m_s, m_l')).
pub fn reduced_density_l(state: &QuantumState) -> ReducedDensity {
    let (ds, dl) = (state.dim_s(), state.dim_l());
    let mut rho = vec![Complex64::new(0.0, 0.0); dl * dl];
    for is in 0..ds {
        let row = &state.amps[is * dl..(is + 1) * dl];
        for il in 0..dl {
            let a = row[il];
            for ilp in 0..dl {
                rho[il * dl + ilp] += a * row[ilp].conj();
            }
        }
    }
    ReducedDensity { l: state.l, rho }
}

impl ReducedDensity {
    pub fn trace(&self) -> f64 {
        let d = self.l.dim();
        (0..d).map(|i| self.rho[i * d + i].re).sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr rho^2 = sum_{ij} |rho_ij|^2 for Hermitian rho.
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let d = self.l.dim();
        (0..d).map(|i| self.rho[i * d + i].re).collect()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut buf = self.rho.clone();
        hermitian_eigenvalues(&mut buf, self.l.dim())
    }

    /// Von Neumann entropy -Tr rho ln rho in nats.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(-ev
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * libm::log(p))
            .sum::<f64>())
    }
}

/// Apply the single-factor operator J_axis to the state.
fn apply_factor_op(state: &QuantumState, which: Factor, axis: Axis) -> QuantumState {
    let (ds, dl) = (state.dim_s(), state.dim_l());
    let j = match which {
        Factor::S => state.s,
        Factor::L => state.l,
    };
    let ladder = crate::spin::jx_tridiagonal(j);
    let mut out = vec![Complex64::new(0.0, 0.0); ds * dl];
    let idx = |is: usize, il: usize| is * dl + il;
    let dim = j.dim();
    for k in 0..dim {
        // k indexes m on the chosen factor.
        let apply = |out: &mut [Complex64], coeff: Complex64, src_k: usize, dst_k: usize| {
            if coeff == Complex64::new(0.0, 0.0) {
                return;
            }
            match which {
                Factor::S => {
                    for il in 0..dl {
                        out[idx(dst_k, il)] += coeff * state.amps[idx(src_k, il)];
                    }
                }
                Factor::L => {
                    for is in 0..ds {
                        out[idx(is, dst_k)] += coeff * state.amps[idx(is, src_k)];
                    }
                }
            }
        };
        match axis {
            Axis::Z => {
                let m = j.label_at(k).value();
                apply(&mut out, Complex64::new(m, 0.0), k, k);
            }
            Axis::X => {
                // (J_x psi)_m = (c_{m-1} psi_{m-1} + c_m psi_{m+1}) / 2,
                // with c already halved in jx_tridiagonal.
                if k > 0 {
                    apply(&mut out, Complex64::new(ladder[k - 1], 0.0), k - 1, k);
                }
                if k + 1 < dim {
                    apply(&mut out, Complex64::new(ladder[k], 0.0), k + 1, k);
                }
            }
            Axis::Y => {
                // (J_y psi)_m = -i (c_{m-1} psi_{m-1} - c_m psi_{m+1}) / 2.
                if k > 0 {
                    apply(&mut out, Complex64::new(0.0, -ladder[k - 1]), k - 1, k);
                }
                if k + 1 < dim {
                    apply(&mut out, Complex64::new(0.0, ladder[k]), k + 1, k);
                }
            }
        }
    }
    QuantumState {
        s: state.s,
        l: state.l,
        amps: out,
    }
}

/// Mean and variance of the chosen component of S or L.
pub fn spin_moments(state: &QuantumState, which: Factor, axis: Axis) -> (f64, f64) {
    let applied = apply_factor_op(state, which, axis);
    let mut mean = Complex64::new(0.0, 0.0);
    let mut second = 0.0;
    for (a, b) in state.amps.iter().zip(applied.amps.iter()) {
        mean += a.conj() * b;
        second += b.norm_sqr();
    }
    (mean.re, second - mean.re * mean.re)
}

/// Mean of the complex combination <J_x + i J_y> for the chosen factor.
pub fn transverse_mean(state: &QuantumState, which: Factor) -> Complex64 {
    let jx = apply_factor_op(state, which, Axis::X);
    let jy = apply_factor_op(state, which, Axis::Y);
    let mut acc = Complex64::new(0.0, 0.0);
    for ((a, x), y) in state.amps.iter().zip(jx.amps.iter()).zip(jy.amps.iter()) {
        acc += a.conj() * (x + Complex64::new(0.0, 1.0) * y);
    }
    acc
}

/// Check that a state's dimensions match the given spins.
pub fn check_dims(state: &QuantumState, s: SpinMagnitude, l: SpinMagnitude) -> Result<()> {
    if state.s != s || state.l != l || state.amps.len() != s.dim() * l.dim() {
        return Err(Error::DimensionMismatch);
    }
    Ok(())
}
