//! Probability distributions over eigenvalue-labeled bins of width 1:
//! quantum marginals, binned classical marginals, and the microcanonical
//! reference laws.

use crate::classical::Ensemble;
use crate::linalg::gemm_cr;
use crate::spin::{SpinMagnitude, XBasisTransform};
use crate::state::QuantumState;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Which observable a marginal is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Lz,
    Jz,
    Lx,
}

/// Probability per eigenvalue label. Labels are stored doubled (2m) so
/// half-integer grids compare exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    /// Ascending, spacing 2 (i.e. unit spacing in m).
    pub two_labels: Vec<i32>,
    pub probs: Vec<f64>,
    /// Classical mass falling outside the label range; always 0 for quantum
    /// distributions.
    pub overflow: f64,
}

impl DiscreteDistribution {
    pub fn labels(&self) -> impl Iterator<Item = f64> + '_ {
        self.two_labels.iter().map(|&t| t as f64 / 2.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum::<f64>() + self.overflow
    }

    /// Mean and variance of the label under the in-range probabilities,
    /// renormalized to exclude overflow mass.
    pub fn mean_variance(&self) -> (f64, f64) {
        let w: f64 = self.probs.iter().sum();
        let mut mean = 0.0;
        let mut second = 0.0;
        for (&t, &p) in self.two_labels.iter().zip(self.probs.iter()) {
            let m = t as f64 / 2.0;
            mean += p * m;
            second += p * m * m;
        }
        if w > 0.0 {
            mean /= w;
            second /= w;
        }
        (mean, second - mean * mean)
    }
}

fn label_grid(j: SpinMagnitude) -> Vec<i32> {
    j.labels().map(|m| m.two_m).collect()
}

fn jz_label_grid(s: SpinMagnitude, l: SpinMagnitude) -> Vec<i32> {
    let two_tot = (s.two_j() + l.two_j()) as i32;
    (0..=(s.two_j() + l.two_j()))
        .map(|k| -two_tot + 2 * k as i32)
        .collect()
}

/// P(m_l) = sum_{m_s} |psi(m_s, m_l)|^2.
pub fn quantum_plz(state: &QuantumState) -> DiscreteDistribution {
    let (ds, dl) = (state.dim_s(), state.dim_l());
    let mut probs = vec![0.0; dl];
    for is in 0..ds {
        for (il, p) in probs.iter_mut().enumerate() {
            *p += state.amps[is * dl + il].norm_sqr();
        }
    }
    DiscreteDistribution {
        two_labels: label_grid(state.l),
        probs,
        overflow: 0.0,
    }
}

/// P(m_j): anti-diagonal sums of |psi|^2 over pairs with m_s + m_l = m_j.
pub fn quantum_pjz(state: &QuantumState) -> DiscreteDistribution {
    let (ds, dl) = (state.dim_s(), state.dim_l());
    let mut probs = vec![0.0; ds + dl - 1];
    for is in 0..ds {
        for il in 0..dl {
            probs[is + il] += state.amps[is * dl + il].norm_sqr();
        }
    }
    DiscreteDistribution {
        two_labels: jz_label_grid(state.s, state.l),
        probs,
        overflow: 0.0,
    }
}

/// P(m_l) in the x-basis of the l factor.
pub fn quantum_plx(state: &QuantumState, xl: &XBasisTransform) -> Result<DiscreteDistribution> {
    if xl.j != state.l {
        return Err(Error::DimensionMismatch);
    }
    let (ds, dl) = (state.dim_s(), state.dim_l());
    let mut rotated = vec![Complex64::new(0.0, 0.0); ds * dl];
    // Amplitude in the x-basis: psi_x(m_s, k) = sum_{m_l} V[m_l, k] psi.
    gemm_cr(&state.amps, dl, &xl.v, &mut rotated);
    let mut probs = vec![0.0; dl];
    for is in 0..ds {
        for k in 0..dl {
            probs[k] += rotated[is * dl + k].norm_sqr();
        }
    }
    Ok(DiscreteDistribution {
        two_labels: label_grid(state.l),
        probs,
        overflow: 0.0,
    })
}

/// Histogram the classical observable into unit-width bins centered on the
/// quantum eigenvalues; mass outside the label range is reported as
/// overflow, never clamped into the edge bins.
pub fn classical_marginal(
    e: &Ensemble,
    observable: Observable,
    s: SpinMagnitude,
    l: SpinMagnitude,
) -> DiscreteDistribution {
    let two_labels = match observable {
        Observable::Lz | Observable::Lx => label_grid(l),
        Observable::Jz => jz_label_grid(s, l),
    };
    let lo = two_labels[0] as f64 / 2.0;
    let nbins = two_labels.len();
    let mut counts = vec![0u64; nbins];
    let mut overflow = 0u64;
    let (sm, lm) = (e.magnitudes.s_mag, e.magnitudes.l_mag);
    for p in &e.points {
        let value = match observable {
            Observable::Lz => lm * p.l_hat[2],
            Observable::Lx => lm * p.l_hat[0],
            Observable::Jz => sm * p.s_hat[2] + lm * p.l_hat[2],
        };
        let idx = libm::floor(value - lo + 0.5);
        if idx >= 0.0 && (idx as usize) < nbins {
            counts[idx as usize] += 1;
        } else {
            overflow += 1;
        }
    }
    let n = e.points.len() as f64;
    DiscreteDistribution {
        two_labels,
        probs: counts.iter().map(|&c| c as f64 / n).collect(),
        overflow: overflow as f64 / n,
    }
}

/// The flat microcanonical law for L_z: 1/(2l+1) on every label.
pub fn microcanonical_plz(l: SpinMagnitude) -> DiscreteDistribution {
    let dim = l.dim();
    DiscreteDistribution {
        two_labels: label_grid(l),
        probs: vec![1.0 / dim as f64; dim],
        overflow: 0.0,
    }
}

/// The tent-shaped microcanonical law for J_z = S_z + L_z:
/// a flat plateau 1/(2l+1) for |m_j| <= l - s and linear shoulders
/// (l + s + 1 - |m_j|) / ((2s+1)(2l+1)) outside, taking l >= s (the spins
/// are swapped if needed; the law is symmetric in s and l).
pub fn microcanonical_pjz(s: SpinMagnitude, l: SpinMagnitude) -> DiscreteDistribution {
    let (small, big) = if s.two_j() <= l.two_j() {
        (s, l)
    } else {
        (l, s)
    };
    let two_labels = jz_label_grid(s, l);
    let denom = (small.dim() * big.dim()) as f64;
    let plateau = 1.0 / big.dim() as f64;
    let edge = (big.two_j() + small.two_j()) as i32;
    let probs = two_labels
        .iter()
        .map(|&t| {
            let abs2m = t.abs();
            if abs2m <= (big.two_j() as i32 - small.two_j() as i32) {
                plateau
            } else {
                let count = (edge - abs2m) / 2 + 1;
                count as f64 / denom
            }
        })
        .collect();
    DiscreteDistribution {
        two_labels,
        probs,
        overflow: 0.0,
    }
}
