//! Scalar diagnostics: Shannon entropies, relaxation and width-growth
//! estimates, quantum-classical difference statistics, and the size-scaling
//! fit of equilibrium fluctuations.

use crate::marginals::DiscreteDistribution;
use crate::{Error, Result};
use alloc::vec::Vec;

/// Entropy time series in nats.
#[derive(Debug, Clone)]
pub struct EntropySeries {
    pub steps: Vec<usize>,
    pub h: Vec<f64>,
}

/// Signed per-bin differences between two distributions on the same grid and
/// their RMS over bins.
#[derive(Debug, Clone)]
pub struct QCDifference {
    pub per_bin: Vec<f64>,
    pub sigma_qc: f64,
}

impl QCDifference {
    /// sigma_qc normalized by the mean bin probability (1 / bin count): the
    /// relative fluctuation level, which is what scales as the square root
    /// of the system size.
    pub fn relative_sigma(&self) -> f64 {
        self.sigma_qc * self.per_bin.len() as f64
    }
}

/// Equilibrium fluctuation level at one system size.
#[derive(Debug, Clone, Copy)]
pub struct ScalingRecord {
    /// Characteristic action; the l quantum number by convention.
    pub size: f64,
    /// Time-averaged sigma over the equilibrium window.
    pub sigma_qc: f64,
    /// True when the averaging window started before the relaxation
    /// estimate, so the value may be biased high.
    pub early_window: bool,
}

/// Relaxation-time estimate from the growth and Lyapunov exponents.
#[derive(Debug, Clone, Copy)]
pub struct RelaxationEstimate {
    pub lambda_w: f64,
    pub t_sat: f64,
    pub t_rel: f64,
}

/// -sum p ln p over the in-range bins, with 0 ln 0 = 0. Overflow mass is not
/// included; the caller sees it on the distribution itself.
pub fn shannon_entropy(d: &DiscreteDistribution) -> f64 {
    -d.probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * libm::log(p))
        .sum::<f64>()
}

/// Entropies of a sequence of distributions recorded at the given steps.
pub fn entropy_series(steps: &[usize], dists: &[DiscreteDistribution]) -> Result<EntropySeries> {
    if steps.len() != dists.len() {
        return Err(Error::InsufficientData(
            "steps and distributions differ in length",
        ));
    }
    Ok(EntropySeries {
        steps: steps.to_vec(),
        h: dists.iter().map(shannon_entropy).collect(),
    })
}

fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 || x.len() != y.len() {
        return Err(Error::InsufficientData(
            "need at least 2 points for a line fit",
        ));
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("degenerate abscissa in line fit"));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Least-squares slope of (1/2) ln(variance) against n over the window
/// [window.0, window.1] (inclusive): the width-growth exponent lambda_w.
pub fn width_growth_fit(steps: &[usize], variances: &[f64], window: (usize, usize)) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&n, &v) in steps.iter().zip(variances.iter()) {
        if n >= window.0 && n <= window.1 && v > 0.0 {
            xs.push(n as f64);
            ys.push(0.5 * libm::log(v));
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(
            "width fit needs >= 3 points in the window",
        ));
    }
    fit_line(&xs, &ys).map(|(slope, _)| slope)
}

/// Least-squares slope of an entropy series over the step window.
pub fn entropy_growth_rate(series: &EntropySeries, window: (usize, usize)) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&n, &h) in series.steps.iter().zip(series.h.iter()) {
        if n >= window.0 && n <= window.1 {
            xs.push(n as f64);
            ys.push(h);
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(
            "entropy fit needs >= 3 points in the window",
        ));
    }
    fit_line(&xs, &ys).map(|(slope, _)| slope)
}

/// Per-bin differences p - q and their RMS. The label grids must agree
/// exactly.
pub fn qc_difference(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<QCDifference> {
    if p.two_labels != q.two_labels {
        return Err(Error::LabelMismatch);
    }
    let per_bin: Vec<f64> = p
        .probs
        .iter()
        .zip(q.probs.iter())
        .map(|(a, b)| a - b)
        .collect();
    let sigma_qc = libm::sqrt(per_bin.iter().map(|d| d * d).sum::<f64>() / per_bin.len() as f64);
    Ok(QCDifference { per_bin, sigma_qc })
}

/// Time-average of per-step sigma values over the window [n1, n2]
/// (inclusive). `t_rel` marks the record if the window starts too early.
pub fn equilibrium_sigma(
    steps: &[usize],
    sigmas: &[f64],
    window: (usize, usize),
    size: f64,
    t_rel: Option<f64>,
) -> Result<ScalingRecord> {
    let mut acc = 0.0;
    let mut count = 0usize;
    for (&n, &s) in steps.iter().zip(sigmas.iter()) {
        if n >= window.0 && n <= window.1 {
            acc += s;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientData("empty equilibrium window"));
    }
    Ok(ScalingRecord {
        size,
        sigma_qc: acc / count as f64,
        early_window: t_rel.is_some_and(|t| (window.0 as f64) < t),
    })
}

/// Least-squares slope of ln sigma against ln size. Requires at least three
/// records spanning a factor of 4 in size.
pub fn scaling_fit(records: &[ScalingRecord]) -> Result<(f64, f64)> {
    if records.len() < 3 {
        return Err(Error::InsufficientData("scaling fit needs >= 3 sizes"));
    }
    let mut min = f64::INFINITY;
    let mut max = 0.0_f64;
    for r in records {
        min = min.min(r.size);
        max = max.max(r.size);
    }
    if max < 4.0 * min {
        return Err(Error::InsufficientData(
            "scaling fit needs a factor >= 4 in size",
        ));
    }
    let xs: Vec<f64> = records.iter().map(|r| libm::log(r.size)).collect();
    let ys: Vec<f64> = records.iter().map(|r| libm::log(r.sigma_qc)).collect();
    fit_line(&xs, &ys)
}

/// t_sat = ln(l) / lambda_w and t_rel = t_sat + 1/lambda_L, with the O(1)
/// constant of the 1/lambda_L term fixed at 1. Advisory values used for
/// window selection, not anchors.
pub fn relaxation_estimate(lambda_w: f64, lambda_l: f64, l: f64) -> Result<RelaxationEstimate> {
    if lambda_w <= 0.0 || lambda_l <= 0.0 || l <= 0.0 {
        return Err(Error::InvalidParameter(
            "relaxation estimate needs positive exponents",
        ));
    }
    let t_sat = libm::log(l) / lambda_w;
    Ok(RelaxationEstimate {
        lambda_w,
        t_sat,
        t_rel: t_sat + 1.0 / lambda_l,
    })
}
