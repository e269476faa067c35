//! Classical limit on S^2 x S^2: density sampling, the symplectic map,
//! tangent dynamics, and Lyapunov exponents.
//!
//! One period mirrors the quantum operator: each spin direction is first
//! rotated about x by the kick angle (gamma/|S|) times the *other* spin's
//! pre-kick x-component (magnitude included), then both precess about z by
//! the angle `a`.

use crate::floquet::FloquetParams;
use crate::rng::Stream;
use crate::spin::SpinMagnitude;
use crate::{Error, Result};
use alloc::vec::Vec;

pub type Vec3 = [f64; 3];

#[inline]
fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn normalize(v: &mut Vec3) {
    let n = libm::sqrt(dot(v, v));
    v[0] /= n;
    v[1] /= n;
    v[2] /= n;
}

#[inline]
fn rot_x(v: &Vec3, angle: f64) -> Vec3 {
    let (c, s) = (libm::cos(angle), libm::sin(angle));
    [v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]]
}

#[inline]
fn rot_y(v: &Vec3, angle: f64) -> Vec3 {
    let (c, s) = (libm::cos(angle), libm::sin(angle));
    [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]]
}

#[inline]
fn rot_z(v: &Vec3, angle: f64) -> Vec3 {
    let (c, s) = (libm::cos(angle), libm::sin(angle));
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}

/// Point on the product sphere: unit direction of each spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub s_hat: Vec3,
    pub l_hat: Vec3,
}

impl PhasePoint {
    pub fn from_angles(theta_s: f64, phi_s: f64, theta_l: f64, phi_l: f64) -> Self {
        let dir = |theta: f64, phi: f64| -> Vec3 {
            let (st, ct) = (libm::sin(theta), libm::cos(theta));
            [st * libm::cos(phi), st * libm::sin(phi), ct]
        };
        PhasePoint {
            s_hat: dir(theta_s, phi_s),
            l_hat: dir(theta_l, phi_l),
        }
    }
}

/// Fixed classical spin lengths |S| = sqrt(s(s+1)), |L| = sqrt(l(l+1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMagnitudes {
    pub s_mag: f64,
    pub l_mag: f64,
}

impl SpinMagnitudes {
    pub fn from_spins(s: SpinMagnitude, l: SpinMagnitude) -> Self {
        SpinMagnitudes {
            s_mag: s.magnitude(),
            l_mag: l.magnitude(),
        }
    }
}

/// Monte-Carlo representation of the Liouville density.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub points: Vec<PhasePoint>,
    pub magnitudes: SpinMagnitudes,
    pub seed: u64,
}

/// Per-spin parameters of the initial density: centroid direction and the
/// angular variance sigma^2 = 1/(2|J|) matched to the coherent state.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalDensityParams {
    pub theta0: f64,
    pub phi0: f64,
    pub sigma_sq: f64,
}

impl ClassicalDensityParams {
    pub fn coherent_matched(theta0: f64, phi0: f64, magnitude: f64) -> Self {
        ClassicalDensityParams {
            theta0,
            phi0,
            sigma_sq: 1.0 / (2.0 * magnitude),
        }
    }
}

/// Draw one direction from the density: u = sin^2(theta/2) follows the
/// truncated exponential ~ exp(-2u/sigma^2) on [0, 1] (exact inverse CDF),
/// phi is uniform; the cloud is then rigidly rotated by theta0 about y and
/// phi0 about z.
fn sample_direction(p: &ClassicalDensityParams, stream: &mut Stream) -> Vec3 {
    let uu = stream.next_f64();
    let tail = 1.0 - libm::exp(-2.0 / p.sigma_sq);
    let u = -(p.sigma_sq / 2.0) * libm::log(1.0 - uu * tail);
    let z = 1.0 - 2.0 * u;
    let st = libm::sqrt((1.0 - z * z).max(0.0));
    let phi = stream.next_f64() * 2.0 * core::f64::consts::PI;
    let v = [st * libm::cos(phi), st * libm::sin(phi), z];
    rot_z(&rot_y(&v, p.theta0), p.phi0)
}

/// Analytic mean of u = sin^2(theta/2) under the truncated exponential.
pub fn mean_u(sigma_sq: f64) -> f64 {
    let e = libm::exp(-2.0 / sigma_sq);
    sigma_sq / 2.0 - e / (1.0 - e)
}

/// Draw the point with the given index from the initial density. Each index
/// owns an RNG stream keyed by (seed, index), so sampling is independent of
/// how indices are partitioned across threads.
pub fn sample_point(
    params_s: &ClassicalDensityParams,
    params_l: &ClassicalDensityParams,
    seed: u64,
    index: u64,
) -> PhasePoint {
    let mut stream = Stream::new(seed, index);
    PhasePoint {
        s_hat: sample_direction(params_s, &mut stream),
        l_hat: sample_direction(params_l, &mut stream),
    }
}

/// Sample an initial ensemble of `n` points (indices 0..n).
pub fn sample_ensemble(
    params_s: &ClassicalDensityParams,
    params_l: &ClassicalDensityParams,
    n: usize,
    magnitudes: SpinMagnitudes,
    seed: u64,
) -> Ensemble {
    let points = (0..n)
        .map(|i| sample_point(params_s, params_l, seed, i as u64))
        .collect();
    Ensemble {
        points,
        magnitudes,
        seed,
    }
}

/// One period of the classical map.
pub fn map_step(p: &PhasePoint, fp: &FloquetParams, mags: &SpinMagnitudes) -> PhasePoint {
    let c = fp.gamma / mags.s_mag;
    let ang_s = c * mags.l_mag * p.l_hat[0];
    let ang_l = c * mags.s_mag * p.s_hat[0];
    let mut s2 = rot_z(&rot_x(&p.s_hat, ang_s), fp.a);
    let mut l2 = rot_z(&rot_x(&p.l_hat, ang_l), fp.a);
    normalize(&mut s2);
    normalize(&mut l2);
    PhasePoint {
        s_hat: s2,
        l_hat: l2,
    }
}

/// Push a pair of embedded tangent vectors (each tangent to its sphere)
/// through the map's differential. Uses the pre-kick x-components, exactly
/// like `map_step`.
fn push_tangent(
    p: &PhasePoint,
    ds: &Vec3,
    dl: &Vec3,
    fp: &FloquetParams,
    mags: &SpinMagnitudes,
) -> (PhasePoint, Vec3, Vec3) {
    let c = fp.gamma / mags.s_mag;
    let ang_s = c * mags.l_mag * p.l_hat[0];
    let ang_l = c * mags.s_mag * p.s_hat[0];
    let s_kicked = rot_x(&p.s_hat, ang_s);
    let l_kicked = rot_x(&p.l_hat, ang_l);
    // d(R_x(ang) v) = R_x(ang) dv + d(ang) (x_hat x R_x(ang) v).
    let cross_x = |v: &Vec3| -> Vec3 { [0.0, -v[2], v[1]] };
    let d_ang_s = c * mags.l_mag * dl[0];
    let d_ang_l = c * mags.s_mag * ds[0];
    let rs = rot_x(ds, ang_s);
    let rl = rot_x(dl, ang_l);
    let xs = cross_x(&s_kicked);
    let xl = cross_x(&l_kicked);
    let ds2 = [
        rs[0] + d_ang_s * xs[0],
        rs[1] + d_ang_s * xs[1],
        rs[2] + d_ang_s * xs[2],
    ];
    let dl2 = [
        rl[0] + d_ang_l * xl[0],
        rl[1] + d_ang_l * xl[1],
        rl[2] + d_ang_l * xl[2],
    ];
    let next = PhasePoint {
        s_hat: rot_z(&s_kicked, fp.a),
        l_hat: rot_z(&l_kicked, fp.a),
    };
    (next, rot_z(&ds2, fp.a), rot_z(&dl2, fp.a))
}

/// Tangent vector in canonical coordinates (phi_s, z_s, phi_l, z_l), the
/// Darboux coordinates in which the sphere's area measure is dz dphi.
pub type CanonicalTangent = [f64; 4];

fn canonical_to_embedded(v: &Vec3, dphi: f64, dz: f64) -> Result<Vec3> {
    let rho_sq = 1.0 - v[2] * v[2];
    if rho_sq < 1e-12 {
        return Err(Error::ChartPole);
    }
    // d p / d phi = (-y, x, 0); d p / d z = (-z x / rho^2, -z y / rho^2, 1).
    Ok([
        -v[1] * dphi - v[2] * v[0] / rho_sq * dz,
        v[0] * dphi - v[2] * v[1] / rho_sq * dz,
        dz,
    ])
}

fn embedded_to_canonical(v: &Vec3, d: &Vec3) -> Result<(f64, f64)> {
    let rho_sq = 1.0 - v[2] * v[2];
    if rho_sq < 1e-12 {
        return Err(Error::ChartPole);
    }
    Ok(((v[0] * d[1] - v[1] * d[0]) / rho_sq, d[2]))
}

/// Apply the Jacobian of `map_step` in canonical coordinates.
///
/// Errors with `ChartPole` if either spin is within ~1e-6 of a pole, where
/// the (phi, z) chart degenerates; the Lyapunov estimator below works with
/// embedded tangents instead and has no such restriction.
pub fn tangent_step(
    p: &PhasePoint,
    delta: &CanonicalTangent,
    fp: &FloquetParams,
    mags: &SpinMagnitudes,
) -> Result<CanonicalTangent> {
    let ds = canonical_to_embedded(&p.s_hat, delta[0], delta[1])?;
    let dl = canonical_to_embedded(&p.l_hat, delta[2], delta[3])?;
    let (next, ds2, dl2) = push_tangent(p, &ds, &dl, fp, mags);
    let (dphi_s, dz_s) = embedded_to_canonical(&next.s_hat, &ds2)?;
    let (dphi_l, dz_l) = embedded_to_canonical(&next.l_hat, &dl2)?;
    Ok([dphi_s, dz_s, dphi_l, dz_l])
}

/// Deterministic unit vector orthogonal to v.
fn orthogonal_unit(v: &Vec3) -> Vec3 {
    // Cross with the coordinate axis v is least aligned with.
    let a = [libm::fabs(v[0]), libm::fabs(v[1]), libm::fabs(v[2])];
    let axis: Vec3 = if a[0] <= a[1] && a[0] <= a[2] {
        [1.0, 0.0, 0.0]
    } else if a[1] <= a[2] {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let mut c = [
        v[1] * axis[2] - v[2] * axis[1],
        v[2] * axis[0] - v[0] * axis[2],
        v[0] * axis[1] - v[1] * axis[0],
    ];
    normalize(&mut c);
    c
}

/// Largest Lyapunov exponent by the tangent-vector method: evolve an
/// embedded tangent 6-vector alongside the trajectory, renormalize each
/// step, and average the log stretching after discarding `transient` steps.
pub fn lyapunov(
    p0: &PhasePoint,
    fp: &FloquetParams,
    mags: &SpinMagnitudes,
    n_steps: usize,
    transient: usize,
) -> Result<f64> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("lyapunov needs n_steps >= 1"));
    }
    let mut p = *p0;
    let mut ds = orthogonal_unit(&p.s_hat);
    let mut dl = orthogonal_unit(&p.l_hat);
    let inv_sqrt2 = 1.0 / libm::sqrt(2.0);
    for k in 0..3 {
        ds[k] *= inv_sqrt2;
        dl[k] *= inv_sqrt2;
    }
    let mut acc = 0.0;
    for step in 0..(transient + n_steps) {
        let (next, mut ds2, mut dl2) = push_tangent(&p, &ds, &dl, fp, mags);
        // Remove any radial drift so the tangent stays on the spheres.
        let rs = dot(&ds2, &next.s_hat);
        let rl = dot(&dl2, &next.l_hat);
        for k in 0..3 {
            ds2[k] -= rs * next.s_hat[k];
            dl2[k] -= rl * next.l_hat[k];
        }
        let norm = libm::sqrt(dot(&ds2, &ds2) + dot(&dl2, &dl2));
        if step >= transient {
            acc += libm::log(norm);
        }
        for k in 0..3 {
            ds2[k] /= norm;
            dl2[k] /= norm;
        }
        p = next;
        ds = ds2;
        dl = dl2;
    }
    Ok(acc / n_steps as f64)
}

/// Apply the map `n` times to every point.
pub fn evolve_ensemble(e: &Ensemble, fp: &FloquetParams, n: usize) -> Ensemble {
    let mut out = e.clone();
    evolve_points(&mut out.points, fp, &e.magnitudes, n);
    out
}

/// In-place point evolution; the unit callers chunk across threads.
pub fn evolve_points(
    points: &mut [PhasePoint],
    fp: &FloquetParams,
    mags: &SpinMagnitudes,
    n: usize,
) {
    for p in points.iter_mut() {
        for _ in 0..n {
            *p = map_step(p, fp, mags);
        }
    }
}
