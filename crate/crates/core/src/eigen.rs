//! Eigensolvers: QL with implicit shifts for real symmetric tridiagonal
//! matrices, and a cyclic Jacobi sweep for complex Hermitian matrices.

use crate::linalg::Mat;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

const MAX_QL_ITERS: usize = 50;

#[inline]
fn hypot(a: f64, b: f64) -> f64 {
    libm::hypot(a, b)
}

/// Diagonalize a symmetric tridiagonal matrix with diagonal `d` (length n)
/// and sub-diagonal `e` (length n-1, e[i] couples rows i and i+1).
///
/// QL with implicit shifts (EISPACK tql2). Returns eigenvalues (unsorted) in
/// `d`; column k of `z` is the eigenvector for d[k]. `z` must start as the
/// identity (or an accumulated orthogonal transform).
pub fn tqli(d: &mut [f64], e_sub: &mut [f64], z: &mut Mat) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    debug_assert_eq!(e_sub.len(), n - 1);
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(e_sub);

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    for l in 0..n {
        tst1 = tst1.max(libm::fabs(d[l]) + libm::fabs(e[l]));
        let mut m = l;
        while m < n {
            if libm::fabs(e[m]) <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERS {
                    return Err(Error::EigenNonConvergence);
                }
                // Implicit shift from the leading 2x2.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zk = z.at(k, i + 1);
                        z.set(k, i + 1, s * z.at(k, i) + c * zk);
                        z.set(k, i, c * z.at(k, i) - s * zk);
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if libm::fabs(e[l]) <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigenvalues of a complex Hermitian matrix (row-major, n x n) by cyclic
/// Jacobi rotations. The input buffer is destroyed. Returns eigenvalues in
/// ascending order.
pub fn hermitian_eigenvalues(a: &mut [Complex64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let idx = |i: usize, j: usize| i * n + j;
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[idx(i, j)].norm_sqr();
            }
        }
        if off < 1e-28 {
            let mut ev: Vec<f64> = (0..n).map(|i| a[idx(i, i)].re).collect();
            ev.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(ev);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq.norm_sqr() < 1e-36 {
                    continue;
                }
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                // Unitary 2x2 U = [[c, w], [-conj(w), c]] with
                // w = sin(theta) conj(a_pq)/|a_pq| zeroes (U^H A U)_pq when
                // tan(2 theta) = 2 |a_pq| / (a_pp - a_qq).
                let abs_apq = apq.norm();
                let phase = apq / abs_apq;
                let theta = 0.5 * libm::atan2(2.0 * abs_apq, app - aqq);
                let (c, s) = (libm::cos(theta), libm::sin(theta));
                let w = s * phase.conj();
                // A <- A U on columns, then A <- U^H A on rows.
                for i in 0..n {
                    let aip = a[idx(i, p)];
                    let aiq = a[idx(i, q)];
                    a[idx(i, p)] = c * aip + w * aiq;
                    a[idx(i, q)] = -w.conj() * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[idx(p, j)];
                    let aqj = a[idx(q, j)];
                    a[idx(p, j)] = c * apj + w.conj() * aqj;
                    a[idx(q, j)] = -w * apj + c * aqj;
                }
                a[idx(p, q)] = Complex64::new(0.0, 0.0);
                a[idx(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    Err(Error::EigenNonConvergence)
}
