//! Angular-momentum kinematics for a single spin j: labels, J_x matrix
//! elements, and the z-basis to x-basis transform.

use crate::eigen::tqli;
use crate::linalg::Mat;
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;

/// Spin quantum number j, stored as 2j so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinMagnitude {
    two_j: u32,
}

impl SpinMagnitude {
    pub fn from_two_j(two_j: u32) -> Self {
        SpinMagnitude { two_j }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Hilbert-space dimension 2j + 1.
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// j(j + 1), exact in double precision for all supported j.
    pub fn casimir(&self) -> f64 {
        (self.two_j as f64) * (self.two_j as f64 + 2.0) / 4.0
    }

    /// Classical spin length |J| = sqrt(j(j+1)).
    pub fn magnitude(&self) -> f64 {
        libm::sqrt(self.casimir())
    }

    /// Magnetic labels m = -j .. j in ascending order.
    pub fn labels(&self) -> impl Iterator<Item = MagneticLabel> + '_ {
        let two_j = self.two_j as i32;
        (0..self.dim() as i32).map(move |k| MagneticLabel {
            two_m: -two_j + 2 * k,
        })
    }

    /// Label for basis index k (k = 0 is m = -j).
    pub fn label_at(&self, k: usize) -> MagneticLabel {
        MagneticLabel {
            two_m: -(self.two_j as i32) + 2 * k as i32,
        }
    }
}

/// Magnetic quantum number m, stored as 2m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct MagneticLabel {
    pub two_m: i32,
}

impl MagneticLabel {
    pub fn value(&self) -> f64 {
        self.two_m as f64 / 2.0
    }
}

/// J_x in the z-basis: zero diagonal, off-diagonal
/// <m+1|J_x|m> = sqrt(j(j+1) - m(m+1)) / 2.
///
/// Returns the sub-diagonal (length dim - 1); entry k couples m = -j+k and
/// m = -j+k+1.
pub fn jx_tridiagonal(j: SpinMagnitude) -> Vec<f64> {
    let jj = j.casimir();
    (0..j.dim().saturating_sub(1))
        .map(|k| {
            let m = j.label_at(k).value();
            0.5 * libm::sqrt(jj - m * (m + 1.0))
        })
        .collect()
}

/// Eigen-decomposition of J_x. Since J_x is real symmetric in the z-basis,
/// the transform is a real orthogonal matrix.
#[derive(Debug, Clone)]
pub struct XBasisTransform {
    pub j: SpinMagnitude,
    /// Column k is the eigenvector for eigenvalue `eigenvalues[k]`.
    pub v: Mat,
    /// Ascending; equals {-j, .., j} to solver accuracy.
    pub eigenvalues: Vec<f64>,
}

/// Diagonalize J_x for spin j.
///
/// Eigenvalues are sorted ascending and each eigenvector column is scaled so
/// its largest-magnitude entry is positive, making the output deterministic.
pub fn x_basis_transform(j: SpinMagnitude) -> Result<XBasisTransform> {
    let n = j.dim();
    let mut d = vec![0.0; n];
    let mut e = jx_tridiagonal(j);
    let mut z = Mat::identity(n);
    tqli(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());

    let mut v = Mat::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (col, &src) in order.iter().enumerate() {
        eigenvalues.push(d[src]);
        let mut best = 0usize;
        let mut best_abs = 0.0;
        for row in 0..n {
            let a = libm::fabs(z.at(row, src));
            if a > best_abs {
                best_abs = a;
                best = row;
            }
        }
        let sign = if z.at(best, src) < 0.0 { -1.0 } else { 1.0 };
        for row in 0..n {
            v.set(row, col, sign * z.at(row, src));
        }
    }
    Ok(XBasisTransform { j, v, eigenvalues })
}
