//! Minimal dense linear algebra for the propagator sandwich.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }
}

#[inline]
pub fn cis(x: f64) -> Complex64 {
    Complex64::new(libm::cos(x), libm::sin(x))
}

/// out = a * b, with a real (m x k) and b complex (k x n, row-major).
///
/// ikj loop order: the inner j-loop runs over contiguous rows of `b` and
/// `out`, which is what lets the compiler vectorize the accumulation.
pub fn gemm_rc(a: &Mat, b: &[Complex64], b_cols: usize, out: &mut [Complex64]) {
    let (m, k) = (a.rows, a.cols);
    debug_assert_eq!(b.len(), k * b_cols);
    debug_assert_eq!(out.len(), m * b_cols);
    out.fill(Complex64::new(0.0, 0.0));
    for i in 0..m {
        let arow = &a.data[i * k..(i + 1) * k];
        let orow = &mut out[i * b_cols..(i + 1) * b_cols];
        for (p, &aip) in arow.iter().enumerate() {
            if aip == 0.0 {
                continue;
            }
            let brow = &b[p * b_cols..(p + 1) * b_cols];
            for (o, &bv) in orow.iter_mut().zip(brow.iter()) {
                *o += aip * bv;
            }
        }
    }
}

/// out = a * b, with a complex (m x k, row-major) and b real (k x n).
pub fn gemm_cr(a: &[Complex64], a_cols: usize, b: &Mat, out: &mut [Complex64]) {
    let (k, n) = (b.rows, b.cols);
    debug_assert_eq!(a.len() % a_cols, 0);
    debug_assert_eq!(a_cols, k);
    let m = a.len() / a_cols;
    debug_assert_eq!(out.len(), m * n);
    out.fill(Complex64::new(0.0, 0.0));
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let orow = &mut out[i * n..(i + 1) * n];
        for (p, &aip) in arow.iter().enumerate() {
            let brow = &b.data[p * n..(p + 1) * n];
            for (o, &bv) in orow.iter_mut().zip(brow.iter()) {
                *o += aip * bv;
            }
        }
    }
}
