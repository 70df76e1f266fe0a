//! Dense complex matrices and the Hermitian eigensolver used everywhere else.
//!
//! Every matrix in this crate is small: `(N+1)`-dimensional for the fixed-N
//! sector, `(N+1)^2` for partially transposed operators. At that scale a
//! cyclic Jacobi eigensolver is simpler and more accurate than a LAPACK
//! binding, and it keeps the crate `no_std`.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub const C_ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const C_ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

const MAX_JACOBI_SWEEPS: usize = 60;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix product `self * rhs`.
    pub fn dot(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max `|a_ij - conj(a_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Max deviation of `self * self^dag` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        assert!(self.is_square());
        self.dot(&self.adjoint())
            .max_abs_diff(&CMatrix::identity(self.rows))
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let (values, _) = self.jacobi(false)?;
        Ok(values)
    }

    /// Full eigendecomposition of a Hermitian matrix.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        let (values, vectors) = self.jacobi(true)?;
        Ok(HermitianEigen {
            values,
            vectors: vectors.expect("vectors requested"),
        })
    }

    /// Trace norm `tr sqrt(A^dag A)`, the sum of singular values.
    pub fn trace_norm(&self) -> Result<f64> {
        let gram = self.adjoint().dot(self);
        let eigs = gram.hermitian_eigenvalues().map_err(|_| {
            Error::Numeric(format!(
                "singular value decomposition failed for a {}x{} matrix",
                self.rows, self.cols
            ))
        })?;
        Ok(eigs.iter().map(|&l| l.max(0.0).sqrt()).sum())
    }

    /// Cyclic Jacobi for Hermitian matrices. Each rotation zeroes one
    /// off-diagonal pair; convergence is quadratic in the sweep count.
    fn jacobi(&self, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
        assert!(self.is_square(), "eigendecomposition needs a square matrix");
        let n = self.rows;
        let mut h = self.clone();
        let mut v = if want_vectors {
            Some(CMatrix::identity(n))
        } else {
            None
        };

        let frob = h.frobenius_norm();
        let off_target = (1e-14 * frob.max(f64::MIN_POSITIVE)).powi(2);

        let mut converged = false;
        for _sweep in 0..MAX_JACOBI_SWEEPS {
            let mut off_sq = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off_sq += 2.0 * h[(p, q)].norm_sqr();
                }
            }
            if off_sq <= off_target {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut h, v.as_mut(), p, q);
                }
            }
        }
        if !converged {
            return Err(Error::Numeric(format!(
                "Jacobi eigensolver did not converge for a {n}x{n} matrix"
            )));
        }

        let mut order: Vec<usize> = (0..n).collect();
        let values: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
        order.sort_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .expect("finite eigenvalues")
        });
        let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let sorted_vectors = v.map(|v| CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]));
        Ok((sorted_values, sorted_vectors))
    }
}

/// One Jacobi rotation zeroing `h[(p, q)]`. The complex phase of the pivot is
/// absorbed into the rotation so the 2x2 problem reduces to the real
/// symmetric case.
fn rotate(h: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize) {
    let g = h[(p, q)];
    let r = g.norm();
    if r < 1e-290 {
        return;
    }
    let omega = g / r;
    let alpha = h[(p, p)].re;
    let beta = h[(q, q)].re;
    let tau = (alpha - beta) / (2.0 * r);
    // smaller root of t^2 - 2 tau t - 1 = 0
    let t = if tau >= 0.0 {
        -1.0 / (tau + tau.hypot(1.0))
    } else {
        1.0 / (-tau + tau.hypot(1.0))
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // W = [[c, s], [-conj(omega) s, conj(omega) c]] diagonalizes the pivot
    // block of H under H -> W^dag H W.
    let n = h.rows();
    let col_p = omega.conj() * s;
    let col_q = omega.conj() * c;
    for i in 0..n {
        let hp = h[(i, p)];
        let hq = h[(i, q)];
        h[(i, p)] = hp * c - hq * col_p;
        h[(i, q)] = hp * s + hq * col_q;
    }
    for j in 0..n {
        let hp = h[(p, j)];
        let hq = h[(q, j)];
        h[(p, j)] = hp * c - hq * (omega * s);
        h[(q, j)] = hp * s + hq * (omega * c);
    }
    h[(p, q)] = C_ZERO;
    h[(q, p)] = C_ZERO;
    h[(p, p)] = Complex64::new(h[(p, p)].re, 0.0);
    h[(q, q)] = Complex64::new(h[(q, q)].re, 0.0);

    if let Some(v) = v {
        for i in 0..n {
            let vp = v[(i, p)];
            let vq = v[(i, q)];
            v[(i, p)] = vp * c - vq * col_p;
            v[(i, q)] = vp * s + vq * col_q;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix: `values` ascending, column `j`
/// of `vectors` is the eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// `exp(-i theta H)` for Hermitian `H`, via eigendecomposition. Exact up to
/// eigensolver error, with no step-size tuning.
pub fn unitary_exp_neg_i(generator: &CMatrix, theta: f64) -> Result<CMatrix> {
    let eig = generator.hermitian_eigen()?;
    let n = generator.rows();
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| crate::math::cis(-theta * l))
        .collect();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let acc = (0..n)
                .map(|k| eig.vectors[(i, k)] * phases[k] * eig.vectors[(j, k)].conj())
                .sum();
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<Complex64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * rhs).collect(),
        }
    }
}

impl Mul<f64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: f64) -> CMatrix {
        self * Complex64::new(rhs, 0.0)
    }
}
