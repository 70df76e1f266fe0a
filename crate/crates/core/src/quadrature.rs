//! Gauss-Hermite quadrature for integrals of the form
//! `int_-inf^inf e^{-x^2} f(x) dx`.
//!
//! Nodes and weights come from the Golub-Welsch construction: eigenvalues of
//! the symmetric tridiagonal Jacobi matrix of the Hermite polynomials (zero
//! diagonal, off-diagonal `sqrt(k/2)`), weights from the first components of
//! its eigenvectors scaled by `sqrt(pi)`.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A Gauss-Hermite rule with a fixed number of nodes.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Build the rule with `n >= 1` nodes.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("quadrature needs at least one node".into()));
        }
        let mut diag = vec![0.0; n];
        let mut offdiag: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let mut first_row = vec![0.0; n];
        first_row[0] = 1.0;
        tridiagonal_eigen_first_row(&mut diag, &mut offdiag, &mut first_row)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).expect("finite nodes"));
        let sqrt_pi = core::f64::consts::PI.sqrt();
        let nodes: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let weights: Vec<f64> = order
            .iter()
            .map(|&i| sqrt_pi * first_row[i] * first_row[i])
            .collect();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)`, approximating `int e^{-x^2} f(x) dx`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Sum of the weights; equals `sqrt(pi)` up to rounding.
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Evaluate a rule-dependent scalar on a ladder of node counts, doubling
/// until two consecutive results agree within
/// [`QUADRATURE_CONVERGENCE`](crate::tolerances::QUADRATURE_CONVERGENCE)
/// or the node cap is reached. Returns the finer result.
pub fn converge_scalar(start_nodes: usize, eval: impl Fn(&GaussHermite) -> f64) -> Result<f64> {
    let cap = crate::tolerances::QUADRATURE_NODE_CAP;
    let mut n = start_nodes.min(cap).max(1);
    let mut previous: Option<f64> = None;
    let mut residual = f64::INFINITY;
    loop {
        let rule = GaussHermite::new(n)?;
        let current = eval(&rule);
        if let Some(prev) = previous {
            residual = (prev - current).abs();
            if residual <= crate::tolerances::QUADRATURE_CONVERGENCE {
                return Ok(current);
            }
        }
        previous = Some(current);
        if n >= cap {
            return Err(Error::QuadratureFailure {
                max_nodes: cap,
                residual,
            });
        }
        n = (n * 2).min(cap);
    }
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix,
/// accumulating only the first row of the eigenvector matrix (all the
/// Golub-Welsch weights need). `d` holds the diagonal and returns the
/// eigenvalues (unsorted), `e` the `n - 1` off-diagonal entries.
fn tridiagonal_eigen_first_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    // sentinel simplifies the lookahead below
    let mut e = {
        let mut v = e.to_vec();
        v.push(0.0);
        v
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            // find the first negligible off-diagonal at or after l
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numeric(format!(
                    "tridiagonal QL failed to converge at row {l} of {n}"
                )));
            }
            // Wilkinson-style shift from the leading 2x2
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
