//! Bipartite negativity and separability for fixed-N two-mode states.
//!
//! Partial transposition with respect to the first mode sends
//! `rho = sum rho_kl |k,N-k><l,N-l|` to
//! `rho^G = sum rho_kl |l,N-k><k,N-l|`, an operator on the larger space of
//! independent occupations. The negativity `||rho^G||_1 - 1` vanishes
//! exactly on the Fock-diagonal (separable) states, which makes it an
//! exhaustive witness here; it also equals the plain sum of off-diagonal
//! magnitudes, and both routes are implemented so they can check each other.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::fock::FockDensityMatrix;
use crate::linalg::CMatrix;
use crate::tolerances as tol;

/// Operator on the space of independent mode occupations `|m, n>`,
/// `m, n in 0..=N`, flattened as `m * (N + 1) + n`. Produced by partial
/// transposition; generally not a state.
#[derive(Debug, Clone)]
pub struct ExtendedOperator {
    n_total: usize,
    entries: CMatrix,
}

impl ExtendedOperator {
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// `(N + 1)^2`.
    pub fn dim(&self) -> usize {
        (self.n_total + 1) * (self.n_total + 1)
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Flat index of `|first, second>`.
    pub fn flat_index(&self, first: usize, second: usize) -> usize {
        first * (self.n_total + 1) + second
    }
}

/// How a negativity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativityMethod {
    /// Sum of off-diagonal magnitudes.
    ClosedForm,
    /// Trace norm of the partial transpose, minus one.
    TraceNorm,
}

/// A negativity value, clamped to zero when within rounding of it.
#[derive(Debug, Clone)]
pub struct NegativityResult {
    /// Clamped, non-negative value.
    pub value: f64,
    /// Value before clamping (can be slightly negative for the trace-norm
    /// route).
    pub raw_value: f64,
    /// Label of the bipartition whose basis the computation used.
    pub bipartition_tag: String,
    pub method: NegativityMethod,
}

fn clamp_negativity(raw: f64) -> f64 {
    if raw.abs() <= tol::NEGATIVITY_CLAMP {
        0.0
    } else {
        raw.max(0.0)
    }
}

/// Partial transposition with respect to the first mode: entry
/// `rho_kl` lands at row `|l, N-k>`, column `|k, N-l>`. The trace is
/// preserved.
pub fn partial_transpose(rho: &FockDensityMatrix) -> ExtendedOperator {
    let n = rho.n_total();
    let side = (n + 1) * (n + 1);
    let mut entries = CMatrix::zeros(side, side);
    for k in 0..=n {
        for l in 0..=n {
            let row = l * (n + 1) + (n - k);
            let col = k * (n + 1) + (n - l);
            entries[(row, col)] = rho.entry(k, l);
        }
    }
    ExtendedOperator {
        n_total: n,
        entries,
    }
}

/// Negativity as `||rho^G||_1 - 1`, the sum of singular values of the
/// partial transpose minus one.
pub fn negativity_trace_norm(rho: &FockDensityMatrix) -> Result<NegativityResult> {
    let pt = partial_transpose(rho);
    let raw = pt.entries.trace_norm()? - 1.0;
    Ok(NegativityResult {
        value: clamp_negativity(raw),
        raw_value: raw,
        bipartition_tag: rho.bipartition().label(),
        method: NegativityMethod::TraceNorm,
    })
}

/// Negativity as the sum of off-diagonal magnitudes,
/// `sum_{k != l} |rho_kl|`.
pub fn negativity_closed_form(rho: &FockDensityMatrix) -> NegativityResult {
    let dim = rho.dim();
    let mut sum = 0.0;
    for k in 0..dim {
        for l in 0..dim {
            if k != l {
                sum += rho.entry(k, l).norm();
            }
        }
    }
    NegativityResult {
        value: clamp_negativity(sum),
        raw_value: sum,
        bipartition_tag: rho.bipartition().label(),
        method: NegativityMethod::ClosedForm,
    }
}

/// Separability in the basis of the state's bipartition: true iff every
/// off-diagonal entry has magnitude at most `tol`. Equivalently the
/// closed-form negativity is at most `tol * N * (N + 1)`, the number of
/// off-diagonal entries times the per-entry bound.
pub fn is_separable(rho: &FockDensityMatrix, tol: f64) -> bool {
    assert!(tol > 0.0, "separability tolerance must be positive");
    rho.max_offdiagonal() <= tol
}

/// Diagonal part of a state: its separable projection, useful in tests and
/// reports.
pub fn diagonal_weights(rho: &FockDensityMatrix) -> Vec<f64> {
    rho.diagonal()
}
