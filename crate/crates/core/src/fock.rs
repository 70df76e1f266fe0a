//! States and operators of `N` bosons in two modes.
//!
//! The sector with conserved total number `N` is spanned by the `N + 1`
//! occupation states `|k, N-k>`, `k` bosons in the first mode and `N - k` in
//! the second. Which pair of modes the labels refer to is an explicit part
//! of every density matrix: a [`ModeBipartition`] names the passive 2x2
//! mixing that produces the basis modes from the reference (spatial) pair.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{unitary_exp_neg_i, CMatrix, Complex64, C_ONE, C_ZERO};
use crate::math::{binomial, cis, cpowu, ln_factorial};
use crate::tolerances as tol;

/// Occupation label `|k, N-k>` of the fixed-N sector.
///
/// Only the first-mode occupation is stored; the second mode always holds
/// the remaining `N - k` bosons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockLabel {
    k: usize,
    n_total: usize,
}

impl FockLabel {
    pub fn new(k: usize, n_total: usize) -> Result<Self> {
        if k > n_total {
            return Err(Error::InvalidLabel { k, n_total });
        }
        Ok(Self { k, n_total })
    }

    /// Occupation of the first mode.
    pub fn first_mode(&self) -> usize {
        self.k
    }

    /// Occupation of the second mode, `N - k`.
    pub fn second_mode(&self) -> usize {
        self.n_total - self.k
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }
}

/// Normalized pure state of the fixed-N sector, `N + 1` complex amplitudes
/// indexed by the first-mode occupation.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_total: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// The occupation state `|k, N-k>`.
    pub fn fock(k: usize, n_total: usize) -> Result<Self> {
        check_n(n_total)?;
        let label = FockLabel::new(k, n_total)?;
        let mut amplitudes = alloc::vec![C_ZERO; n_total + 1];
        amplitudes[label.first_mode()] = C_ONE;
        Ok(Self {
            n_total,
            amplitudes,
        })
    }

    /// Discrete coherent state: all `N` bosons in the single-particle
    /// superposition `(sqrt(xi) e^{-i phi/2}, sqrt(1-xi) e^{i phi/2})`.
    /// Amplitude at `k` is
    /// `sqrt(C(N,k)) xi^{k/2} (1-xi)^{(N-k)/2} e^{-i k phi + i N phi / 2}`.
    pub fn coherent(xi: f64, phi: f64, n_total: usize) -> Result<Self> {
        check_n(n_total)?;
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::Domain(format!("xi = {xi} outside [0, 1]")));
        }
        let n = n_total as f64;
        let amplitudes: Vec<Complex64> = (0..=n_total)
            .map(|k| {
                let kf = k as f64;
                let modulus = binomial(n_total, k).sqrt()
                    * xi.powf(kf / 2.0)
                    * (1.0 - xi).powf((n - kf) / 2.0);
                cis(-kf * phi + n * phi / 2.0) * modulus
            })
            .collect();
        Self::from_amplitudes(n_total, amplitudes)
    }

    /// Build a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(n_total: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_n(n_total)?;
        if amplitudes.len() != n_total + 1 {
            return Err(Error::Domain(format!(
                "expected {} amplitudes, got {}",
                n_total + 1,
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Domain("amplitude vector has no finite norm".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self {
            n_total,
            amplitudes,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes[k]
    }

    /// Projector `|psi><psi|` in the spatial basis.
    pub fn projector(&self) -> FockDensityMatrix {
        self.projector_in(ModeBipartition::spatial())
    }

    /// Projector `|psi><psi|` with the amplitudes read as coordinates in the
    /// Fock basis of `bipartition`.
    pub fn projector_in(&self, bipartition: ModeBipartition) -> FockDensityMatrix {
        FockDensityMatrix::new(self.n_total, CMatrix::outer(&self.amplitudes), bipartition)
            .expect("projector of a normalized state is a valid density matrix")
    }
}

/// A passive 2x2 mode mixing defining which pair of modes the Fock labels
/// refer to. "Diagonal means separable" always refers to the basis of a
/// specific bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBipartition {
    mixing: [[Complex64; 2]; 2],
    name: Option<String>,
}

impl ModeBipartition {
    /// The reference bipartition: identity mixing, e.g. left/right well.
    pub fn spatial() -> Self {
        Self {
            mixing: [[C_ONE, C_ZERO], [C_ZERO, C_ONE]],
            name: Some("spatial".into()),
        }
    }

    /// Energy modes `c = (a + b)/sqrt(2)`, `d = (a - b)/sqrt(2)`, the
    /// eigenmodes of a double well with a penetrable barrier.
    pub fn energy() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let p = Complex64::new(h, 0.0);
        let m = Complex64::new(-h, 0.0);
        Self {
            mixing: [[p, p], [p, m]],
            name: Some("energy".into()),
        }
    }

    /// Arbitrary passive mixing sending the reference operators `(a, b)` to
    /// the bipartition operators; rejected unless unitary.
    pub fn custom(mixing: [[Complex64; 2]; 2]) -> Result<Self> {
        let deviation = mixing_unitarity_deviation(&mixing);
        if deviation > tol::MIXING_UNITARITY {
            return Err(Error::InvalidBipartition { deviation });
        }
        Ok(Self { mixing, name: None })
    }

    pub fn mixing(&self) -> &[[Complex64; 2]; 2] {
        &self.mixing
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Label used in errors and reports.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "custom".into())
    }

    pub fn is_spatial(&self) -> bool {
        let id = [[C_ONE, C_ZERO], [C_ZERO, C_ONE]];
        max_mixing_diff(&self.mixing, &id) <= tol::MIXING_UNITARITY
    }

    /// Whether two bipartitions share the same Fock basis.
    pub fn same_basis(&self, other: &ModeBipartition) -> bool {
        max_mixing_diff(&self.mixing, &other.mixing) <= tol::MIXING_UNITARITY
    }

    /// The `(N+1)`-dimensional unitary mapping reference-basis coordinates
    /// to this bipartition's Fock coordinates: row `m`, column `k` is the
    /// overlap of the m-th new-mode Fock state with `|k, N-k>`.
    pub fn sector_unitary(&self, n_total: usize) -> CMatrix {
        sector_unitary_of(&self.mixing, n_total)
    }
}

/// Sector representation of a 2x2 mode mixing, by exact binomial expansion
/// of `(a^dag)^k (b^dag)^{N-k} |0>` through the inverse mixing.
///
/// With `(c, d) = M (a, b)` one has `a^dag = M00 c^dag + M10 d^dag` and
/// `b^dag = M01 c^dag + M11 d^dag`, and
///
/// ```text
/// U(m, k) = sqrt(m!(N-m)!/(k!(N-k)!))
///           * sum_i C(k, i) C(N-k, m-i)
///                   M00^i M10^{k-i} M01^{m-i} M11^{N-k-m+i}
/// ```
fn sector_unitary_of(mixing: &[[Complex64; 2]; 2], n_total: usize) -> CMatrix {
    let n = n_total;
    let m00 = mixing[0][0];
    let m01 = mixing[0][1];
    let m10 = mixing[1][0];
    let m11 = mixing[1][1];
    CMatrix::from_fn(n + 1, n + 1, |m, k| {
        let log_ratio =
            0.5 * (ln_factorial(m) + ln_factorial(n - m) - ln_factorial(k) - ln_factorial(n - k));
        let lo = m.saturating_sub(n - k);
        let hi = k.min(m);
        let mut acc = C_ZERO;
        for i in lo..=hi {
            let coeff = (ln_binomial_f(k, i) + ln_binomial_f(n - k, m - i) + log_ratio).exp();
            acc += cpowu(m00, i)
                * cpowu(m10, k - i)
                * cpowu(m01, m - i)
                * cpowu(m11, (n - k) - (m - i))
                * coeff;
        }
        acc
    })
}

fn ln_binomial_f(n: usize, k: usize) -> f64 {
    if n <= 60 {
        binomial(n, k).ln()
    } else {
        crate::math::ln_binomial(n, k)
    }
}

/// Collective spin operators of the Schwinger representation,
/// `J_x = (a^dag b + a b^dag)/2`, `J_y = (a^dag b - a b^dag)/2i`,
/// `J_z = (a^dag a - b^dag b)/2`, as matrices on the fixed-N sector in the
/// spatial Fock basis. They satisfy `[J_x, J_y] = i J_z` and cyclic
/// permutations.
#[derive(Debug, Clone)]
pub struct CollectiveSpinOps {
    n_total: usize,
    jx: CMatrix,
    jy: CMatrix,
    jz: CMatrix,
}

impl CollectiveSpinOps {
    pub fn new(n_total: usize) -> Result<Self> {
        check_n(n_total)?;
        let n = n_total;
        let dim = n + 1;
        let mut jx = CMatrix::zeros(dim, dim);
        let mut jy = CMatrix::zeros(dim, dim);
        let mut jz = CMatrix::zeros(dim, dim);
        for k in 0..dim {
            jz[(k, k)] = Complex64::new(k as f64 - n as f64 / 2.0, 0.0);
        }
        // a^dag b raises k by one with amplitude sqrt((k+1)(N-k))
        for k in 0..n {
            let v = 0.5 * (((k + 1) * (n - k)) as f64).sqrt();
            jx[(k + 1, k)] = Complex64::new(v, 0.0);
            jx[(k, k + 1)] = Complex64::new(v, 0.0);
            jy[(k + 1, k)] = Complex64::new(0.0, -v);
            jy[(k, k + 1)] = Complex64::new(0.0, v);
        }
        Ok(Self {
            n_total,
            jx,
            jy,
            jz,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn jx(&self) -> &CMatrix {
        &self.jx
    }

    pub fn jy(&self) -> &CMatrix {
        &self.jy
    }

    pub fn jz(&self) -> &CMatrix {
        &self.jz
    }

    /// `J_n = n . J` along a unit direction.
    pub fn direction(&self, n: [f64; 3]) -> CMatrix {
        &(&(&self.jx * n[0]) + &(&self.jy * n[1])) + &(&self.jz * n[2])
    }
}

/// Density matrix on the fixed-N sector: Hermitian, unit trace, positive
/// semidefinite. Rows and columns are labeled by the Fock basis of the
/// attached bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    n_total: usize,
    entries: CMatrix,
    bipartition: ModeBipartition,
}

impl FockDensityMatrix {
    /// Validates Hermiticity, unit trace and positivity before accepting
    /// the entries.
    pub fn new(n_total: usize, entries: CMatrix, bipartition: ModeBipartition) -> Result<Self> {
        check_n(n_total)?;
        let dim = n_total + 1;
        if entries.rows() != dim || entries.cols() != dim {
            return Err(Error::InvalidState(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        // comparisons are written to reject NaN entries as well
        let herm = entries.hermiticity_deviation();
        if herm.is_nan() || herm > tol::HERMITICITY {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let trace_dev = (entries.trace() - C_ONE).norm();
        if trace_dev.is_nan() || trace_dev > tol::UNIT_TRACE {
            return Err(Error::InvalidState(format!(
                "trace differs from 1 by {trace_dev:.3e}"
            )));
        }
        let min_eig = entries
            .hermitian_eigenvalues()
            .map_err(|e| Error::InvalidState(format!("positivity check failed: {e}")))?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig.is_nan() || min_eig < tol::PSD_FLOOR {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (minimum eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self {
            n_total,
            entries,
            bipartition,
        })
    }

    /// Convex mixture of pure states, `sum_i p_i |psi_i><psi_i|`, in the
    /// spatial basis. Weights must be non-negative; they are normalized.
    pub fn mixture(components: &[(f64, PureState)]) -> Result<Self> {
        let n_total = components
            .first()
            .map(|(_, s)| s.n_total())
            .ok_or_else(|| Error::Domain("mixture needs at least one component".into()))?;
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::Domain(
                "mixture weights must have a positive sum".into(),
            ));
        }
        let dim = n_total + 1;
        let mut entries = CMatrix::zeros(dim, dim);
        for (w, state) in components {
            if *w < 0.0 {
                return Err(Error::Domain("mixture weights must be non-negative".into()));
            }
            if state.n_total() != n_total {
                return Err(Error::Domain(
                    "mixture components must share n_total".into(),
                ));
            }
            entries = &entries + &(&CMatrix::outer(state.amplitudes()) * (*w / total));
        }
        Self::new(n_total, entries, ModeBipartition::spatial())
    }

    /// The maximally mixed state `I / (N + 1)`.
    pub fn maximally_mixed(n_total: usize) -> Result<Self> {
        check_n(n_total)?;
        let dim = n_total + 1;
        let entries = &CMatrix::identity(dim) * (1.0 / dim as f64);
        Self::new(n_total, entries, ModeBipartition::spatial())
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.n_total + 1
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        self.entries[(k, l)]
    }

    pub fn bipartition(&self) -> &ModeBipartition {
        &self.bipartition
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.entries[(k, k)].re).collect()
    }

    /// Largest off-diagonal magnitude.
    pub fn max_offdiagonal(&self) -> f64 {
        let mut max: f64 = 0.0;
        for k in 0..self.dim() {
            for l in 0..self.dim() {
                if k != l {
                    max = max.max(self.entries[(k, l)].norm());
                }
            }
        }
        max
    }

    /// Re-express the state in the Fock basis of another bipartition:
    /// `rho' = U rho U^dag` with `U` the sector unitary of the relative
    /// mixing. Trace, Hermiticity and spectrum are preserved.
    pub fn change_bipartition(&self, target: &ModeBipartition) -> Result<FockDensityMatrix> {
        if self.bipartition.same_basis(target) {
            let mut out = self.clone();
            out.bipartition = target.clone();
            return Ok(out);
        }
        // relative mixing: target modes in terms of the current ones
        let rel = mixing_product(target.mixing(), &mixing_adjoint(self.bipartition.mixing()));
        let u = sector_unitary_of(&rel, self.n_total);
        let entries = u.dot(&self.entries).dot(&u.adjoint());
        Self::new(self.n_total, entries, target.clone())
    }

    /// Rotate by `exp(-i theta J_n)` about a unit axis, where `J_n` is the
    /// collective spin along `n` (with respect to the reference modes). The
    /// result stays in this state's basis.
    pub fn rotate(&self, axis: [f64; 3], theta: f64) -> Result<FockDensityMatrix> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if (norm - 1.0).abs() > tol::AXIS_NORM {
            return Err(Error::Domain(format!(
                "rotation axis has norm {norm}, expected a unit vector"
            )));
        }
        let ops = CollectiveSpinOps::new(self.n_total)?;
        let mut generator = ops.direction(axis);
        if !self.bipartition.is_spatial() {
            let u = self.bipartition.sector_unitary(self.n_total);
            generator = u.dot(&generator).dot(&u.adjoint());
        }
        let rotation = unitary_exp_neg_i(&generator, theta)?;
        let entries = rotation.dot(&self.entries).dot(&rotation.adjoint());
        Self::new(self.n_total, entries, self.bipartition.clone())
    }
}

fn check_n(n_total: usize) -> Result<()> {
    if n_total == 0 {
        return Err(Error::Domain("n_total must be at least 1".into()));
    }
    Ok(())
}

fn mixing_adjoint(m: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

fn mixing_product(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[C_ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn max_mixing_diff(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> f64 {
    let mut max: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            max = max.max((a[i][j] - b[i][j]).norm());
        }
    }
    max
}

fn mixing_unitarity_deviation(m: &[[Complex64; 2]; 2]) -> f64 {
    let prod = mixing_product(m, &mixing_adjoint(m));
    let id = [[C_ONE, C_ZERO], [C_ZERO, C_ONE]];
    max_mixing_diff(&prod, &id)
}
