//! Dephasing dynamics generated by the collective `J_z`.
//!
//! The master equation
//! `d rho/dt = gamma (J_z rho J_z - (1/2){J_z^2, rho})`
//! leaves the spatial Fock populations untouched and damps each coherence as
//! `rho_kl(t) = e^{-t gamma (k-l)^2 / 2} rho_kl(0)`. Three backends compute
//! the same channel:
//!
//! * [`evolve_closed_form`] — the exact per-entry solution (authoritative);
//! * [`evolve_ode`] — fixed-step RK4 on the explicit matrix generator;
//! * [`evolve_kraus_quadrature`] — Gauss-Hermite quadrature of the Gaussian
//!   average over `z`-rotations,
//!   `rho(t) = (1/2 sqrt(pi)) int du e^{-u^2/4}
//!             e^{-i sqrt(t gamma / 2) u J_z} rho e^{+i sqrt(t gamma / 2) u J_z}`,
//!   which exhibits the channel's completely positive Kraus form.
//!
//! All three require the state in the spatial basis, the one where `J_z`
//! of the reference modes is diagonal. Quadrature accuracy degrades once
//! `sqrt(t gamma) N` outgrows the node cap; the closed form has no such
//! limit and is what the other backends are checked against.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;

use crate::entanglement::negativity_closed_form;
use crate::error::{Error, Result};
use crate::fock::{CollectiveSpinOps, FockDensityMatrix};
use crate::linalg::{CMatrix, Complex64};
use crate::math::{binomial, ipow};
use crate::quadrature::GaussHermite;
use crate::tolerances as tol;

/// Noise strength and output time grid of an evolution run.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingParams {
    gamma: f64,
    times: Vec<f64>,
}

impl DephasingParams {
    /// `gamma >= 0`; `times` non-empty, non-negative, strictly increasing.
    pub fn new(gamma: f64, times: Vec<f64>) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::Domain(format!(
                "gamma = {gamma} must be finite and >= 0"
            )));
        }
        if times.is_empty() {
            return Err(Error::Domain("time grid must not be empty".into()));
        }
        if times[0] < 0.0 {
            return Err(Error::Domain("times must be non-negative".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(
                "times must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { gamma, times })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }
}

/// Which backend produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    ClosedForm,
    Ode,
    KrausQuadrature,
}

/// A state trajectory over the parameter grid. Every state satisfies the
/// density-matrix invariants and the populations match the initial state's.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    params: DephasingParams,
    states: Vec<FockDensityMatrix>,
    backend: Backend,
}

impl EvolutionResult {
    fn assemble(
        rho0: &FockDensityMatrix,
        params: &DephasingParams,
        entries: Vec<CMatrix>,
        backend: Backend,
    ) -> Result<Self> {
        let reference = rho0.diagonal();
        let mut states = Vec::with_capacity(entries.len());
        for (m, &t) in entries.into_iter().zip(params.times()) {
            let state = FockDensityMatrix::new(rho0.n_total(), m, rho0.bipartition().clone())
                .map_err(|e| {
                    Error::Numeric(format!("state at t = {t} violates invariants: {e}"))
                })?;
            let drift = state
                .diagonal()
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if drift > tol::DIAGONAL_CONSERVATION {
                return Err(Error::Numeric(format!(
                    "populations drifted by {drift:.3e} at t = {t}"
                )));
            }
            states.push(state);
        }
        Ok(Self {
            params: params.clone(),
            states,
            backend,
        })
    }

    pub fn params(&self) -> &DephasingParams {
        &self.params
    }

    pub fn states(&self) -> &[FockDensityMatrix] {
        &self.states
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// `(t, state)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &FockDensityMatrix)> {
        self.params.times.iter().copied().zip(&self.states)
    }
}

fn require_spatial(rho: &FockDensityMatrix) -> Result<()> {
    if !rho.bipartition().is_spatial() {
        return Err(Error::BasisMismatch {
            required: "spatial".into(),
            found: rho.bipartition().label(),
        });
    }
    Ok(())
}

/// Exact solution: each coherence decays as `e^{-t gamma (k-l)^2 / 2}`.
pub fn evolve_closed_form(
    rho0: &FockDensityMatrix,
    params: &DephasingParams,
) -> Result<EvolutionResult> {
    require_spatial(rho0)?;
    let dim = rho0.dim();
    let entries = params
        .times()
        .iter()
        .map(|&t| {
            CMatrix::from_fn(dim, dim, |k, l| {
                let d = k as f64 - l as f64;
                rho0.entry(k, l) * (-t * params.gamma() * d * d / 2.0).exp()
            })
        })
        .collect();
    EvolutionResult::assemble(rho0, params, entries, Backend::ClosedForm)
}

/// Classical fixed-step RK4 on the matrix master equation, with the
/// generator built explicitly from the spin operators. The initial step
/// satisfies `gamma N^2 h <= 1e-2` and is halved until two consecutive
/// refinements agree entrywise within `1e-10`.
pub fn evolve_ode(rho0: &FockDensityMatrix, params: &DephasingParams) -> Result<EvolutionResult> {
    require_spatial(rho0)?;
    let n = rho0.n_total();
    let gamma = params.gamma();
    if gamma == 0.0 {
        let entries = params
            .times()
            .iter()
            .map(|_| rho0.entries().clone())
            .collect();
        return EvolutionResult::assemble(rho0, params, entries, Backend::Ode);
    }

    let ops = CollectiveSpinOps::new(n)?;
    let jz = ops.jz().clone();
    let jz2 = jz.dot(&jz);
    let rhs = |rho: &CMatrix| -> CMatrix {
        let sandwich = jz.dot(rho).dot(&jz);
        let anti = &jz2.dot(rho) + &rho.dot(&jz2);
        &(&sandwich - &(&anti * 0.5)) * gamma
    };

    let mut h = tol::ODE_STEP_FACTOR / (gamma * (n * n) as f64);
    const MAX_REFINEMENTS: usize = 10;
    let mut previous: Option<Vec<CMatrix>> = None;
    for _ in 0..=MAX_REFINEMENTS {
        let current = rk4_trajectory(rho0.entries(), params.times(), h, &rhs);
        if let Some(prev) = &previous {
            let change = prev
                .iter()
                .zip(&current)
                .map(|(a, b)| a.max_abs_diff(b))
                .fold(0.0, f64::max);
            if change < tol::ODE_REFINEMENT {
                return EvolutionResult::assemble(rho0, params, current, Backend::Ode);
            }
        }
        previous = Some(current);
        h /= 2.0;
        if h <= 0.0 || h.is_nan() {
            break;
        }
    }
    Err(Error::IntegrationFailure(format!(
        "step halving stalled below h = {h:.3e} without meeting {:.0e}",
        tol::ODE_REFINEMENT
    )))
}

fn rk4_trajectory(
    rho0: &CMatrix,
    times: &[f64],
    h: f64,
    rhs: &impl Fn(&CMatrix) -> CMatrix,
) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(times.len());
    let mut state = rho0.clone();
    let mut t = 0.0;
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / h).ceil().max(1.0) as usize;
            let step = span / steps as f64;
            for _ in 0..steps {
                state = rk4_step(&state, step, rhs);
            }
            t = target;
        }
        out.push(state.clone());
    }
    out
}

fn rk4_step(y: &CMatrix, h: f64, rhs: &impl Fn(&CMatrix) -> CMatrix) -> CMatrix {
    let k1 = rhs(y);
    let k2 = rhs(&(y + &(&k1 * (h / 2.0))));
    let k3 = rhs(&(y + &(&k2 * (h / 2.0))));
    let k4 = rhs(&(y + &(&k3 * h)));
    let sum = &(&k1 + &(&k2 * 2.0)) + &(&(&k3 * 2.0) + &k4);
    y + &(&sum * (h / 6.0))
}

/// Gauss-Hermite evaluation of the Gaussian average over `z`-rotations.
/// After `u = 2x` the weight becomes `e^{-x^2}/sqrt(pi)` and the rotation
/// angle `2 x sqrt(t gamma / 2)`. The node count starts at `nodes` and is
/// doubled (up to the cap) until two refinements agree entrywise within
/// `1e-9`.
pub fn evolve_kraus_quadrature(
    rho0: &FockDensityMatrix,
    params: &DephasingParams,
    nodes: usize,
) -> Result<EvolutionResult> {
    require_spatial(rho0)?;
    if nodes < 8 {
        return Err(Error::Domain(format!("nodes = {nodes} must be at least 8")));
    }
    let entries = params
        .times()
        .iter()
        .map(|&t| converged_quadrature(nodes, |rule| kraus_average(rho0, params.gamma(), t, rule)))
        .collect::<Result<Vec<_>>>()?;
    EvolutionResult::assemble(rho0, params, entries, Backend::KrausQuadrature)
}

fn kraus_average(rho0: &FockDensityMatrix, gamma: f64, t: f64, rule: &GaussHermite) -> CMatrix {
    let dim = rho0.dim();
    let n = rho0.n_total() as f64;
    let angle_scale = 2.0 * (t * gamma / 2.0).sqrt();
    let mut acc = CMatrix::zeros(dim, dim);
    let norm = core::f64::consts::PI.sqrt();
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let angle = angle_scale * x;
        // e^{-i angle J_z} is diagonal with phases e^{-i angle (k - N/2)}
        let phases: Vec<Complex64> = (0..dim)
            .map(|k| crate::math::cis(-angle * (k as f64 - n / 2.0)))
            .collect();
        for k in 0..dim {
            for l in 0..dim {
                acc[(k, l)] += rho0.entry(k, l) * phases[k] * phases[l].conj() * (w / norm);
            }
        }
    }
    acc
}

/// Run `eval` on a ladder of node counts, doubling until two consecutive
/// results agree entrywise within [`tol::QUADRATURE_CONVERGENCE`]; the finer
/// result is returned.
fn converged_quadrature(
    start_nodes: usize,
    eval: impl Fn(&GaussHermite) -> CMatrix,
) -> Result<CMatrix> {
    let cap = tol::QUADRATURE_NODE_CAP;
    let mut ladder = Vec::new();
    if start_nodes >= cap {
        ladder.push(cap / 2);
        ladder.push(cap);
    } else {
        let mut n = start_nodes;
        ladder.push(n);
        while n < cap {
            n = (n * 2).min(cap);
            ladder.push(n);
        }
    }

    let mut previous: Option<CMatrix> = None;
    let mut residual = f64::INFINITY;
    for &n in &ladder {
        let rule = GaussHermite::new(n)?;
        let current = eval(&rule);
        if let Some(prev) = &previous {
            residual = prev.max_abs_diff(&current);
            if residual <= tol::QUADRATURE_CONVERGENCE {
                return Ok(current);
            }
        }
        previous = Some(current);
    }
    Err(Error::QuadratureFailure {
        max_nodes: cap,
        residual,
    })
}

/// One row of the negativity decay record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySample {
    pub t: f64,
    pub negativity: f64,
    /// `e^{-t gamma / 2}` times the initial negativity, the slowest
    /// possible coherence decay.
    pub bound: f64,
}

/// Spatial negativity along a closed-form trajectory together with the
/// exponential bound `e^{-t gamma / 2} N(rho(0))`. The bound is checked
/// before returning.
pub fn negativity_decay_check(
    rho0: &FockDensityMatrix,
    params: &DephasingParams,
) -> Result<Vec<DecaySample>> {
    let initial = negativity_closed_form(rho0).raw_value;
    let trajectory = evolve_closed_form(rho0, params)?;
    let mut samples = Vec::with_capacity(params.times().len());
    for (t, state) in trajectory.iter() {
        let negativity = negativity_closed_form(state).raw_value;
        let bound = (-t * params.gamma() / 2.0).exp() * initial;
        if negativity > bound + tol::DECAY_BOUND_SLACK {
            return Err(Error::Numeric(format!(
                "negativity {negativity} exceeds its decay bound {bound} at t = {t}"
            )));
        }
        samples.push(DecaySample {
            t,
            negativity,
            bound,
        });
    }
    Ok(samples)
}

/// Matrix element `<k, N-k| rho(t) |l, N-l>` in the energy basis for the
/// initial state `|N, 0>` of the energy modes (the balanced coherent state
/// of the spatial modes).
///
/// The Gaussian average of `z`-rotations turns the initial projector into a
/// mixture of coherent states of the energy modes, giving
///
/// ```text
/// i^{k-l} sqrt(C(N,k) C(N,l)) / sqrt(pi)
///   * int e^{-x^2} cos^{k+l}(theta x) sin^{2N-k-l}(theta x) dx ,
/// theta = sqrt(t gamma / 2)
/// ```
///
/// evaluated by Gauss-Hermite quadrature with node doubling.
pub fn evolved_cd_offdiagonal(
    n_total: usize,
    gamma: f64,
    t: f64,
    k: usize,
    l: usize,
) -> Result<Complex64> {
    if k > n_total {
        return Err(Error::InvalidLabel { k, n_total });
    }
    if l > n_total {
        return Err(Error::InvalidLabel { k: l, n_total });
    }
    if gamma.is_nan() || t.is_nan() || gamma < 0.0 || t < 0.0 {
        return Err(Error::Domain("gamma and t must be non-negative".into()));
    }
    let theta = (t * gamma / 2.0).sqrt();
    let trig_power = |x: f64| -> f64 {
        let c = (theta * x).cos();
        let s = (theta * x).sin();
        c.powi((k + l) as i32) * s.powi((2 * n_total - k - l) as i32)
    };
    let scalar = crate::quadrature::converge_scalar(64, |rule| {
        rule.integrate(trig_power) / core::f64::consts::PI.sqrt()
    })?;
    let amplitude = (binomial(n_total, k) * binomial(n_total, l)).sqrt();
    Ok(ipow(k as i64 - l as i64) * (amplitude * scalar))
}
