//! Collective-spin metrology: means, variances, squeezing, and what
//! dephasing noise does to them.
//!
//! A phase `theta` imprinted by `e^{-i theta J_n1}` and read out through
//! `J_n2` is estimated with mean square error
//! `delta^2 theta = Delta^2 J_n2 / <J_n3>^2 = xi_W^2 / N` for a right-handed
//! orthogonal triplet `(n1, n2, n3)`, where
//! `xi_W^2 = N Delta^2 J_n2 / <J_n3>^2` is the squeezing parameter.
//! `xi_W^2 = 1` is the shot-noise limit; smaller values beat it.
//!
//! Under dephasing the evolved means and variances are Gaussian averages of
//! rotated directions, `n(u, t) = R_z(u sqrt(t gamma / 2)) n`. For initial
//! states with no squeezing along any direction pair, the averaged quantity
//! `N Delta_t^2 J_n2 / <J_n3>_t^2` never drops below one: the noise can
//! entangle, but it cannot squeeze.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;

use crate::dephasing::{evolve_closed_form, DephasingParams};
use crate::error::{Error, Result};
use crate::fock::{CollectiveSpinOps, FockDensityMatrix};
use crate::linalg::{CMatrix, Complex64};
use crate::quadrature::{converge_scalar, GaussHermite};
use crate::tolerances as tol;

/// Default Gauss-Hermite node count for evolved means and variances.
pub const DEFAULT_QUADRATURE_NODES: usize = 64;

/// Scan resolution used when an operation validates the no-squeezing
/// premise internally.
pub const PREMISE_SCAN_RESOLUTION: usize = 12;

/// A right-handed orthonormal triplet of directions: rotation axis `n1`,
/// readout axis `n2`, mean-spin axis `n3 = n1 x n2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionTriplet {
    n1: [f64; 3],
    n2: [f64; 3],
    n3: [f64; 3],
}

impl DirectionTriplet {
    pub fn new(n1: [f64; 3], n2: [f64; 3], n3: [f64; 3]) -> Result<Self> {
        for (name, v) in [("n1", &n1), ("n2", &n2), ("n3", &n3)] {
            let norm_dev = (norm(v) - 1.0).abs();
            if norm_dev > tol::AXIS_NORM {
                return Err(Error::Domain(format!(
                    "{name} deviates from unit norm by {norm_dev:.3e}"
                )));
            }
        }
        for (pair, d) in [
            ("n1.n2", dot(&n1, &n2)),
            ("n1.n3", dot(&n1, &n3)),
            ("n2.n3", dot(&n2, &n3)),
        ] {
            if d.abs() > tol::TRIPLET_ORTHO {
                return Err(Error::Domain(format!("{pair} = {d:.3e}, not orthogonal")));
            }
        }
        let c = cross(&n1, &n2);
        let handedness =
            ((c[0] - n3[0]).powi(2) + (c[1] - n3[1]).powi(2) + (c[2] - n3[2]).powi(2)).sqrt();
        if handedness > tol::TRIPLET_HANDEDNESS {
            return Err(Error::Domain(format!(
                "triplet is not right-handed: |n1 x n2 - n3| = {handedness:.3e}"
            )));
        }
        Ok(Self { n1, n2, n3 })
    }

    /// Complete a triplet from orthonormal readout and mean-spin axes;
    /// `n1 = n2 x n3`.
    pub fn from_pair(n2: [f64; 3], n3: [f64; 3]) -> Result<Self> {
        Self::new(cross(&n2, &n3), n2, n3)
    }

    /// The coordinate triplet `(x, y, z)`.
    pub fn standard() -> Self {
        Self {
            n1: [1.0, 0.0, 0.0],
            n2: [0.0, 1.0, 0.0],
            n3: [0.0, 0.0, 1.0],
        }
    }

    pub fn n1(&self) -> [f64; 3] {
        self.n1
    }

    pub fn n2(&self) -> [f64; 3] {
        self.n2
    }

    pub fn n3(&self) -> [f64; 3] {
        self.n3
    }
}

/// Squeezing parameter and phase error of a state for a given triplet.
#[derive(Debug, Clone)]
pub struct SqueezingReport {
    /// `N Delta^2 J_n2 / <J_n3>^2`.
    pub xi_w_squared: f64,
    /// `xi_W^2 / N`, the phase-estimation mean square error.
    pub delta_theta_squared: f64,
    pub triplet: DirectionTriplet,
    pub mean_n3: f64,
    pub variance_n2: f64,
}

/// Result of the Heisenberg uncertainty check
/// `Delta^2 J_n1 Delta^2 J_n2 >= <J_n3>^2 / 4`.
#[derive(Debug, Clone, Copy)]
pub struct HeisenbergCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Result of the no-squeezing bound check
/// `N Delta_t^2 J_n2 / <J_n3>_t^2 >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct ConvexityBound {
    pub lhs: f64,
    pub holds: bool,
}

/// Outcome of scanning `xi_W^2` over a direction grid.
#[derive(Debug, Clone)]
pub struct SqueezingScan {
    pub min_xi: f64,
    pub argmin: DirectionTriplet,
}

/// One record of a no-squeezing sweep over times and triplets.
#[derive(Debug, Clone)]
pub struct SweepSample {
    pub t: f64,
    pub triplet: DirectionTriplet,
    /// `xi_W^2` of the closed-form evolved state (direct route).
    pub xi_w_squared: f64,
    /// `xi_W^2 / N` of the evolved state.
    pub delta_theta_squared: f64,
    /// `N Delta_t^2 J_n2 / <J_n3>_t^2` by Gaussian quadrature (dual route).
    pub bound_lhs: f64,
}

/// First and second spin moments of a state; every mean and variance along
/// any direction is a quadratic form in these.
struct SpinMoments {
    n_total: usize,
    first: [f64; 3],
    second: [[Complex64; 3]; 3],
}

impl SpinMoments {
    fn new(rho: &FockDensityMatrix) -> Result<Self> {
        let ops = CollectiveSpinOps::new(rho.n_total())?;
        let js = [ops.jx(), ops.jy(), ops.jz()];
        let mut first = [0.0; 3];
        let mut second = [[Complex64::new(0.0, 0.0); 3]; 3];
        for a in 0..3 {
            first[a] = trace_product(rho.entries(), js[a]).re;
            for b in 0..3 {
                second[a][b] = trace_product(rho.entries(), &js[a].dot(js[b]));
            }
        }
        Ok(Self {
            n_total: rho.n_total(),
            first,
            second,
        })
    }

    fn mean(&self, n: &[f64; 3]) -> f64 {
        dot(&self.first, n)
    }

    fn second_moment(&self, n: &[f64; 3]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..3 {
            for b in 0..3 {
                acc += self.second[a][b] * (n[a] * n[b]);
            }
        }
        acc.re
    }

    fn variance(&self, n: &[f64; 3]) -> f64 {
        let v = self.second_moment(n) - self.mean(n).powi(2);
        if v.abs() <= 1e-10 {
            0.0
        } else {
            v.max(0.0)
        }
    }
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
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

fn require_unit(n: &[f64; 3]) -> Result<()> {
    let dev = (norm(n) - 1.0).abs();
    if dev > tol::AXIS_NORM {
        return Err(Error::Domain(format!(
            "direction deviates from unit norm by {dev:.3e}"
        )));
    }
    Ok(())
}

/// `<J_n> = tr(rho J_n)` along a unit direction.
pub fn spin_mean(rho: &FockDensityMatrix, n: [f64; 3]) -> Result<f64> {
    require_spatial(rho)?;
    require_unit(&n)?;
    Ok(SpinMoments::new(rho)?.mean(&n))
}

/// `Delta^2 J_n = <J_n^2> - <J_n>^2`, clamped to zero within rounding.
pub fn spin_variance(rho: &FockDensityMatrix, n: [f64; 3]) -> Result<f64> {
    require_spatial(rho)?;
    require_unit(&n)?;
    Ok(SpinMoments::new(rho)?.variance(&n))
}

/// Heisenberg uncertainty relation for a triplet.
pub fn heisenberg_check(
    rho: &FockDensityMatrix,
    triplet: &DirectionTriplet,
) -> Result<HeisenbergCheck> {
    require_spatial(rho)?;
    let moments = SpinMoments::new(rho)?;
    let lhs = moments.variance(&triplet.n1) * moments.variance(&triplet.n2);
    let rhs = moments.mean(&triplet.n3).powi(2) / 4.0;
    Ok(HeisenbergCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-10,
    })
}

/// Squeezing parameter `xi_W^2 = N Delta^2 J_n2 / <J_n3>^2` and the phase
/// error it implies. Fails when the mean spin along `n3` vanishes.
pub fn squeezing_parameter(
    rho: &FockDensityMatrix,
    triplet: &DirectionTriplet,
) -> Result<SqueezingReport> {
    require_spatial(rho)?;
    let moments = SpinMoments::new(rho)?;
    report_from_moments(&moments, triplet)
}

fn report_from_moments(
    moments: &SpinMoments,
    triplet: &DirectionTriplet,
) -> Result<SqueezingReport> {
    let mean_n3 = moments.mean(&triplet.n3);
    if mean_n3.abs() <= tol::MEAN_SPIN_FLOOR {
        return Err(Error::UndefinedSqueezing { mean: mean_n3 });
    }
    let variance_n2 = moments.variance(&triplet.n2);
    let n = moments.n_total as f64;
    let xi_w_squared = n * variance_n2 / (mean_n3 * mean_n3);
    Ok(SqueezingReport {
        xi_w_squared,
        delta_theta_squared: xi_w_squared / n,
        triplet: *triplet,
        mean_n3,
        variance_n2,
    })
}

/// The rotation `R_z(angle)` acting on direction vectors:
/// rows `(cos, sin, 0)`, `(-sin, cos, 0)`, `(0, 0, 1)`.
pub fn rotation_about_z(angle: f64) -> [[f64; 3]; 3] {
    let (s, c) = angle.sin_cos();
    [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]
}

/// `R_z(angle) n`.
pub fn rotated_direction(n: [f64; 3], angle: f64) -> [f64; 3] {
    let r = rotation_about_z(angle);
    [
        r[0][0] * n[0] + r[0][1] * n[1] + r[0][2] * n[2],
        r[1][0] * n[0] + r[1][1] * n[1] + r[1][2] * n[2],
        r[2][0] * n[0] + r[2][1] * n[1] + r[2][2] * n[2],
    ]
}

/// Memoized ladder of Gauss-Hermite rules; sweeps reuse the rules across
/// thousands of convergence loops instead of rebuilding them.
struct RuleLadder {
    rules: Vec<GaussHermite>,
}

impl RuleLadder {
    fn new() -> Self {
        Self { rules: Vec::new() }
    }

    fn get(&mut self, n: usize) -> Result<&GaussHermite> {
        if let Some(i) = self.rules.iter().position(|r| r.len() == n) {
            return Ok(&self.rules[i]);
        }
        self.rules.push(GaussHermite::new(n)?);
        Ok(self.rules.last().expect("just pushed"))
    }

    /// Node doubling until two consecutive results agree within
    /// [`tol::QUADRATURE_CONVERGENCE`], reusing cached rules.
    fn converge(&mut self, start_nodes: usize, eval: impl Fn(&GaussHermite) -> f64) -> Result<f64> {
        let cap = tol::QUADRATURE_NODE_CAP;
        let mut n = start_nodes.min(cap);
        let mut previous: Option<f64> = None;
        let mut residual = f64::INFINITY;
        loop {
            let current = eval(self.get(n)?);
            if let Some(prev) = previous {
                residual = (prev - current).abs();
                if residual <= tol::QUADRATURE_CONVERGENCE {
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
}

fn evolved_mean_with(
    moments: &SpinMoments,
    ladder: &mut RuleLadder,
    n: &[f64; 3],
    theta: f64,
    nodes: usize,
) -> Result<f64> {
    let sqrt_pi = core::f64::consts::PI.sqrt();
    ladder.converge(nodes, |rule| {
        rule.integrate(|x| moments.mean(&rotated_direction(*n, 2.0 * x * theta))) / sqrt_pi
    })
}

fn evolved_variance_with(
    moments: &SpinMoments,
    ladder: &mut RuleLadder,
    n: &[f64; 3],
    theta: f64,
    nodes: usize,
) -> Result<f64> {
    let sqrt_pi = core::f64::consts::PI.sqrt();
    let second = ladder.converge(nodes, |rule| {
        rule.integrate(|x| moments.second_moment(&rotated_direction(*n, 2.0 * x * theta))) / sqrt_pi
    })?;
    let mean = evolved_mean_with(moments, ladder, n, theta, nodes)?;
    let v = second - mean * mean;
    Ok(if v.abs() <= 1e-10 { 0.0 } else { v.max(0.0) })
}

/// `<J_n>_t` as the Gaussian average of `tr(rho_0 J_{n(u,t)})` with
/// `n(u, t) = R_z(u sqrt(t gamma / 2)) n`, by Gauss-Hermite quadrature with
/// node doubling starting at `nodes`.
pub fn evolved_spin_mean(
    rho0: &FockDensityMatrix,
    n: [f64; 3],
    gamma: f64,
    t: f64,
    nodes: usize,
) -> Result<f64> {
    require_spatial(rho0)?;
    require_unit(&n)?;
    check_noise_args(gamma, t, nodes)?;
    let moments = SpinMoments::new(rho0)?;
    let theta = (t * gamma / 2.0).sqrt();
    evolved_mean_with(&moments, &mut RuleLadder::new(), &n, theta, nodes)
}

/// `Delta_t^2 J_n = <J_n^2>_t - <J_n>_t^2` with both moments computed as
/// Gaussian averages over rotated directions.
pub fn evolved_spin_variance(
    rho0: &FockDensityMatrix,
    n: [f64; 3],
    gamma: f64,
    t: f64,
    nodes: usize,
) -> Result<f64> {
    require_spatial(rho0)?;
    require_unit(&n)?;
    check_noise_args(gamma, t, nodes)?;
    let moments = SpinMoments::new(rho0)?;
    let theta = (t * gamma / 2.0).sqrt();
    evolved_variance_with(&moments, &mut RuleLadder::new(), &n, theta, nodes)
}

/// Gaussian average of the instantaneous variance,
/// `(1/2 sqrt(pi)) int du e^{-u^2/4} Delta^2 J_{n(u,t)}`. By convexity this
/// never exceeds [`evolved_spin_variance`].
pub fn gaussian_averaged_variance(
    rho0: &FockDensityMatrix,
    n: [f64; 3],
    gamma: f64,
    t: f64,
    nodes: usize,
) -> Result<f64> {
    require_spatial(rho0)?;
    require_unit(&n)?;
    check_noise_args(gamma, t, nodes)?;
    let moments = SpinMoments::new(rho0)?;
    let theta = (t * gamma / 2.0).sqrt();
    converge_scalar(nodes, |rule| {
        rule.integrate(|x| moments.variance(&rotated_direction(n, 2.0 * x * theta)))
            / core::f64::consts::PI.sqrt()
    })
}

fn check_noise_args(gamma: f64, t: f64, nodes: usize) -> Result<()> {
    if gamma.is_nan() || t.is_nan() || gamma < 0.0 || t < 0.0 {
        return Err(Error::Domain("gamma and t must be non-negative".into()));
    }
    if nodes < 8 {
        return Err(Error::Domain(format!("nodes = {nodes} must be at least 8")));
    }
    Ok(())
}

/// No-squeezing bound at a single time: validates the premise (the initial
/// state has `xi_W^2 >= 1` for every direction pair on the scan grid), then
/// checks `N Delta_t^2 J_n2 / <J_n3>_t^2 >= 1`.
pub fn convexity_bound_check(
    rho0: &FockDensityMatrix,
    triplet: &DirectionTriplet,
    gamma: f64,
    t: f64,
) -> Result<ConvexityBound> {
    let scan = min_squeezing_scan(rho0, PREMISE_SCAN_RESOLUTION)?;
    if scan.min_xi < 1.0 - tol::PREMISE_MARGIN {
        return Err(Error::PremiseViolation {
            min_xi: scan.min_xi,
        });
    }
    bound_at(rho0, triplet, gamma, t, DEFAULT_QUADRATURE_NODES)
}

fn bound_at(
    rho0: &FockDensityMatrix,
    triplet: &DirectionTriplet,
    gamma: f64,
    t: f64,
    nodes: usize,
) -> Result<ConvexityBound> {
    let moments = SpinMoments::new(rho0)?;
    let theta = (t * gamma / 2.0).sqrt();
    bound_with(&moments, &mut RuleLadder::new(), triplet, theta, nodes)
}

fn bound_with(
    moments: &SpinMoments,
    ladder: &mut RuleLadder,
    triplet: &DirectionTriplet,
    theta: f64,
    nodes: usize,
) -> Result<ConvexityBound> {
    let mean3 = evolved_mean_with(moments, ladder, &triplet.n3, theta, nodes)?;
    if mean3.abs() <= tol::MEAN_SPIN_FLOOR {
        return Err(Error::UndefinedSqueezing { mean: mean3 });
    }
    let var2 = evolved_variance_with(moments, ladder, &triplet.n2, theta, nodes)?;
    let lhs = moments.n_total as f64 * var2 / (mean3 * mean3);
    Ok(ConvexityBound {
        lhs,
        holds: lhs >= 1.0 - tol::BOUND_SLACK,
    })
}

/// Minimize `xi_W^2` over a deterministic direction grid: `resolution^2`
/// Fibonacci-sphere points for `n3` (those with a usable mean spin) and
/// `resolution` angles for `n2` in the orthogonal plane.
pub fn min_squeezing_scan(
    rho: &FockDensityMatrix,
    grid_resolution: usize,
) -> Result<SqueezingScan> {
    require_spatial(rho)?;
    if grid_resolution < 8 {
        return Err(Error::Domain(format!(
            "grid_resolution = {grid_resolution} must be at least 8"
        )));
    }
    let moments = SpinMoments::new(rho)?;
    let mut best: Option<(f64, DirectionTriplet)> = None;
    for n3 in fibonacci_sphere(grid_resolution * grid_resolution) {
        if moments.mean(&n3).abs() <= tol::MEAN_SPIN_FLOOR {
            continue;
        }
        let (u, v) = orthogonal_plane_basis(&n3);
        for j in 0..grid_resolution {
            let angle = 2.0 * core::f64::consts::PI * j as f64 / grid_resolution as f64;
            let (s, c) = angle.sin_cos();
            let n2 = [
                c * u[0] + s * v[0],
                c * u[1] + s * v[1],
                c * u[2] + s * v[2],
            ];
            let triplet = DirectionTriplet::from_pair(n2, n3)?;
            let report = report_from_moments(&moments, &triplet)?;
            if best.as_ref().is_none_or(|(m, _)| report.xi_w_squared < *m) {
                best = Some((report.xi_w_squared, triplet));
            }
        }
    }
    match best {
        Some((min_xi, argmin)) => Ok(SqueezingScan { min_xi, argmin }),
        None => Err(Error::UndefinedSqueezing { mean: 0.0 }),
    }
}

/// No-squeezing sweep over a time grid and a triplet grid. The premise is
/// validated once; triplets whose evolved mean spin vanishes at some time
/// are skipped at that time.
pub fn convexity_bound_sweep(
    rho0: &FockDensityMatrix,
    params: &DephasingParams,
    triplets: &[DirectionTriplet],
    nodes: usize,
) -> Result<Vec<SweepSample>> {
    let scan = min_squeezing_scan(rho0, PREMISE_SCAN_RESOLUTION)?;
    if scan.min_xi < 1.0 - tol::PREMISE_MARGIN {
        return Err(Error::PremiseViolation {
            min_xi: scan.min_xi,
        });
    }
    let trajectory = evolve_closed_form(rho0, params)?;
    let initial_moments = SpinMoments::new(rho0)?;
    let mut ladder = RuleLadder::new();
    let mut samples = Vec::new();
    for (t, state) in trajectory.iter() {
        let evolved_moments = SpinMoments::new(state)?;
        let theta = (t * params.gamma() / 2.0).sqrt();
        for triplet in triplets {
            let direct = match report_from_moments(&evolved_moments, triplet) {
                Ok(r) => r,
                Err(Error::UndefinedSqueezing { .. }) => continue,
                Err(e) => return Err(e),
            };
            let bound = match bound_with(&initial_moments, &mut ladder, triplet, theta, nodes) {
                Ok(b) => b,
                Err(Error::UndefinedSqueezing { .. }) => continue,
                Err(e) => return Err(e),
            };
            samples.push(SweepSample {
                t,
                triplet: *triplet,
                xi_w_squared: direct.xi_w_squared,
                delta_theta_squared: direct.delta_theta_squared,
                bound_lhs: bound.lhs,
            });
        }
    }
    Ok(samples)
}

/// Deterministic triplet grid: Fibonacci-sphere `n3` directions times
/// `angles` readout orientations each.
pub fn direction_triplet_grid(n3_count: usize, angles: usize) -> Vec<DirectionTriplet> {
    let mut out = Vec::with_capacity(n3_count * angles);
    for n3 in fibonacci_sphere(n3_count) {
        let (u, v) = orthogonal_plane_basis(&n3);
        for j in 0..angles {
            let angle = 2.0 * core::f64::consts::PI * j as f64 / angles as f64;
            let (s, c) = angle.sin_cos();
            let n2 = [
                c * u[0] + s * v[0],
                c * u[1] + s * v[1],
                c * u[2] + s * v[2],
            ];
            out.push(
                DirectionTriplet::from_pair(n2, n3)
                    .expect("grid directions are orthonormal by construction"),
            );
        }
    }
    out
}

fn fibonacci_sphere(count: usize) -> impl Iterator<Item = [f64; 3]> {
    let golden = core::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..count).map(move |i| {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden * i as f64;
        [r * phi.cos(), r * phi.sin(), z]
    })
}

/// Deterministic orthonormal basis of the plane orthogonal to `n3`:
/// Gram-Schmidt of the coordinate axis least aligned with `n3`, then the
/// cross product. `(u, v, n3)` is right-handed.
fn orthogonal_plane_basis(n3: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let axis = if n3[0].abs() <= n3[1].abs() && n3[0].abs() <= n3[2].abs() {
        [1.0, 0.0, 0.0]
    } else if n3[1].abs() <= n3[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let d = dot(&axis, n3);
    let mut u = [
        axis[0] - d * n3[0],
        axis[1] - d * n3[1],
        axis[2] - d * n3[2],
    ];
    let nu = norm(&u);
    u = [u[0] / nu, u[1] / nu, u[2] / nu];
    let v = cross(n3, &u);
    (u, v)
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}
