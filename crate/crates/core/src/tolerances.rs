//! Numerical tolerances used by constructors, backends and checks.
//!
//! Two tiers: `1e-12` for quantities constructed directly from input data,
//! `1e-10` for quantities that pass through a linear-algebra kernel
//! (eigendecomposition, sector unitaries). Looser per-backend tolerances are
//! documented at their point of use.

/// Max `|a_kl - conj(a_lk)|` accepted when constructing a density matrix.
pub const HERMITICITY: f64 = 1e-12;

/// Max `|tr(rho) - 1|` accepted when constructing a density matrix.
pub const UNIT_TRACE: f64 = 1e-12;

/// Most negative eigenvalue accepted as "positive semidefinite".
pub const PSD_FLOOR: f64 = -1e-10;

/// Max deviation from the identity in `M M^dag` for a 2x2 mode mixing.
pub const MIXING_UNITARITY: f64 = 1e-12;

/// Max deviation from the identity in `U U^dag` for a sector unitary.
pub const SECTOR_UNITARITY: f64 = 1e-10;

/// Max deviation from 1 of a pure-state norm.
pub const STATE_NORM: f64 = 1e-12;

/// Max deviation from 1 of a rotation-axis or direction norm.
pub const AXIS_NORM: f64 = 1e-12;

/// Max pairwise dot product in an orthogonal direction triplet.
pub const TRIPLET_ORTHO: f64 = 1e-10;

/// Max `|n1 x n2 - n3|` component for right-handedness.
pub const TRIPLET_HANDEDNESS: f64 = 1e-10;

/// Negativity values above this are reported as genuinely positive;
/// anything within it of zero is clamped to exactly zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-10;

/// Max drift of diagonal entries along a dephasing trajectory.
pub const DIAGONAL_CONSERVATION: f64 = 1e-9;

/// Entrywise difference between consecutive node-doubled quadratures
/// accepted as converged.
pub const QUADRATURE_CONVERGENCE: f64 = 1e-9;

/// Entrywise difference between consecutive step-halved ODE solutions
/// accepted as converged.
pub const ODE_REFINEMENT: f64 = 1e-10;

/// `gamma * N^2 * h` for the initial ODE step size.
pub const ODE_STEP_FACTOR: f64 = 1e-2;

/// Gauss-Hermite node cap for the quadrature backends.
pub const QUADRATURE_NODE_CAP: usize = 512;

/// Smallest `|<J_n3>|` for which the squeezing parameter is defined.
pub const MEAN_SPIN_FLOOR: f64 = 1e-8;

/// Grid minima of the squeezing scan overshoot the true minimum slightly;
/// the no-squeezing premise accepts `min_xi >= 1 - PREMISE_MARGIN`.
pub const PREMISE_MARGIN: f64 = 1e-3;

/// Slack on the no-squeezing bound: it holds when `lhs >= 1 - BOUND_SLACK`.
pub const BOUND_SLACK: f64 = 1e-8;

/// Slack on the negativity decay bound.
pub const DECAY_BOUND_SLACK: f64 = 1e-10;
