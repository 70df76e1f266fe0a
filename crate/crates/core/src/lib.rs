//! Simulation of a fixed total number `N` of bosons occupying two modes.
//!
//! States live on the `N + 1`-dimensional sector spanned by the occupation
//! states `|k, N-k>`. The crate provides:
//!
//! * [`fock`] — pure states, density matrices, collective spin operators
//!   (the Schwinger representation of SU(2)) and passive mode-mixing
//!   transformations between bipartitions such as spatial (left/right well)
//!   and energy (symmetric/antisymmetric) modes;
//! * [`entanglement`] — bipartite negativity by partial transposition, both
//!   as a trace norm and in closed form, and the separability test;
//! * [`dephasing`] — the dephasing semigroup generated by `J_z`, solved by
//!   three independent backends (exact closed form, direct integration of
//!   the master equation, and a Gaussian average over `z`-rotations);
//! * [`metrology`] — collective-spin means and variances, the Wineland
//!   squeezing parameter, phase-estimation errors, and their evolution
//!   under dephasing.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded or kernel use. All values are immutable after
//! construction and every operation is a pure function, so states and
//! operators can be shared freely across threads.
//!
//! ```
//! use twomode::entanglement::negativity_closed_form;
//! use twomode::fock::{ModeBipartition, PureState};
//!
//! // the balanced coherent state is entangled for the spatial modes...
//! let rho = PureState::coherent(0.5, 0.0, 4)?.projector();
//! assert!(negativity_closed_form(&rho).value > 1.0);
//!
//! // ...and a single Fock state (hence separable) for the energy modes
//! let energy = rho.change_bipartition(&ModeBipartition::energy())?;
//! assert_eq!(negativity_closed_form(&energy).value, 0.0);
//! # Ok::<(), twomode::Error>(())
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dephasing;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod math;
pub mod metrology;
pub mod quadrature;
pub mod tolerances;

pub use error::{Error, Result};
pub use fock::{CollectiveSpinOps, FockDensityMatrix, FockLabel, ModeBipartition, PureState};
pub use linalg::{CMatrix, Complex64};
