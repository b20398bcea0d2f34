//! Spectral simulation lab for the defocusing cubic NLS on R² × T² and
//! its cubic resonant system.
//!
//! The crate is organized bottom-up:
//!
//! - [`lattice`]: exact integer combinatorics of the resonance set.
//! - [`field`]: grids, fields, transforms, Littlewood–Paley shells, norms.
//! - [`evolution`]: linear flow, split-step NLS, the resonant stepper, symmetries.
//! - [`profiles`]: Euclidean and large-scale profiles, frames, approximation experiments.
//! - [`diagnostics`]: conserved quantities, Virial action, Strichartz and scattering probes.
//! - [`runner`]: JSON-configured scenarios, manifests and reports behind the `wglab` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod field;
pub mod lattice;
pub mod par;
pub mod profiles;
pub mod runner;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
