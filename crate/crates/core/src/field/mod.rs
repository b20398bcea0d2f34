//! Grids, field containers, spectral transforms and norms.

pub mod fft;
pub mod grid;
pub mod io;
pub mod multiplier;
pub mod norms;
pub mod plane;
pub mod resonant;
pub mod transform;
pub mod waveguide;

pub use grid::{Axis, Grid2, GridSpec};
pub use multiplier::{eta, lp_project, lp_project_le, resolved_shells, Dealias};
pub use norms::{norm, NormKind, NormReport, Trajectory};
pub use resonant::{ResonantNormKind, ResonantState};
pub use waveguide::{Repr, WaveguideField};
