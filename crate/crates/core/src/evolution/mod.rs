//! Time integration of the NLS and of the resonant system, plus symmetries.

pub mod linear;
pub mod nls;
pub mod resonant;
pub mod symmetry;

pub use linear::linear_propagate;
pub use nls::{evolve_nls, step_nls, Evolution, EvolveOptions, NlsObserver, NlsStepper, NlsStepperConfig};
pub use resonant::{evolve_resonant, resonant_rhs, scalar_nls2d_step, step_resonant, ResonantEvolution, ResonantStepper, ResonantStepperConfig};
pub use symmetry::{galilean_boost, rescale_solution};
