//! Conserved quantities, the virial action, the Strichartz probe and
//! scattering extraction.

pub mod conserved;
pub mod scattering;
pub mod strichartz;
pub mod virial;

pub use conserved::{conserved_set, ConservedSet, DiagnosticsRecord};
pub use scattering::{resonant_scattering_extract, scattering_extract};
pub use strichartz::{strichartz_exponent, strichartz_quotient, StrichartzProbeConfig, StrichartzRecord};
pub use virial::{momentum_identity_residual, virial_action, virial_bound, VirialConfig, VIRIAL_BOUND_CONSTANT};
