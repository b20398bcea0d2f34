//! Profile families and the approximation experiments built on them.

pub mod euclidean;
pub mod experiment;
pub mod frame;
pub mod large_scale;

pub use euclidean::{euclidean_grid, euclidean_profile, EuclideanProfileSpec};
pub use experiment::{euclidean_approximation_experiment, ls_approximation_experiment, EuclideanExperimentConfig, ExperimentRow, LsExperimentConfig};
pub use frame::{frame_apply, frame_apply_inverse, FrameElement};
pub use large_scale::{large_scale_profile, reconstruct_from_resonant, stretched_grid, LargeScaleProfileSpec};
