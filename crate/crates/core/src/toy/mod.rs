//! Desk-scale evidential regression experiments.
//!
//! A one-hidden-layer tanh network emits NIG parameters per input and is
//! trained by full-batch gradient descent on the pixel-averaged evidential
//! loss. Two such experts, each reliable on a different half of the input
//! range, are then fused with [`crate::fusion::nig_sum`].

mod data;
mod experiment;
mod model;
mod train;

pub use data::{make_synthetic, noise_profile, Dataset, DEFAULT_NOISE, Examples, Point, Split, SyntheticKind};
pub use experiment::{
    compare_experts, fusion_experiment, oracle_experts, ExperimentConfig, FusionOutcome,
    FusionTable,
};
pub use model::ToyModel;
pub use train::{error_aleatoric_correlation, train, EpochRecord, TrainConfig, TrainingCurves};
