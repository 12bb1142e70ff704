//! Evidential (normal-inverse-gamma) regression for stereo disparity.
//!
//! The crate covers the per-pixel NIG algebra ([`nig`], [`fusion`]), the
//! volume-to-parameters regression head ([`head`]), the evidential losses
//! with analytic gradients ([`losses`]), map containers and file formats
//! ([`maps`], [`io`]), evaluation metrics ([`metrics`]) and a small trainer
//! for synthetic experiments ([`toy`]). The `evidential` binary exposes all
//! of it through [`cli`].

pub mod cli;
pub mod error;
pub mod fusion;
pub mod head;
pub mod io;
pub mod losses;
pub mod maps;
pub mod metrics;
pub mod nig;
pub mod sample;
pub mod special;
pub mod toy;

pub use error::{DomainError, Error, Result};
pub use fusion::{inter_fuse, intra_fuse, monig_fold, nig_sum, FusionTrace};
pub use head::{head_decode, soft_disparity, TrustworthyVolume};
pub use losses::{GradNig, LossWeights};
pub use maps::{decode, DecodedMaps, DisparityMap, EvidentialMap};
pub use metrics::MetricsReport;
pub use nig::{EvidenceSummary, NigParams};
