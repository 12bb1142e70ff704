use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sample::standard_normal;

/// Minimum dataset size accepted by [`make_synthetic`].
pub const MIN_SAMPLES: usize = 16;

/// Fraction of samples held out for evaluation.
const HELDOUT_FRACTION: f64 = 0.25;

/// Noise scale used when none is configured.
pub const DEFAULT_NOISE: f64 = 0.5;

/// Ratio between the quiet and the noisy observation channel in `two-region`.
pub const LOW_NOISE_RATIO: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// `y = sin(3x) + ε` with noise growing linearly from left to right.
    Smooth1d,
    /// Latent targets observed through two noisy views whose quality swaps
    /// at `x = 0`.
    TwoRegion,
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth-1d" => Ok(SyntheticKind::Smooth1d),
            "two-region" => Ok(SyntheticKind::TwoRegion),
            other => Err(Error::BadConfig(format!("unknown dataset kind {other:?}"))),
        }
    }
}

impl SyntheticKind {
    pub fn name(&self) -> &'static str {
        match self {
            SyntheticKind::Smooth1d => "smooth-1d",
            SyntheticKind::TwoRegion => "two-region",
        }
    }

    pub fn default_noise(&self) -> f64 {
        DEFAULT_NOISE
    }
}

/// One generated sample. `views` holds the two noisy observations of `y` in
/// the `two-region` kind and is empty otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub views: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Heldout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub kind: SyntheticKind,
    pub noise_sigma: f64,
    pub train: Vec<Point>,
    pub heldout: Vec<Point>,
}

/// Model inputs and regression targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Examples {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl Examples {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }
}

impl Dataset {
    pub fn points(&self, split: Split) -> &[Point] {
        match split {
            Split::Train => &self.train,
            Split::Heldout => &self.heldout,
        }
    }

    /// Inputs for a model. `view` selects which observation an expert sees in
    /// `two-region` (`[x, view]`); `smooth-1d` models see `[x]`.
    pub fn examples(&self, split: Split, view: Option<usize>) -> Result<Examples> {
        let points = self.points(split);
        let inputs = points
            .iter()
            .map(|p| match view {
                None => Ok(vec![p.x]),
                Some(k) => p
                    .views
                    .get(k)
                    .map(|&z| vec![p.x, z])
                    .ok_or_else(|| Error::BadConfig(format!("dataset has no view {k}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Examples { inputs, targets: points.iter().map(|p| p.y).collect() })
    }
}

/// Noise standard deviation at `x`: for `smooth-1d` the single channel, for
/// `two-region` the `view` channel.
pub fn noise_profile(kind: SyntheticKind, noise_sigma: f64, x: f64, view: usize) -> f64 {
    match kind {
        SyntheticKind::Smooth1d => noise_sigma * (0.1 + 0.45 * (x + 1.0)),
        SyntheticKind::TwoRegion => {
            let quiet = (x < 0.0) == (view == 0);
            if quiet {
                noise_sigma * LOW_NOISE_RATIO
            } else {
                noise_sigma
            }
        }
    }
}

pub fn make_synthetic(kind: SyntheticKind, n: usize, noise_sigma: f64, seed: u64) -> Result<Dataset> {
    if n < MIN_SAMPLES {
        return Err(Error::BadConfig(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    if !noise_sigma.is_finite() || noise_sigma < 0.0 {
        return Err(Error::BadConfig(format!("noise sigma must be nonnegative, got {noise_sigma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point> = (0..n)
        .map(|_| {
            let x = 2.0 * rng.random::<f64>() - 1.0;
            let curve = (3.0 * x).sin();
            match kind {
                SyntheticKind::Smooth1d => {
                    let eps = noise_profile(kind, noise_sigma, x, 0) * standard_normal(&mut rng);
                    Point { x, y: curve + eps, views: Vec::new() }
                }
                SyntheticKind::TwoRegion => {
                    let y = curve + standard_normal(&mut rng);
                    let views = (0..2)
                        .map(|k| y + noise_profile(kind, noise_sigma, x, k) * standard_normal(&mut rng))
                        .collect();
                    Point { x, y, views }
                }
            }
        })
        .collect();
    points.shuffle(&mut rng);
    let n_heldout = ((n as f64) * HELDOUT_FRACTION).round() as usize;
    let heldout = points.split_off(n - n_heldout);
    Ok(Dataset { kind, noise_sigma, train: points, heldout })
}
