use std::io::Write;

use crate::error::{Error, Result};
use crate::metrics::pearson_slices;

use super::data::Examples;
use super::model::ToyModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub tau: f64,
    pub lr: f64,
    pub epochs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { tau: 0.5, lr: 0.05, epochs: 300 }
    }
}

/// Statistics of one epoch, taken at the parameters the epoch started from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub mean_aleatoric: f64,
    pub mean_epistemic: f64,
    pub heldout_epe: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingCurves {
    pub records: Vec<EpochRecord>,
}

impl TrainingCurves {
    /// Columns: `epoch,loss,mean_al,mean_ep,heldout_epe`.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["epoch", "loss", "mean_al", "mean_ep", "heldout_epe"])?;
        for r in &self.records {
            w.write_record([
                r.epoch.to_string(),
                r.loss.to_string(),
                r.mean_aleatoric.to_string(),
                r.mean_epistemic.to_string(),
                r.heldout_epe.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Mean of `f` over the epochs in `range` (clamped to the recorded span).
    pub fn window_mean(&self, range: std::ops::Range<usize>, f: impl Fn(&EpochRecord) -> f64) -> f64 {
        let end = range.end.min(self.records.len());
        let slice = &self.records[range.start.min(end)..end];
        slice.iter().map(f).sum::<f64>() / slice.len() as f64
    }
}

/// Full-batch gradient descent on the evidential loss.
pub fn train(
    mut model: ToyModel,
    data: &Examples,
    heldout: &Examples,
    config: &TrainConfig,
) -> Result<(ToyModel, TrainingCurves)> {
    // lr = 0 is accepted and freezes the model
    if !(config.lr.is_finite() && config.lr >= 0.0) {
        return Err(Error::BadConfig(format!("learning rate must be nonnegative, got {}", config.lr)));
    }
    if !config.tau.is_finite() || config.tau < 0.0 {
        return Err(Error::BadConfig(format!("tau must be nonnegative, got {}", config.tau)));
    }
    if data.is_empty() || heldout.is_empty() {
        return Err(Error::BadConfig("training and held-out sets must be nonempty".into()));
    }
    for set in [data, heldout] {
        if set.inputs.iter().any(|x| x.len() != model.input_dim()) {
            return Err(Error::BadConfig(format!("inputs must have dimension {}", model.input_dim())));
        }
    }

    let mut curves = TrainingCurves::default();
    for epoch in 1..=config.epochs {
        let (loss, grad) = model.loss_and_grad(data, config.tau);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence { epoch, loss });
        }
        let (mut al, mut ep) = (0.0, 0.0);
        for p in model.predict_all(data) {
            let m = p.moments_unchecked();
            al += m.aleatoric;
            ep += m.epistemic;
        }
        let n = data.len() as f64;
        curves.records.push(EpochRecord {
            epoch,
            loss,
            mean_aleatoric: al / n,
            mean_epistemic: ep / n,
            heldout_epe: heldout_epe(&model, heldout),
        });

        let updated: Vec<f64> = model
            .params()
            .iter()
            .zip(&grad)
            .map(|(w, g)| w - config.lr * g)
            .collect();
        if updated.iter().any(|w| !w.is_finite()) {
            return Err(Error::Divergence { epoch, loss: f64::NAN });
        }
        model.set_params(&updated);
    }
    Ok((model, curves))
}

pub(crate) fn heldout_epe(model: &ToyModel, heldout: &Examples) -> f64 {
    let sum: f64 = heldout
        .inputs
        .iter()
        .zip(&heldout.targets)
        .map(|(x, y)| (model.predict(x).delta - y).abs())
        .sum();
    sum / heldout.len() as f64
}

/// Pearson r between `|δ − y|` and the aleatoric uncertainty on `data`.
pub fn error_aleatoric_correlation(model: &ToyModel, data: &Examples) -> Result<f64> {
    let preds = model.predict_all(data);
    let errors: Vec<f64> = preds.iter().zip(&data.targets).map(|(p, y)| (p.delta - y).abs()).collect();
    let al: Vec<f64> = preds.iter().map(|p| p.moments_unchecked().aleatoric).collect();
    pearson_slices(&errors, &al)
}
