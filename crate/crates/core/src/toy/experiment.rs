use std::io::Write;

use crate::error::{Error, Result};
use crate::fusion::nig_sum;
use crate::nig::NigParams;

use super::data::{noise_profile, Dataset, Split, SyntheticKind};
use super::model::ToyModel;
use super::train::{train, TrainConfig, TrainingCurves};

/// Held-out EPE of two experts, their plain average and their NIG fusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionTable {
    pub expert1_epe: f64,
    pub expert2_epe: f64,
    pub avg_epe: f64,
    pub monig_epe: f64,
}

impl FusionTable {
    /// Columns: `expert1_epe,expert2_epe,avg_epe,monig_epe`, one row.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["expert1_epe", "expert2_epe", "avg_epe", "monig_epe"])?;
        w.write_record(
            [self.expert1_epe, self.expert2_epe, self.avg_epe, self.monig_epe].map(|v| v.to_string()),
        )?;
        w.flush()?;
        Ok(())
    }
}

/// Scores two experts' per-sample predictions against `targets`.
pub fn compare_experts(first: &[NigParams], second: &[NigParams], targets: &[f64]) -> Result<FusionTable> {
    if first.len() != targets.len() || second.len() != targets.len() {
        return Err(Error::shape((targets.len(), 1), (first.len().min(second.len()), 1)));
    }
    if targets.is_empty() {
        return Err(Error::EmptyMask);
    }
    let n = targets.len() as f64;
    let (mut e1, mut e2, mut avg, mut fused) = (0.0, 0.0, 0.0, 0.0);
    for ((a, b), &y) in first.iter().zip(second).zip(targets) {
        e1 += (a.delta - y).abs();
        e2 += (b.delta - y).abs();
        avg += (0.5 * (a.delta + b.delta) - y).abs();
        fused += (nig_sum(a, b)?.delta - y).abs();
    }
    Ok(FusionTable { expert1_epe: e1 / n, expert2_epe: e2 / n, avg_epe: avg / n, monig_epe: fused / n })
}

/// Experts that report their own observation with the true noise level:
/// δ = view, γ = 1/σ², and α = 2, β = σ² so that the aleatoric term is σ².
pub fn oracle_experts(dataset: &Dataset, split: Split) -> Result<[Vec<NigParams>; 2]> {
    require_two_region(dataset)?;
    let expert = |view: usize| -> Result<Vec<NigParams>> {
        dataset
            .points(split)
            .iter()
            .map(|p| {
                let sigma = noise_profile(dataset.kind, dataset.noise_sigma, p.x, view);
                let var = sigma * sigma;
                Ok(NigParams::new(p.views[view], 1.0 / var, 2.0, var)?)
            })
            .collect()
    };
    Ok([expert(0)?, expert(1)?])
}

fn require_two_region(dataset: &Dataset) -> Result<()> {
    if dataset.kind != SyntheticKind::TwoRegion {
        return Err(Error::BadConfig("fusion experiment needs a two-region dataset".into()));
    }
    if dataset.noise_sigma <= 0.0 {
        return Err(Error::BadConfig("fusion experiment needs positive noise".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub hidden: usize,
    pub train: TrainConfig,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { hidden: 16, train: TrainConfig::default(), seed: 7 }
    }
}

#[derive(Debug, Clone)]
pub struct FusionOutcome {
    pub table: FusionTable,
    pub experts: [ToyModel; 2],
    pub curves: [TrainingCurves; 2],
}

/// Trains one expert per observation view and compares them on the held-out
/// split.
pub fn fusion_experiment(dataset: &Dataset, config: &ExperimentConfig) -> Result<FusionOutcome> {
    require_two_region(dataset)?;
    let mut experts = Vec::with_capacity(2);
    let mut curves = Vec::with_capacity(2);
    let mut preds = Vec::with_capacity(2);
    for view in 0..2 {
        let train_set = dataset.examples(Split::Train, Some(view))?;
        let heldout = dataset.examples(Split::Heldout, Some(view))?;
        let init = ToyModel::new(train_set.input_dim(), config.hidden, expert_seed(config.seed, view));
        let (model, c) = train(init, &train_set, &heldout, &config.train)?;
        preds.push(model.predict_all(&heldout));
        experts.push(model);
        curves.push(c);
    }
    let targets: Vec<f64> = dataset.heldout.iter().map(|p| p.y).collect();
    let table = compare_experts(&preds[0], &preds[1], &targets)?;
    let [e1, e2]: [ToyModel; 2] = experts.try_into().expect("two experts");
    let [c1, c2]: [TrainingCurves; 2] = curves.try_into().expect("two curves");
    Ok(FusionOutcome { table, experts: [e1, e2], curves: [c1, c2] })
}

fn expert_seed(seed: u64, view: usize) -> u64 {
    seed.wrapping_mul(2).wrapping_add(view as u64)
}
