use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::head::{activate_evidence, sigmoid};
use crate::losses::{grad_nll_unchecked, grad_reg_unchecked, nll_unchecked, reg_unchecked};
use crate::nig::NigParams;

use super::data::Examples;

const HEADS: usize = 4;

/// `input → tanh(W1·x + b1) → W2·h + b2 → (δ, γ, α, β)`.
///
/// The δ head is linear; the evidence heads go through the same
/// softplus/+1/ε activation as the volume regression head.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyModel {
    input_dim: usize,
    hidden: usize,
    /// hidden × input, row-major
    w1: Vec<f64>,
    b1: Vec<f64>,
    /// 4 × hidden, row-major
    w2: Vec<f64>,
    b2: [f64; HEADS],
}

struct Activations {
    hidden: Vec<f64>,
    logits: [f64; HEADS],
}

impl ToyModel {
    /// Weights uniform in `[−0.5, 0.5] / sqrt(fan_in)`, biases zero.
    pub fn new(input_dim: usize, hidden: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut init = |fan_in: usize, count: usize| -> Vec<f64> {
            let scale = 1.0 / (fan_in.max(1) as f64).sqrt();
            (0..count).map(|_| (rng.random::<f64>() - 0.5) * scale).collect()
        };
        let w1 = init(input_dim, hidden * input_dim);
        let w2 = init(hidden, HEADS * hidden);
        ToyModel { input_dim, hidden, w1, b1: vec![0.0; hidden], w2, b2: [0.0; HEADS] }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn num_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + HEADS
    }

    /// Flattened parameters: W1, b1, W2, b2.
    pub fn params(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.num_params());
        v.extend(&self.w1);
        v.extend(&self.b1);
        v.extend(&self.w2);
        v.extend(self.b2);
        v
    }

    /// Inverse of [`ToyModel::params`]. Panics on a length mismatch.
    pub fn set_params(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.num_params(), "parameter vector length");
        let (w1, rest) = flat.split_at(self.w1.len());
        let (b1, rest) = rest.split_at(self.b1.len());
        let (w2, b2) = rest.split_at(self.w2.len());
        self.w1.copy_from_slice(w1);
        self.b1.copy_from_slice(b1);
        self.w2.copy_from_slice(w2);
        self.b2.copy_from_slice(b2);
    }

    fn forward(&self, input: &[f64]) -> Activations {
        debug_assert_eq!(input.len(), self.input_dim);
        let hidden: Vec<f64> = (0..self.hidden)
            .map(|j| {
                let row = &self.w1[j * self.input_dim..(j + 1) * self.input_dim];
                let a: f64 = row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + self.b1[j];
                a.tanh()
            })
            .collect();
        let mut logits = self.b2;
        for (k, logit) in logits.iter_mut().enumerate() {
            let row = &self.w2[k * self.hidden..(k + 1) * self.hidden];
            *logit += row.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>();
        }
        Activations { hidden, logits }
    }

    fn emit(logits: &[f64; HEADS]) -> NigParams {
        let (gamma, alpha, beta) = activate_evidence(logits[1], logits[2], logits[3]);
        NigParams { delta: logits[0], gamma, alpha, beta }
    }

    pub fn predict(&self, input: &[f64]) -> NigParams {
        Self::emit(&self.forward(input).logits)
    }

    pub fn predict_all(&self, data: &Examples) -> Vec<NigParams> {
        data.inputs.iter().map(|x| self.predict(x)).collect()
    }

    /// Mean evidential loss `L_N + τ·L_R` over `data`.
    pub fn loss(&self, data: &Examples, tau: f64) -> f64 {
        let sum: f64 = data
            .inputs
            .iter()
            .zip(&data.targets)
            .map(|(x, &y)| {
                let p = self.predict(x);
                nll_unchecked(&p, y) + tau * reg_unchecked(&p, y)
            })
            .sum();
        sum / data.len() as f64
    }

    /// Mean loss and its gradient with respect to [`ToyModel::params`].
    pub fn loss_and_grad(&self, data: &Examples, tau: f64) -> (f64, Vec<f64>) {
        let (ni, nh) = (self.input_dim, self.hidden);
        let mut grad = vec![0.0; self.num_params()];
        let (gw1, rest) = grad.split_at_mut(nh * ni);
        let (gb1, rest) = rest.split_at_mut(nh);
        let (gw2, gb2) = rest.split_at_mut(HEADS * nh);
        let mut loss = 0.0;

        for (x, &y) in data.inputs.iter().zip(&data.targets) {
            let act = self.forward(x);
            let p = Self::emit(&act.logits);
            loss += nll_unchecked(&p, y) + tau * reg_unchecked(&p, y);
            let g = grad_nll_unchecked(&p, y) + grad_reg_unchecked(&p, y) * tau;

            // through the head activations
            let dlogits = [
                g.d_delta,
                g.d_gamma * sigmoid(act.logits[1]),
                g.d_alpha * sigmoid(act.logits[2]),
                g.d_beta * sigmoid(act.logits[3]),
            ];
            let mut dhidden = vec![0.0; nh];
            for (k, &dz) in dlogits.iter().enumerate() {
                gb2[k] += dz;
                for j in 0..nh {
                    gw2[k * nh + j] += dz * act.hidden[j];
                    dhidden[j] += dz * self.w2[k * nh + j];
                }
            }
            for j in 0..nh {
                let da = dhidden[j] * (1.0 - act.hidden[j] * act.hidden[j]);
                gb1[j] += da;
                for i in 0..ni {
                    gw1[j * ni + i] += da * x[i];
                }
            }
        }

        let n = data.len() as f64;
        grad.iter_mut().for_each(|g| *g /= n);
        (loss / n, grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_roundtrip() {
        let m = ToyModel::new(2, 5, 3);
        assert_eq!(m.num_params(), 2 * 5 + 5 + 4 * 5 + 4);
        let mut other = ToyModel::new(2, 5, 4);
        other.set_params(&m.params());
        assert_eq!(other, m);
    }

    #[test]
    fn init_is_bounded_and_seeded() {
        let m = ToyModel::new(4, 8, 1);
        assert!(m.w1.iter().all(|w| w.abs() <= 0.25));
        assert!(m.w2.iter().all(|w| w.abs() <= 0.5 / 8f64.sqrt()));
        assert_eq!(m, ToyModel::new(4, 8, 1));
        assert_ne!(m, ToyModel::new(4, 8, 2));
    }

    #[test]
    fn untrained_output_is_valid() {
        let m = ToyModel::new(1, 3, 0);
        for x in [-100.0, -1.0, 0.0, 2.5, 1e6] {
            assert!(m.predict(&[x]).validate().is_ok());
        }
    }
}
