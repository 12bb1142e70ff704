//! Trustworthy regression: a 4-channel candidate-disparity volume to NIG maps.
//!
//! Per pixel, `p = softmax(V_δ[·])`, `δ = Σ_k k·p_k` and for each evidence
//! channel `logit_i = Σ_k V_i[k]·p_k`, followed by softplus. α gets an extra
//! `+1` so that it always lands above one.

use crate::error::{Error, Result};
use crate::maps::EvidentialMap;
use crate::nig::NigParams;

/// Positivity floor added after softplus.
pub const EVIDENCE_EPSILON: f64 = 1e-6;

/// Numerically stable `ln(1 + e^z)`.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Derivative of [`softplus`].
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Maps raw evidence logits to (γ, α, β).
pub fn activate_evidence(logit_gamma: f64, logit_alpha: f64, logit_beta: f64) -> (f64, f64, f64) {
    (
        softplus(logit_gamma) + EVIDENCE_EPSILON,
        softplus(logit_alpha) + 1.0 + EVIDENCE_EPSILON,
        softplus(logit_beta) + EVIDENCE_EPSILON,
    )
}

/// Softmax expectation over disparity levels. Returns δ and the probabilities.
pub fn soft_disparity(logits: &[f64]) -> Result<(f64, Vec<f64>)> {
    if logits.is_empty() {
        return Err(Error::EmptyInput("soft_disparity needs at least one level"));
    }
    if logits.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("disparity logits"));
    }
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = logits.iter().map(|v| (v - max).exp()).collect();
    let z: f64 = probs.iter().sum();
    let mut delta = 0.0;
    for (k, p) in probs.iter_mut().enumerate() {
        *p /= z;
        delta += k as f64 * *p;
    }
    Ok((delta, probs))
}

/// Channel order inside a [`TrustworthyVolume`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Delta = 0,
    Gamma = 1,
    Alpha = 2,
    Beta = 3,
}

/// `D_max × H × W × 4` logits. Each channel plane is stored level-major,
/// then row-major: index `k·H·W + y·W + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustworthyVolume {
    width: usize,
    height: usize,
    dmax: usize,
    planes: [Vec<f64>; 4],
}

impl TrustworthyVolume {
    pub fn new(width: usize, height: usize, dmax: usize, planes: [Vec<f64>; 4]) -> Result<Self> {
        if dmax == 0 {
            return Err(Error::EmptyInput("volume needs at least one disparity level"));
        }
        let len = width * height * dmax;
        for plane in &planes {
            if plane.len() != len {
                return Err(Error::shape((width * height, dmax), (plane.len(), 1)));
            }
            if plane.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("trustworthy volume"));
            }
        }
        Ok(TrustworthyVolume { width, height, dmax, planes })
    }

    /// Builds a volume from `f(channel, k, x, y)`.
    pub fn from_fn<F>(width: usize, height: usize, dmax: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(Channel, usize, usize, usize) -> f64,
    {
        let channels = [Channel::Delta, Channel::Gamma, Channel::Alpha, Channel::Beta];
        let planes = channels.map(|c| {
            let mut plane = Vec::with_capacity(width * height * dmax);
            for k in 0..dmax {
                for y in 0..height {
                    for x in 0..width {
                        plane.push(f(c, k, x, y));
                    }
                }
            }
            plane
        });
        Self::new(width, height, dmax, planes)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    pub fn plane(&self, channel: Channel) -> &[f64] {
        &self.planes[channel as usize]
    }

    /// The `dmax` values of one channel at one pixel.
    pub fn column(&self, channel: Channel, x: usize, y: usize) -> Vec<f64> {
        let stride = self.width * self.height;
        let base = y * self.width + x;
        let plane = self.plane(channel);
        (0..self.dmax).map(|k| plane[k * stride + base]).collect()
    }

    fn decode_pixel(&self, x: usize, y: usize) -> Result<NigParams> {
        let (delta, probs) = soft_disparity(&self.column(Channel::Delta, x, y))?;
        let expect = |c: Channel| -> f64 {
            self.column(c, x, y).iter().zip(&probs).map(|(v, p)| v * p).sum()
        };
        let (gamma, alpha, beta) =
            activate_evidence(expect(Channel::Gamma), expect(Channel::Alpha), expect(Channel::Beta));
        let p = NigParams { delta, gamma, alpha, beta };
        p.validate().map_err(|e| Error::at_pixel(e, x, y))?;
        Ok(p)
    }
}

/// Decodes every pixel of the volume into NIG parameters.
pub fn head_decode(volume: &TrustworthyVolume) -> Result<EvidentialMap> {
    EvidentialMap::par_from_rows(volume.width, volume.height, |y| {
        (0..volume.width).map(|x| volume.decode_pixel(x, y)).collect()
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_logits() {
        let (delta, probs) = soft_disparity(&[0.0, 0.0]).unwrap();
        assert_eq!(probs, vec![0.5, 0.5]);
        assert_eq!(delta, 0.5);
    }

    #[test]
    fn dominant_logit() {
        let (delta, _) = soft_disparity(&[0.0, 50.0, 0.0]).unwrap();
        assert!((delta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn extended_precision_expectation() {
        // mpmath, tests/oracles/frozen_values.py
        let (delta, probs) = soft_disparity(&[1.0, 0.5, -0.3, 2.1]).unwrap();
        assert!((delta - 2.081_428_785_511_809_286_2).abs() < 1e-14);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_logits() {
        assert!(matches!(soft_disparity(&[]), Err(Error::EmptyInput(_))));
        assert!(matches!(soft_disparity(&[0.0, f64::NAN]), Err(Error::NonFinite(_))));
        assert!(matches!(soft_disparity(&[f64::INFINITY]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn overflow_safe() {
        let (delta, probs) = soft_disparity(&[1000.0, 1000.0, -1000.0]).unwrap();
        assert_eq!(delta, 0.5);
        assert_eq!(probs[2], 0.0);
    }

    #[test]
    fn softplus_values() {
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-16);
        assert_eq!(softplus(800.0), 800.0);
        assert!(softplus(-800.0) >= 0.0);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn constant_evidence_channel_passes_through() {
        let c = 0.37;
        let vol = TrustworthyVolume::from_fn(2, 1, 5, |ch, k, x, _| match ch {
            Channel::Delta => (k * 3 + x) as f64 * 0.41 - 1.0,
            Channel::Gamma => c,
            _ => 0.0,
        })
        .unwrap();
        let map = head_decode(&vol).unwrap();
        for p in map.pixels() {
            assert!((p.gamma - (softplus(c) + EVIDENCE_EPSILON)).abs() < 1e-15);
            assert!((p.alpha - (std::f64::consts::LN_2 + 1.0 + EVIDENCE_EPSILON)).abs() < 1e-15);
        }
    }

    #[test]
    fn saturated_logits_still_validate() {
        let vol = TrustworthyVolume::from_fn(1, 1, 2, |ch, _, _, _| match ch {
            Channel::Delta => 0.0,
            _ => -1e6,
        })
        .unwrap();
        let p = head_decode(&vol).unwrap().get(0, 0);
        assert_eq!(p.gamma, EVIDENCE_EPSILON);
        assert!(p.alpha > 1.0);
    }

    #[test]
    fn volume_shape_checks() {
        assert!(matches!(
            TrustworthyVolume::new(1, 1, 0, Default::default()),
            Err(Error::EmptyInput(_))
        ));
        let planes = [vec![0.0; 4], vec![0.0; 4], vec![0.0; 4], vec![0.0; 3]];
        assert!(matches!(TrustworthyVolume::new(2, 1, 2, planes), Err(Error::ShapeMismatch { .. })));
        let planes = [vec![0.0; 2], vec![f64::NAN; 2], vec![0.0; 2], vec![0.0; 2]];
        assert!(matches!(TrustworthyVolume::new(1, 1, 2, planes), Err(Error::NonFinite(_))));
    }

    fn logits() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-30.0..30.0f64, 1..12)
    }

    proptest! {
        #[test]
        fn shift_invariant(v in logits(), c in -100.0..100.0f64) {
            let (a, _) = soft_disparity(&v).unwrap();
            let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
            let (b, _) = soft_disparity(&shifted).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn raising_a_level_moves_delta_toward_it(v in logits(), k in 0usize..12, bump in 0.0..5.0f64) {
            let k = k % v.len();
            let (before, _) = soft_disparity(&v).unwrap();
            let mut raised = v.clone();
            raised[k] += bump;
            let (after, _) = soft_disparity(&raised).unwrap();
            let kf = k as f64;
            prop_assert!((after - kf).abs() <= (before - kf).abs() + 1e-9);
        }

        #[test]
        fn probabilities_are_normalised_and_keep_argmax(v in logits()) {
            let (delta, probs) = soft_disparity(&v).unwrap();
            prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(delta >= 0.0 && delta <= (v.len() - 1) as f64);
            let arg = |xs: &[f64]| {
                xs.iter().enumerate().fold(0, |best, (i, x)| if *x > xs[best] { i } else { best })
            };
            prop_assert_eq!(probs[arg(&v)], probs.iter().copied().fold(0.0, f64::max));
        }
    }
}
