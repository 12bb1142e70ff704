//! Evidential losses and their analytic gradients.
//!
//! With residual `r = y − δ` and `Ω = 2β(1 + γ)`, the negative log model
//! evidence of a target under a NIG prediction is
//!
//! ```text
//! L_N = ½ ln(π/γ) − α ln Ω + (α + ½) ln(r²γ + Ω) + ln Γ(α) − ln Γ(α + ½)
//! ```
//!
//! and the evidence regularizer is `L_R = |r| (2γ + α)`.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::maps::{DisparityMap, EvidentialMap};
use crate::nig::NigParams;
use crate::special::{digamma, ln_gamma};

/// Probability clamp used by [`bce_loss`].
pub const BCE_CLAMP: f64 = 1e-7;

/// Regularization weight τ and the four composition weights λ1..λ4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub tau: f64,
    pub lambda: [f64; 4],
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights { tau: 0.5, lambda: [1.0, 2.0, 1.0, 1.0] }
    }
}

impl LossWeights {
    pub fn new(tau: f64, lambda: [f64; 4]) -> Result<Self> {
        let w = LossWeights { tau, lambda };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if std::iter::once(self.tau)
            .chain(self.lambda)
            .any(|v| !v.is_finite() || v < 0.0)
        {
            return Err(Error::BadConfig(format!(
                "loss weights must be finite and nonnegative, got tau={} lambda={:?}",
                self.tau, self.lambda
            )));
        }
        Ok(())
    }
}

/// Partial derivatives with respect to (δ, γ, α, β).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GradNig {
    pub d_delta: f64,
    pub d_gamma: f64,
    pub d_alpha: f64,
    pub d_beta: f64,
}

impl GradNig {
    pub fn as_array(&self) -> [f64; 4] {
        [self.d_delta, self.d_gamma, self.d_alpha, self.d_beta]
    }
}

impl Add for GradNig {
    type Output = GradNig;

    fn add(self, o: GradNig) -> GradNig {
        GradNig {
            d_delta: self.d_delta + o.d_delta,
            d_gamma: self.d_gamma + o.d_gamma,
            d_alpha: self.d_alpha + o.d_alpha,
            d_beta: self.d_beta + o.d_beta,
        }
    }
}

impl Mul<f64> for GradNig {
    type Output = GradNig;

    fn mul(self, s: f64) -> GradNig {
        GradNig {
            d_delta: self.d_delta * s,
            d_gamma: self.d_gamma * s,
            d_alpha: self.d_alpha * s,
            d_beta: self.d_beta * s,
        }
    }
}

fn check(params: &NigParams, y: f64) -> Result<()> {
    params.validate()?;
    if !y.is_finite() {
        return Err(Error::NonFinite("target"));
    }
    Ok(())
}

pub fn nll_loss(params: &NigParams, y: f64) -> Result<f64> {
    check(params, y)?;
    Ok(nll_unchecked(params, y))
}

pub(crate) fn nll_unchecked(p: &NigParams, y: f64) -> f64 {
    let r = y - p.delta;
    let omega = 2.0 * p.beta * (1.0 + p.gamma);
    0.5 * (PI / p.gamma).ln() - p.alpha * omega.ln()
        + (p.alpha + 0.5) * (r * r * p.gamma + omega).ln()
        + ln_gamma(p.alpha)
        - ln_gamma(p.alpha + 0.5)
}

pub fn grad_nll(params: &NigParams, y: f64) -> Result<GradNig> {
    check(params, y)?;
    Ok(grad_nll_unchecked(params, y))
}

pub(crate) fn grad_nll_unchecked(p: &NigParams, y: f64) -> GradNig {
    let r = y - p.delta;
    let omega = 2.0 * p.beta * (1.0 + p.gamma);
    let a = r * r * p.gamma + omega;
    let half_up = p.alpha + 0.5;
    GradNig {
        d_delta: -2.0 * half_up * r * p.gamma / a,
        d_gamma: -0.5 / p.gamma - p.alpha / (1.0 + p.gamma) + half_up * (r * r + 2.0 * p.beta) / a,
        d_alpha: (a / omega).ln() + digamma(p.alpha) - digamma(p.alpha + 0.5),
        d_beta: -p.alpha / p.beta + 2.0 * half_up * (1.0 + p.gamma) / a,
    }
}

pub fn reg_loss(params: &NigParams, y: f64) -> Result<f64> {
    check(params, y)?;
    Ok(reg_unchecked(params, y))
}

pub(crate) fn reg_unchecked(p: &NigParams, y: f64) -> f64 {
    (y - p.delta).abs() * p.total_evidence()
}

/// Subgradient of the regularizer; zero in δ at the kink `y = δ`.
pub fn grad_reg(params: &NigParams, y: f64) -> Result<GradNig> {
    check(params, y)?;
    Ok(grad_reg_unchecked(params, y))
}

pub(crate) fn grad_reg_unchecked(p: &NigParams, y: f64) -> GradNig {
    let r = y - p.delta;
    let sign = if r > 0.0 {
        1.0
    } else if r < 0.0 {
        -1.0
    } else {
        0.0
    };
    GradNig {
        d_delta: -sign * p.total_evidence(),
        d_gamma: 2.0 * r.abs(),
        d_alpha: r.abs(),
        d_beta: 0.0,
    }
}

/// Mean of `L_N + τ·L_R` over the ground-truth-valid pixels, accumulated in
/// row-major order.
pub fn uncertainty_loss(map: &EvidentialMap, gt: &DisparityMap, tau: f64) -> Result<f64> {
    if map.dims() != gt.dims() {
        return Err(Error::shape(map.dims(), gt.dims()));
    }
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::BadConfig(format!("tau must be finite and nonnegative, got {tau}")));
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    for (p, (&y, &valid)) in map.pixels().zip(gt.values().iter().zip(gt.mask())) {
        if valid {
            sum += nll_unchecked(&p, y) + tau * reg_unchecked(&p, y);
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(sum / n as f64)
}

/// Mean binary cross-entropy over `mask`, with probabilities clamped to
/// `[1e-7, 1 − 1e-7]`.
pub fn bce_loss(probs: &[f64], targets: &[f64], mask: &[bool]) -> Result<f64> {
    if probs.len() != targets.len() || probs.len() != mask.len() {
        return Err(Error::shape((probs.len(), 1), (targets.len().min(mask.len()), 1)));
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    for ((&p, &t), &m) in probs.iter().zip(targets).zip(mask) {
        if !m {
            continue;
        }
        if !p.is_finite() || !t.is_finite() {
            return Err(Error::NonFinite("binary cross-entropy input"));
        }
        let p = p.clamp(BCE_CLAMP, 1.0 - BCE_CLAMP);
        sum -= t * p.ln() + (1.0 - t) * (1.0 - p).ln();
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(sum / n as f64)
}

/// The scalar terms combined by [`total_loss`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LossTerms {
    pub uncertainty_local: f64,
    pub uncertainty_global: f64,
    pub uncertainty_fused: f64,
    /// Relative-response term, supplied externally (0 when absent).
    pub relative_response: f64,
    pub binary_entropy: f64,
}

/// `U_local + λ1·U_global + λ2·U_fused + λ3·RR + λ4·BE`.
pub fn total_loss(terms: &LossTerms, w: &LossWeights) -> Result<f64> {
    let t = [
        terms.uncertainty_local,
        terms.uncertainty_global,
        terms.uncertainty_fused,
        terms.relative_response,
        terms.binary_entropy,
    ];
    if t.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("loss term"));
    }
    w.validate()?;
    Ok(t[0] + w.lambda[0] * t[1] + w.lambda[1] * t[2] + w.lambda[2] * t[3] + w.lambda[3] * t[4])
}
