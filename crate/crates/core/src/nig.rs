//! Normal-inverse-gamma parameters and the quantities derived from them.
//!
//! A pixel's disparity `d` is modelled as `d ~ N(μ, σ²)` with
//! `μ ~ N(δ, σ²/γ)` and `σ² ~ InvGamma(α, β)`.

use crate::error::DomainError;

/// One pixel's evidential state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NigParams {
    /// Location of the mean, in disparity units.
    pub delta: f64,
    /// Virtual observation count for the mean.
    pub gamma: f64,
    /// Inverse-gamma shape.
    pub alpha: f64,
    /// Inverse-gamma scale, in squared disparity units.
    pub beta: f64,
}

/// Moments of a [`NigParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceSummary {
    /// E[μ] = δ
    pub disparity: f64,
    /// E[σ²] = β / (α − 1)
    pub aleatoric: f64,
    /// Var[μ] = β / (γ (α − 1))
    pub epistemic: f64,
    /// Φ = 2γ + α
    pub evidence: f64,
}

impl NigParams {
    /// Builds a parameter set, rejecting anything outside the NIG domain.
    pub fn new(delta: f64, gamma: f64, alpha: f64, beta: f64) -> Result<Self, DomainError> {
        let p = NigParams { delta, gamma, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    /// Checks `γ > 0`, `α > 1`, `β > 0` and finiteness, in field order.
    ///
    /// The error names the first violated constraint.
    pub fn validate(&self) -> Result<(), DomainError> {
        let fields = [
            ("delta", self.delta, 0.0, "finite"),
            ("gamma", self.gamma, 0.0, "gamma > 0"),
            ("alpha", self.alpha, 1.0, "alpha > 1"),
            ("beta", self.beta, 0.0, "beta > 0"),
        ];
        for (i, (field, value, lower, constraint)) in fields.into_iter().enumerate() {
            if !value.is_finite() {
                return Err(DomainError { field, value, constraint: "finite" });
            }
            // delta is unconstrained
            if i > 0 && value <= lower {
                return Err(DomainError { field, value, constraint });
            }
        }
        Ok(())
    }

    pub fn moments(&self) -> Result<EvidenceSummary, DomainError> {
        self.validate()?;
        Ok(self.moments_unchecked())
    }

    pub(crate) fn moments_unchecked(&self) -> EvidenceSummary {
        let aleatoric = self.beta / (self.alpha - 1.0);
        EvidenceSummary {
            disparity: self.delta,
            aleatoric,
            epistemic: aleatoric / self.gamma,
            evidence: self.total_evidence(),
        }
    }

    /// Φ = 2γ + α.
    pub fn total_evidence(&self) -> f64 {
        2.0 * self.gamma + self.alpha
    }
}
