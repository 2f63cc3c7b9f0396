//! Closed-form reference values and derived bounds.

use serde::{Deserialize, Serialize};

use super::{weight_sdp, WeightOptions};
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticKind {
    Unitary,
    Depolarizing,
    Replacement,
    /// Exact weight `p` of the stochastic damping channel.
    Damping,
    /// `(√(1−2p+5p²)+p−1)/2`, a candidate upper-bound expression for
    /// stochastic damping. It falls below the exact weight `p` for
    /// `0 < p < 1`, so it does not bound the weight from above.
    DampingUpper,
    Erasure,
}

impl AnalyticKind {
    pub fn is_upper_bound(self) -> bool {
        matches!(self, AnalyticKind::DampingUpper)
    }
}

fn unit_interval(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "{what} = {x} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Closed-form weights of the qubit channel families.
pub fn analytic_weight(kind: AnalyticKind, p: f64) -> Result<f64> {
    unit_interval(p, "p")?;
    Ok(match kind {
        AnalyticKind::Unitary => 1.0,
        AnalyticKind::Replacement => 0.0,
        AnalyticKind::Depolarizing => ((3.0 * p - 1.0) / 2.0).max(0.0),
        AnalyticKind::Erasure | AnalyticKind::Damping => p,
        AnalyticKind::DampingUpper => ((1.0 - 2.0 * p + 5.0 * p * p).sqrt() + p - 1.0) / 2.0,
    })
}

/// `s1 + s2 − s1 s2`, an upper bound on the weight of a tensor product.
pub fn tensor_subadditivity_bound(s1: f64, s2: f64) -> Result<f64> {
    unit_interval(s1, "s1")?;
    unit_interval(s2, "s2")?;
    Ok(s1 + s2 - s1 * s2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistillationBound {
    /// `1 − C_w`, the largest entanglement-breaking fraction of the channel.
    pub free_component: f64,
    /// `(1 − F) · free_component` for a caller-supplied fidelity `F`.
    pub epsilon_lower_general: Option<f64>,
    /// `(1 − 1/d) · free_component`.
    pub epsilon_lower_dimensional: f64,
}

impl DistillationBound {
    pub fn from_weight(weight: f64, target_dim: usize, f_u: Option<f64>) -> Result<Self> {
        if target_dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "target dimension {target_dim} must be at least 2"
            )));
        }
        unit_interval(weight, "weight")?;
        if let Some(f) = f_u {
            unit_interval(f, "f_u")?;
        }
        let free_component = 1.0 - weight;
        Ok(Self {
            free_component,
            epsilon_lower_general: f_u.map(|f| (1.0 - f) * free_component),
            epsilon_lower_dimensional: (1.0 - 1.0 / target_dim as f64) * free_component,
        })
    }
}

/// Lower bounds on the error of turning `n` into an ideal `target_dim`
/// dimensional memory with free superchannels.
pub fn distillation_bound(
    n: &QuantumChannel,
    target_dim: usize,
    f_u: Option<f64>,
    opts: WeightOptions,
) -> Result<DistillationBound> {
    if target_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "target dimension {target_dim} must be at least 2"
        )));
    }
    DistillationBound::from_weight(weight_sdp(n, opts)?.value, target_dim, f_u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(
            analytic_weight(AnalyticKind::Depolarizing, 1.0 / 3.0).unwrap(),
            0.0
        );
        assert!((analytic_weight(AnalyticKind::Depolarizing, 0.8).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(analytic_weight(AnalyticKind::Erasure, 1.0).unwrap(), 1.0);
        assert_eq!(
            analytic_weight(AnalyticKind::DampingUpper, 0.0).unwrap(),
            0.0
        );
        assert_eq!(
            analytic_weight(AnalyticKind::DampingUpper, 1.0).unwrap(),
            1.0
        );
        let half = analytic_weight(AnalyticKind::DampingUpper, 0.5).unwrap();
        assert!((half - (1.25_f64.sqrt() - 0.5) / 2.0).abs() < 1e-15);
        assert!(analytic_weight(AnalyticKind::Erasure, -0.1).is_err());
        assert!(analytic_weight(AnalyticKind::Unitary, f64::NAN).is_err());
    }

    #[test]
    fn subadditivity_bound() {
        assert_eq!(tensor_subadditivity_bound(1.0, 0.3).unwrap(), 1.0);
        assert_eq!(tensor_subadditivity_bound(0.0, 0.3).unwrap(), 0.3);
        assert_eq!(tensor_subadditivity_bound(0.5, 0.5).unwrap(), 0.75);
        assert!(tensor_subadditivity_bound(1.5, 0.5).is_err());
    }

    #[test]
    fn distillation_from_weight() {
        let eb = DistillationBound::from_weight(0.0, 2, None).unwrap();
        assert_eq!(eb.epsilon_lower_dimensional, 0.5);
        let id = DistillationBound::from_weight(1.0, 2, Some(0.5)).unwrap();
        assert_eq!(id.epsilon_lower_dimensional, 0.0);
        assert_eq!(id.epsilon_lower_general, Some(0.0));
        let dep = DistillationBound::from_weight(0.25, 2, Some(0.5)).unwrap();
        assert!((dep.epsilon_lower_dimensional - 0.375).abs() < 1e-15);
        assert!((dep.epsilon_lower_general.unwrap() - 0.375).abs() < 1e-15);
        assert!(DistillationBound::from_weight(0.2, 1, None).is_err());
    }
}
