//! Spectral lower bounds on the memory weight.

use serde::Serialize;

use super::{robustness_sdp, weight_sdp, Exactness, WeightOptions};
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::pauli_correlation;

/// `(d λ_max(J_N) − 1)/(d² − 1)` without clamping.
pub fn lower_bound_eig_raw(n: &QuantumChannel) -> f64 {
    let d = n.dim_in() as f64;
    if n.dim_in() < 2 {
        return 0.0;
    }
    let lmax = n.choi().operator().max_eigenvalue();
    (d * lmax - 1.0) / (d * d - 1.0)
}

pub fn lower_bound_eig(n: &QuantumChannel) -> f64 {
    lower_bound_eig_raw(n).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitTBound {
    /// Unclamped ratio; `+∞` when the correlation spectrum is degenerate and
    /// the numerator is positive.
    pub raw: f64,
    pub clamped: f64,
    pub numerator: f64,
    /// `|λ1 λ2 λ3|` for the eigenvalues of `T = SᵀS`.
    pub spectrum_product: f64,
}

/// `(2 λ_max(J_N) − 1)/|λ1 λ2 λ3|^{1/8}` for qubit channels, where the `λ_i`
/// are the eigenvalues of `SᵀS` and `s_ij = Tr[J_N σ_i ⊗ σ_j]`.
pub fn lower_bound_qubit_t(n: &QuantumChannel) -> Result<QubitTBound> {
    if n.dim_in() != 2 || n.dim_out() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "qubit bound needs a 2→2 channel, got {}→{}",
            n.dim_in(),
            n.dim_out()
        )));
    }
    let j = n.choi();
    let corr = pauli_correlation(&j.density()?)?;
    let s = corr.correlations;
    let t = s.transpose() * s;
    let product = t.symmetric_eigenvalues().iter().product::<f64>().abs();
    let numerator = 2.0 * j.operator().max_eigenvalue() - 1.0;
    let (raw, clamped) = if product < 1e-12 {
        if numerator > 0.0 {
            (f64::INFINITY, 1.0)
        } else {
            (
                if numerator < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    0.0
                },
                0.0,
            )
        }
    } else {
        let r = numerator / product.powf(0.125);
        (r, r.clamp(0.0, 1.0))
    };
    Ok(QubitTBound {
        raw,
        clamped,
        numerator,
        spectrum_product: product,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationCheck {
    /// Memory weight.
    pub lhs: f64,
    /// Robustness divided by `d² − 1`.
    pub rhs: f64,
    pub holds: bool,
}

impl RelationCheck {
    pub fn new(weight: f64, robustness: f64, dim_in: usize) -> Self {
        let denom = (dim_in * dim_in).saturating_sub(1).max(1) as f64;
        let rhs = robustness / denom;
        Self {
            lhs: weight,
            rhs,
            holds: weight >= rhs - 1e-6,
        }
    }
}

/// Checks `C_w ≥ C_r/(d² − 1)`.
pub fn weight_robustness_relation(
    n: &QuantumChannel,
    opts: WeightOptions,
) -> Result<RelationCheck> {
    let w = weight_sdp(n, opts)?;
    let r = robustness_sdp(n, opts.solver)?;
    Ok(RelationCheck::new(w.value, r.value, n.dim_in()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub eig_lower: f64,
    pub eig_lower_raw: f64,
    pub qubit_t_lower: Option<f64>,
    pub qubit_t_raw: Option<f64>,
    pub robustness: f64,
    pub robustness_relation_lower: f64,
    pub analytic_value: Option<f64>,
    pub sdp_value: f64,
    pub exactness: Exactness,
}

impl BoundReport {
    /// Whether the eigenvalue and robustness bounds sit below the SDP value.
    /// Only meaningful when the SDP value is exact. The qubit correlation
    /// bound is left out: it exceeds the weight for depolarizing channels
    /// (`(3p−1)/(2p^{3/4}) > (3p−1)/2` for `1/3 < p < 1`).
    pub fn consistent(&self, tol: f64) -> bool {
        let below = |b: f64| b <= self.sdp_value + tol;
        self.exactness != Exactness::Exact
            || (below(self.eig_lower) && below(self.robustness_relation_lower))
    }
}

pub fn bound_report(
    n: &QuantumChannel,
    analytic_value: Option<f64>,
    opts: WeightOptions,
) -> Result<BoundReport> {
    let w = weight_sdp(n, opts)?;
    let r = robustness_sdp(n, opts.solver)?;
    let qt = if n.dim_in() == 2 && n.dim_out() == 2 {
        Some(lower_bound_qubit_t(n)?)
    } else {
        None
    };
    Ok(BoundReport {
        eig_lower: lower_bound_eig(n),
        eig_lower_raw: lower_bound_eig_raw(n),
        qubit_t_lower: qt.map(|b| b.clamped),
        qubit_t_raw: qt.map(|b| b.raw),
        robustness: r.value,
        robustness_relation_lower: RelationCheck::new(w.value, r.value, n.dim_in()).rhs,
        analytic_value,
        sdp_value: w.value,
        exactness: w.exactness,
    })
}
