//! Measure-and-prepare channels and classical-memory superchannels.

use super::{
    completely_dephasing, compose, identity_channel, swap_channel, tensor, ChoiMatrix,
    QuantumChannel, CPTP_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{identity, kron, BipartiteShape, DensityOperator, HermitianOperator};

/// A POVM together with one preparation per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmEnsemble {
    effects: Vec<HermitianOperator>,
    prep_states: Vec<DensityOperator>,
}

impl PovmEnsemble {
    pub fn new(effects: Vec<HermitianOperator>, prep_states: Vec<DensityOperator>) -> Result<Self> {
        if effects.is_empty() || effects.len() != prep_states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} effects but {} preparations",
                effects.len(),
                prep_states.len()
            )));
        }
        let d = effects[0].dim();
        let dout = prep_states[0].dim();
        if effects.iter().any(|e| e.dim() != d) || prep_states.iter().any(|s| s.dim() != dout) {
            return Err(Error::DimensionMismatch(
                "inconsistent ensemble dimensions".into(),
            ));
        }
        for e in &effects {
            let min = e.min_eigenvalue();
            if min < -CPTP_TOL {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                });
            }
        }
        let sum = effects
            .iter()
            .fold(identity(d).scale(-1.0), |acc, e| acc + e.matrix());
        let deviation = sum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation > CPTP_TOL {
            return Err(Error::IncompletePovm { deviation });
        }
        Ok(Self {
            effects,
            prep_states,
        })
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn prep_states(&self) -> &[DensityOperator] {
        &self.prep_states
    }

    pub fn dim_in(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn dim_out(&self) -> usize {
        self.prep_states[0].dim()
    }
}

/// `ρ ↦ Σ_i Tr[ρ M_i] σ_i`, with Choi state `(1/d) Σ_i M_iᵀ ⊗ σ_i`.
pub fn measure_and_prepare(ensemble: &PovmEnsemble) -> QuantumChannel {
    let shape = BipartiteShape::new(ensemble.dim_in(), ensemble.dim_out());
    let scale = 1.0 / shape.dim_in as f64;
    let j = ensemble
        .effects
        .iter()
        .zip(&ensemble.prep_states)
        .map(|(m, s)| kron(&m.matrix().transpose(), s.matrix()))
        .fold(
            nalgebra::DMatrix::zeros(shape.total(), shape.total()),
            |acc, t| acc + t,
        )
        .scale(scale);
    QuantumChannel::from_choi(ChoiMatrix::from_numeric(shape, &j), "measure_prepare")
}

/// Pre- and post-processing linked by a classical register `E`.
///
/// `pre : B0 → E ⊗ A0`, `post : A1 ⊗ E → B1`. The register is dephased in
/// the computational basis while the channel acts on `A0 → A1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperchannelSpec {
    pub pre: QuantumChannel,
    pub post: QuantumChannel,
    pub dephasing_dim: usize,
}

impl SuperchannelSpec {
    pub fn new(pre: QuantumChannel, post: QuantumChannel, dephasing_dim: usize) -> Result<Self> {
        if dephasing_dim == 0
            || !pre.dim_out().is_multiple_of(dephasing_dim)
            || !post.dim_in().is_multiple_of(dephasing_dim)
        {
            return Err(Error::DimensionMismatch(format!(
                "register dimension {dephasing_dim} does not divide pre output {} and post input {}",
                pre.dim_out(),
                post.dim_in()
            )));
        }
        Ok(Self {
            pre,
            post,
            dephasing_dim,
        })
    }

    /// Identity pre/post-processing with a trivial register.
    pub fn trivial(dim_in: usize, dim_out: usize) -> Self {
        Self {
            pre: identity_channel(dim_in),
            post: identity_channel(dim_out),
            dephasing_dim: 1,
        }
    }

    pub fn channel_dims(&self) -> (usize, usize) {
        (
            self.pre.dim_out() / self.dephasing_dim,
            self.post.dim_in() / self.dephasing_dim,
        )
    }
}

/// `post ∘ swap ∘ (deph_E ⊗ N) ∘ pre`.
pub fn apply_free_superchannel(
    spec: &SuperchannelSpec,
    n: &QuantumChannel,
) -> Result<QuantumChannel> {
    let e = spec.dephasing_dim;
    let (a0, a1) = spec.channel_dims();
    if a0 != n.dim_in() || a1 != n.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "superchannel expects a {a0}→{a1} channel, got {}→{}",
            n.dim_in(),
            n.dim_out()
        )));
    }
    let middle = if e == 1 {
        n.clone()
    } else {
        let inner = tensor(&completely_dephasing(e), n);
        compose(&swap_channel(e, a1), &inner)?
    };
    let out = compose(&spec.post, &compose(&middle, &spec.pre)?)?;
    Ok(out.with_label(format!("Ω[{}]", n.label())))
}
