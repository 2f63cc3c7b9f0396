//! Standard channel families.

use nalgebra::DVector;

use super::{c64, ChoiMatrix, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{
    identity, ketbra, kron, max_entangled, BipartiteShape, ComplexMatrix, DensityOperator,
};

fn check_probability(p: f64, what: &str) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "{what} parameter {p} outside [0, 1]"
        )));
    }
    Ok(())
}

pub fn identity_channel(d: usize) -> QuantumChannel {
    QuantumChannel::from_kraus(d, d, vec![identity(d)], "identity").expect("identity is CPTP")
}

pub fn unitary(u: ComplexMatrix) -> Result<QuantumChannel> {
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch("unitary must be square".into()));
    }
    let d = u.nrows();
    QuantumChannel::from_kraus(d, d, vec![u], "unitary")
}

/// `ρ ↦ p ρ + (1 − p) I/d`, stored through its Choi state
/// `p Ψ⁺ + (1 − p) I/d²`.
pub fn depolarizing(d: usize, p: f64) -> Result<QuantumChannel> {
    check_probability(p, "depolarizing")?;
    let n = d * d;
    let j = max_entangled(d).scale(p) + identity(n).scale((1.0 - p) / n as f64);
    Ok(QuantumChannel::from_choi(
        ChoiMatrix::new(BipartiteShape::new(d, d), j)?,
        format!("depolarizing({p})"),
    ))
}

/// Constant channel `ρ ↦ σ`.
pub fn replacement(dim_in: usize, sigma: &DensityOperator) -> QuantumChannel {
    let dim_out = sigma.dim();
    let j = kron(&identity(dim_in).scale(1.0 / dim_in as f64), sigma.matrix());
    QuantumChannel::from_choi(
        ChoiMatrix::from_numeric(BipartiteShape::new(dim_in, dim_out), &j),
        "replacement",
    )
}

/// Replacement by the maximally coherent state `φ⁺ = |+⟩⟨+|`,
/// `|+⟩ = Σ_i |i⟩/√d`. Kraus operators `|+⟩⟨i|`.
pub fn maximal_replacement(dim_in: usize, dim_out: usize) -> QuantumChannel {
    let plus = DVector::from_element(dim_out, c64(1.0 / (dim_out as f64).sqrt()));
    let ops = (0..dim_in)
        .map(|i| {
            let mut k = ComplexMatrix::zeros(dim_out, dim_in);
            k.set_column(i, &plus);
            k
        })
        .collect();
    QuantumChannel::from_kraus(dim_in, dim_out, ops, "maximal_replacement")
        .expect("replacement is CPTP")
}

/// Qubit channel that transmits the input with probability `p` and
/// otherwise resets it to `|0⟩`.
pub fn stochastic_damping(p: f64) -> Result<QuantumChannel> {
    check_probability(p, "damping")?;
    let q = (1.0 - p).sqrt();
    let ops = vec![
        identity(2).scale(p.sqrt()),
        ketbra(2, 0, 0).scale(q),
        ketbra(2, 0, 1).scale(q),
    ];
    QuantumChannel::from_kraus(2, 2, ops, format!("damping({p})"))
}

/// Qubit erasure into a three-level output whose level `|2⟩` flags the
/// erasure.
pub fn erasure(p: f64) -> Result<QuantumChannel> {
    check_probability(p, "erasure")?;
    let mut embed = ComplexMatrix::zeros(3, 2);
    embed[(0, 0)] = c64(1.0);
    embed[(1, 1)] = c64(1.0);
    let q = (1.0 - p).sqrt();
    let mut e0 = ComplexMatrix::zeros(3, 2);
    e0[(2, 0)] = c64(q);
    let mut e1 = ComplexMatrix::zeros(3, 2);
    e1[(2, 1)] = c64(q);
    QuantumChannel::from_kraus(
        2,
        3,
        vec![embed.scale(p.sqrt()), e0, e1],
        format!("erasure({p})"),
    )
}

/// Dephasing in the computational basis.
pub fn completely_dephasing(d: usize) -> QuantumChannel {
    let ops = (0..d).map(|i| ketbra(d, i, i)).collect();
    QuantumChannel::from_kraus(d, d, ops, "dephasing").expect("dephasing is CPTP")
}

/// `A ⊗ B → B ⊗ A`.
pub fn swap_channel(da: usize, db: usize) -> QuantumChannel {
    let n = da * db;
    let mut s = ComplexMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..db {
            s[(b * da + a, a * db + b)] = c64(1.0);
        }
    }
    QuantumChannel::from_kraus(n, n, vec![s], "swap").expect("swap is unitary")
}
