//! Quantum channels, their normalized Choi states, and free superchannels.
//!
//! Choi states are trace-one: `J_N = (id ⊗ N)(Ψ⁺)` with the input system
//! `A0` as the first tensor factor. For a tensor product channel
//! `N1 ⊗ N2 : A0 B0 → A1 B1` the Choi state is ordered `(A0 B0) ⊗ (A1 B1)`.

mod descriptor;
mod superchannel;
mod zoo;

pub use descriptor::{parse_matrix, ChannelDescriptor, ChannelKind, JsonMatrix};
pub use superchannel::{
    apply_free_superchannel, measure_and_prepare, PovmEnsemble, SuperchannelSpec,
};
pub use zoo::{
    completely_dephasing, depolarizing, erasure, identity_channel, maximal_replacement,
    replacement, stochastic_damping, swap_channel, unitary,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, hermitian_part, hermiticity_deviation, identity, is_ppt, kron, min_eigenvalue,
    partial_trace, permute_subsystems, BipartiteShape, ComplexMatrix, DensityOperator,
    HermitianOperator, Side,
};

/// Tolerance for the CPTP conditions (Choi positivity, input marginal, Kraus
/// completeness).
pub const CPTP_TOL: f64 = 1e-9;

/// Normalized Choi state of a channel `A0 → A1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    shape: BipartiteShape,
    operator: HermitianOperator,
}

impl ChoiMatrix {
    /// Validates trace one, positivity and `Tr_out J = I/dim_in`, all to
    /// [`CPTP_TOL`].
    pub fn new(shape: BipartiteShape, m: ComplexMatrix) -> Result<Self> {
        shape.check_square(&m)?;
        let deviation = hermiticity_deviation(&m);
        if deviation > CPTP_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let m = hermitian_part(&m);
        let min = min_eigenvalue(&m);
        if min < -CPTP_TOL {
            return Err(Error::NotCptp(format!(
                "Choi matrix has eigenvalue {min:.3e}"
            )));
        }
        let marginal = partial_trace(&m, shape, Side::Second)?;
        let target = identity(shape.dim_in).unscale(shape.dim_in as f64);
        let dev = (marginal - target)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > CPTP_TOL {
            return Err(Error::NotCptp(format!(
                "input marginal deviates from I/d by {dev:.3e}"
            )));
        }
        Ok(Self {
            shape,
            operator: HermitianOperator::from_hermitian_part(&m),
        })
    }

    /// Wraps a matrix produced by a numerical routine, only symmetrizing it.
    pub(crate) fn from_numeric(shape: BipartiteShape, m: &ComplexMatrix) -> Self {
        Self {
            shape,
            operator: HermitianOperator::from_hermitian_part(m),
        }
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.operator.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn density(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.matrix().clone())
    }

    /// Whether the partial transpose on the input factor is PSD to `tol`.
    pub fn is_ppt(&self, tol: f64) -> bool {
        is_ppt(self.matrix(), self.shape, tol).expect("shape checked at construction")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// Kraus operators, each `dim_out × dim_in`.
    Kraus(Vec<ComplexMatrix>),
    Choi(ChoiMatrix),
}

/// A CPTP map between finite-dimensional systems.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    shape: BipartiteShape,
    repr: Representation,
    label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EbVerdict {
    Yes,
    No,
    /// PPT but in a dimension where PPT does not imply separability.
    Undecided,
}

impl QuantumChannel {
    pub fn from_kraus(
        dim_in: usize,
        dim_out: usize,
        ops: Vec<ComplexMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::NotCptp("empty Kraus list".into()));
        }
        let mut completeness = ComplexMatrix::zeros(dim_in, dim_in);
        for k in &ops {
            if k.nrows() != dim_out || k.ncols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {dim_out}x{dim_in}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            completeness += k.adjoint() * k;
        }
        let dev = (completeness - identity(dim_in))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > CPTP_TOL {
            return Err(Error::NotCptp(format!(
                "Σ K†K deviates from the identity by {dev:.3e}"
            )));
        }
        Ok(Self {
            shape: BipartiteShape::new(dim_in, dim_out),
            repr: Representation::Kraus(ops),
            label: label.into(),
        })
    }

    pub fn from_choi(choi: ChoiMatrix, label: impl Into<String>) -> Self {
        Self {
            shape: choi.shape(),
            repr: Representation::Choi(choi),
            label: label.into(),
        }
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn dim_in(&self) -> usize {
        self.shape.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.shape.dim_out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// Normalized Choi state `(id ⊗ N)(Ψ⁺)`.
    pub fn choi(&self) -> ChoiMatrix {
        match &self.repr {
            Representation::Choi(j) => j.clone(),
            Representation::Kraus(ops) => {
                let (din, dout) = (self.shape.dim_in, self.shape.dim_out);
                let n = din * dout;
                let norm = 1.0 / (din as f64).sqrt();
                let mut j = ComplexMatrix::zeros(n, n);
                for k in ops {
                    // v = Σ_i |i⟩ ⊗ K|i⟩ / √d
                    let v =
                        nalgebra::DVector::from_fn(n, |idx, _| k[(idx % dout, idx / dout)] * norm);
                    j += &v * v.adjoint();
                }
                ChoiMatrix::from_numeric(self.shape, &j)
            }
        }
    }

    /// Kraus operators; derived from the Choi eigendecomposition when the
    /// channel is stored as a Choi matrix.
    pub fn kraus(&self) -> Vec<ComplexMatrix> {
        match &self.repr {
            Representation::Kraus(ops) => ops.clone(),
            Representation::Choi(j) => kraus_from_choi(j),
        }
    }

    /// Linear action on an arbitrary `dim_in × dim_in` operator.
    pub fn apply_operator(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.nrows() != self.shape.dim_in || m.ncols() != self.shape.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input dimension {} but operator is {}x{}",
                self.shape.dim_in,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(match &self.repr {
            Representation::Kraus(ops) => ops.iter().map(|k| k * m * k.adjoint()).sum(),
            Representation::Choi(j) => {
                // N(ρ) = d Tr_A[(ρᵀ ⊗ I) J]
                let lifted = kron(&m.transpose(), &identity(self.shape.dim_out));
                partial_trace(&(lifted * j.matrix()), self.shape, Side::First)?
                    .scale(self.shape.dim_in as f64)
            }
        })
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = hermitian_part(&self.apply_operator(rho.matrix())?);
        DensityOperator::new(out)
    }

    /// Checks positivity and the input marginal of the Choi state.
    pub fn is_cptp(&self) -> bool {
        ChoiMatrix::new(self.shape, self.choi().matrix().clone()).is_ok()
    }

    /// Exact in 2⊗2 and 2⊗3 via the PPT criterion; above that a PPT Choi
    /// state is reported as undecided.
    pub fn is_entanglement_breaking(&self) -> EbVerdict {
        let ppt = self.choi().is_ppt(CPTP_TOL);
        match (ppt, self.shape.ppt_is_exact()) {
            (false, _) => EbVerdict::No,
            (true, true) => EbVerdict::Yes,
            (true, false) => EbVerdict::Undecided,
        }
    }
}

fn kraus_from_choi(j: &ChoiMatrix) -> Vec<ComplexMatrix> {
    let shape = j.shape();
    let (din, dout) = (shape.dim_in, shape.dim_out);
    let eig = eig_hermitian(j.operator());
    let cutoff = 1e-14 * eig.values[0].abs().max(1.0);
    eig.values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cutoff)
        .map(|(k, &l)| {
            let v = eig.vectors.column(k);
            let s = (din as f64 * l).sqrt();
            ComplexMatrix::from_fn(dout, din, |o, i| v[i * dout + o] * s)
        })
        .collect()
}

/// Normalized Choi state of `channel`.
pub fn choi_of(channel: &QuantumChannel) -> ChoiMatrix {
    channel.choi()
}

/// Rebuilds a channel from its Choi state.
pub fn channel_from_choi(j: ChoiMatrix) -> QuantumChannel {
    QuantumChannel::from_choi(j, "choi")
}

/// `N1 ⊗ N2 : A0 B0 → A1 B1`.
pub fn tensor(n1: &QuantumChannel, n2: &QuantumChannel) -> QuantumChannel {
    let k1 = n1.kraus();
    let k2 = n2.kraus();
    let ops = k1
        .iter()
        .flat_map(|a| k2.iter().map(move |b| kron(a, b)))
        .collect();
    QuantumChannel {
        shape: BipartiteShape::new(n1.dim_in() * n2.dim_in(), n1.dim_out() * n2.dim_out()),
        repr: Representation::Kraus(ops),
        label: format!("({})⊗({})", n1.label, n2.label),
    }
}

/// Choi state of `N1 ⊗ N2` assembled from the factors' Choi states:
/// `J1 ⊗ J2` on `A0 A1 B0 B1`, reordered to `A0 B0 A1 B1`.
pub fn tensor_choi(j1: &ChoiMatrix, j2: &ChoiMatrix) -> ChoiMatrix {
    let (s1, s2) = (j1.shape(), j2.shape());
    let dims = [s1.dim_in, s1.dim_out, s2.dim_in, s2.dim_out];
    let m = permute_subsystems(&kron(j1.matrix(), j2.matrix()), &dims, &[0, 2, 1, 3])
        .expect("dimensions are consistent");
    ChoiMatrix::from_numeric(
        BipartiteShape::new(s1.dim_in * s2.dim_in, s1.dim_out * s2.dim_out),
        &m,
    )
}

/// `N2 ∘ N1`.
pub fn compose(n2: &QuantumChannel, n1: &QuantumChannel) -> Result<QuantumChannel> {
    if n1.dim_out() != n2.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose: first channel outputs {} but second takes {}",
            n1.dim_out(),
            n2.dim_in()
        )));
    }
    let k1 = n1.kraus();
    let k2 = n2.kraus();
    let ops = k2
        .iter()
        .flat_map(|b| k1.iter().map(move |a| b * a))
        .collect();
    Ok(QuantumChannel {
        shape: BipartiteShape::new(n1.dim_in(), n2.dim_out()),
        repr: Representation::Kraus(ops),
        label: format!("({})∘({})", n2.label, n1.label),
    })
}

/// Convex combination `p N1 + (1 − p) N2`.
pub fn mix(p: f64, n1: &QuantumChannel, n2: &QuantumChannel) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "mixing weight {p} outside [0, 1]"
        )));
    }
    if n1.shape() != n2.shape() {
        return Err(Error::DimensionMismatch(
            "mixed channels must share dimensions".into(),
        ));
    }
    let j = n1.choi().matrix().scale(p) + n2.choi().matrix().scale(1.0 - p);
    Ok(QuantumChannel::from_choi(
        ChoiMatrix::from_numeric(n1.shape(), &j),
        format!("{p}·({}) + {}·({})", n1.label, 1.0 - p, n2.label),
    ))
}

pub(crate) fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
