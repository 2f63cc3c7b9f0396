//! Dense complex linear algebra for bipartite operators.

mod basis;
mod ops;
mod pauli;
mod spectral;

pub use basis::{gell_mann_basis, product_basis, MarginalSubspace, SparseHermitian};
pub use ops::{
    identity, is_ppt, ket, ketbra, kron, max_entangled, partial_trace, partial_transpose,
    permute_subsystems, trace_inner,
};
pub use pauli::{pauli, pauli_correlation, PauliCorrelation};
pub use spectral::{
    eig_hermitian, inv_sqrt_psd, max_eig_trace_bound_check, min_eigenvalue, schmidt_max_overlap,
    EigenDecomposition,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix, row/column semantics as in `nalgebra`.
pub type ComplexMatrix = DMatrix<Complex64>;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;

/// Which tensor factor of a bipartite operator an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// The input system `A0`.
    First,
    /// The output system `A1`.
    Second,
}

/// Dimensions of a bipartite system `A0 ⊗ A1`, input factor first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteShape {
    pub dim_in: usize,
    pub dim_out: usize,
}

impl BipartiteShape {
    pub fn new(dim_in: usize, dim_out: usize) -> Self {
        Self { dim_in, dim_out }
    }

    pub fn total(&self) -> usize {
        self.dim_in * self.dim_out
    }

    /// Whether the PPT criterion decides separability exactly (2⊗2, 2⊗3).
    pub fn ppt_is_exact(&self) -> bool {
        self.total() <= 6
    }

    pub(crate) fn check_square(&self, m: &ComplexMatrix) -> Result<()> {
        let n = self.total();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n} operator for {}⊗{}, got {}x{}",
                self.dim_in,
                self.dim_out,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest entrywise deviation `|m - m†|`.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// A square matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Validates Hermiticity to [`HERMITICITY_TOL`] (relative to the largest
    /// entry) and stores the exactly symmetrized matrix.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        check_finite(&m)?;
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = hermiticity_deviation(&m);
        if deviation > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Takes the Hermitian part without validation.
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Self {
        Self(hermitian_part(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `Tr[self · other]`, real for Hermitian arguments.
    pub fn trace_with(&self, other: &ComplexMatrix) -> f64 {
        trace_inner(&self.0, other)
    }

    pub fn eigen(&self) -> EigenDecomposition {
        eig_hermitian(self)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigen().values[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }
}

/// A positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let h = HermitianOperator::new(m)?;
        let deviation = (h.trace() - 1.0).abs();
        if deviation > TRACE_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        let min_eigenvalue = h.min_eigenvalue();
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self(h))
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector must be normalized to 1e-8.
    pub fn pure(psi: &nalgebra::DVector<Complex64>) -> Result<Self> {
        let deviation = (psi.norm() - 1.0).abs();
        if deviation > 1e-8 {
            return Err(Error::NotNormalized { deviation });
        }
        let psi = psi.unscale(psi.norm());
        Self::new(&psi * psi.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianOperator(identity(dim).unscale(dim as f64)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn hermitian(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0.into_matrix()
    }
}
