//! Small dense semidefinite programs over complex Hermitian blocks.
//!
//! Problems are posed in the standard primal form
//!
//! ```text
//! minimize    Σ_k ⟨C_k, X_k⟩
//! subject to  Σ_k ⟨A_ik, X_k⟩ = b_i      for every constraint i
//!             X_k ⪰ 0                    for every block k
//! ```
//!
//! with dual
//!
//! ```text
//! maximize    bᵀy
//! subject to  Z_k = C_k − Σ_i y_i A_ik ⪰ 0.
//! ```
//!
//! Free (unsigned) matrix variables are modeled by parameterizing them with
//! the dual vector `y`, which is how the weight and robustness programs in
//! this crate are built.

mod ipm;

pub use ipm::solve;

use crate::linalg::{ComplexMatrix, SparseHermitian};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 500;

/// One linear equality `Σ_k ⟨A_k, X_k⟩ = rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub terms: Vec<(usize, SparseHermitian)>,
    pub rhs: f64,
}

/// A standard-form SDP. Every block is constrained to the PSD cone.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    /// Hermitian cost matrix per block.
    pub cost: Vec<ComplexMatrix>,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new(block_dims: Vec<usize>) -> Self {
        let cost = block_dims
            .iter()
            .map(|&n| ComplexMatrix::zeros(n, n))
            .collect();
        Self {
            block_dims,
            cost,
            constraints: Vec::new(),
        }
    }

    pub fn set_cost(&mut self, block: usize, c: ComplexMatrix) {
        assert_eq!(c.nrows(), self.block_dims[block]);
        self.cost[block] = c;
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, SparseHermitian)>, rhs: f64) {
        for (k, a) in &terms {
            assert_eq!(a.dim, self.block_dims[*k], "constraint term dimension");
        }
        self.constraints.push(Constraint { terms, rhs });
    }

    /// Total scalar entries across blocks.
    pub fn scalar_size(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// A certificate of primal or dual infeasibility was found.
    Infeasible,
    /// The iteration cap was reached; the best iterate is returned.
    MaxIter,
    /// Progress stopped (step lengths collapsed or the Schur system became
    /// numerically singular); the best iterate is returned.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SolveStatus,
    /// Primal blocks `X_k`.
    pub primal: Vec<ComplexMatrix>,
    /// Dual slack blocks `Z_k`.
    pub dual_slack: Vec<ComplexMatrix>,
    /// Dual multipliers `y`, one per constraint.
    pub multipliers: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|primal − dual| / (1 + |primal| + |dual|)`.
    pub gap: f64,
    /// `‖b − A(X)‖ / (1 + ‖b‖)`.
    pub primal_residual: f64,
    /// `‖C − Z − A*(y)‖ / (1 + ‖C‖)`.
    pub dual_residual: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Midpoint of the primal and dual objectives.
    pub fn objective_value(&self) -> f64 {
        0.5 * (self.primal_objective + self.dual_objective)
    }
}
