//! Memory weight and robustness via semidefinite programming.
//!
//! The separable cone is replaced by the PPT cone. That relaxation is exact
//! whenever `dim_in · dim_out ≤ 6`; above that the computed weight is a
//! certified lower bound and results carry [`Exactness::PptLowerBound`].

mod analytic;
mod bounds;
mod program;

pub use analytic::{
    analytic_weight, distillation_bound, tensor_subadditivity_bound, AnalyticKind,
    DistillationBound,
};
pub use bounds::{
    bound_report, lower_bound_eig, lower_bound_eig_raw, lower_bound_qubit_t,
    weight_robustness_relation, BoundReport, QubitTBound, RelationCheck,
};

use serde::Serialize;

use crate::channel::{ChoiMatrix, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{
    product_basis, BipartiteShape, ComplexMatrix, HermitianOperator, MarginalSubspace, Side,
    SparseHermitian,
};
use program::WeightProgram;

use crate::sdp::{solve, SdpProblem, SdpSolution, SolveStatus, SolverOptions};

/// Largest `dim_in · dim_out` accepted by the SDP builders.
pub const MAX_JOINT_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    PptLowerBound,
}

impl Exactness {
    pub fn for_shape(shape: BipartiteShape) -> Self {
        if shape.ppt_is_exact() {
            Exactness::Exact
        } else {
            Exactness::PptLowerBound
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightOptions {
    /// Require the free part to be the Choi state of a channel
    /// (`Tr_out J_M = I/dim_in`). Disabling it gives the state-level weight.
    pub enforce_marginal: bool,
    pub solver: SolverOptions,
}

impl Default for WeightOptions {
    fn default() -> Self {
        Self {
            enforce_marginal: true,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightResult {
    pub value: f64,
    /// Normalized optimal free part; absent when the weight is one.
    pub free_part: Option<ChoiMatrix>,
    /// Dual witness `W`; `1 − Tr[W J_N]` matches `value` within the gap.
    /// For rank-deficient Choi states the dual optimum may not be attained,
    /// and a witness this close to optimal can have a norm of order 1/gap.
    pub witness: HermitianOperator,
    pub exactness: Exactness,
    pub gap: f64,
    pub status: SolveStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct RobustnessResult {
    pub value: f64,
    /// Normalized mixing Choi state; absent when the robustness is zero.
    pub mixing_state: Option<ChoiMatrix>,
    pub exactness: Exactness,
    pub gap: f64,
    pub status: SolveStatus,
}

fn check_size(shape: BipartiteShape) -> Result<()> {
    if shape.total() > MAX_JOINT_DIM {
        return Err(Error::InvalidParameter(format!(
            "joint dimension {} exceeds {MAX_JOINT_DIM}",
            shape.total()
        )));
    }
    Ok(())
}

fn accept(sol: &SdpSolution) -> Result<()> {
    if sol.is_optimal() {
        return Ok(());
    }
    // A stalled or truncated run is still usable when it sits at the target
    // accuracy of the measures (1e-6) on every criterion.
    let near = sol.gap.abs() <= 1e-7 && sol.primal_residual <= 1e-7 && sol.dual_residual <= 1e-7;
    if near && sol.status != SolveStatus::Infeasible {
        return Ok(());
    }
    Err(Error::Solver {
        status: sol.status,
        gap: sol.gap,
        iterations: sol.iterations,
    })
}

fn combine(basis: &[SparseHermitian], y: &[f64], dim: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (b, &c) in basis.iter().zip(y) {
        b.add_to(&mut out, c);
    }
    crate::linalg::hermitian_part(&out)
}

pub fn weight_sdp(n: &QuantumChannel, opts: WeightOptions) -> Result<WeightResult> {
    weight_of_choi(&n.choi(), opts)
}

/// Memory weight of a Choi state.
pub fn weight_of_choi(j: &ChoiMatrix, opts: WeightOptions) -> Result<WeightResult> {
    let shape = j.shape();
    check_size(shape)?;
    let program = WeightProgram::new(j, opts.enforce_marginal);
    let sol = solve(&program.problem, &opts.solver);
    accept(&sol)?;
    let x = program.free_part(&sol.multipliers);
    let tr_x = x.trace().re;
    let witness = program.witness(&sol);
    // The free part is feasible to solver precision, so 1 − Tr X is an
    // upper bound; the witness certifies it from below within the gap.
    let value = (1.0 - tr_x).clamp(0.0, 1.0);
    let free_part = (tr_x > 1e-9 && value < 1.0 - 1e-9)
        .then(|| ChoiMatrix::from_numeric(shape, &x.unscale(tr_x)));
    Ok(WeightResult {
        value,
        free_part,
        witness,
        exactness: Exactness::for_shape(shape),
        gap: sol.gap,
        status: sol.status,
        iterations: sol.iterations,
    })
}

/// Optimal dual witness `W ⪰ 0` with `C_w(N) = 1 − Tr[W J_N]`.
pub fn weight_dual_witness(n: &QuantumChannel) -> Result<HermitianOperator> {
    Ok(weight_sdp(n, WeightOptions::default())?.witness)
}

/// `min Tr Q` over `Q ⪰ 0` with `Tr_out Q ∝ I` and `(J + Q)^Γ ⪰ 0`; the
/// optimum is the robustness and `Q / Tr Q` the mixing Choi state.
pub fn robustness_sdp(n: &QuantumChannel, solver: SolverOptions) -> Result<RobustnessResult> {
    robustness_of_choi(&n.choi(), solver)
}

pub fn robustness_of_choi(j: &ChoiMatrix, solver: SolverOptions) -> Result<RobustnessResult> {
    let shape = j.shape();
    check_size(shape)?;
    let nn = shape.total();
    let basis = product_basis(shape, MarginalSubspace::UniformMarginal);
    let jt = crate::linalg::partial_transpose(j.matrix(), shape, Side::First)?;
    let mut p = SdpProblem::new(vec![nn, nn]);
    p.set_cost(1, jt);
    for b in &basis {
        let bt = b.partial_transpose(shape, Side::First);
        p.add_constraint(vec![(0, b.scaled(-1.0)), (1, bt.scaled(-1.0))], -b.trace());
    }
    let sol = solve(&p, &solver);
    accept(&sol)?;
    let q = combine(&basis, &sol.multipliers, nn);
    let tr_q = q.trace().re;
    let value = (-sol.objective_value()).max(0.0);
    Ok(RobustnessResult {
        value,
        mixing_state: (tr_q > 1e-9).then(|| ChoiMatrix::from_numeric(shape, &q.unscale(tr_q))),
        exactness: Exactness::for_shape(shape),
        gap: sol.gap,
        status: sol.status,
    })
}

#[cfg(test)]
mod tests;
