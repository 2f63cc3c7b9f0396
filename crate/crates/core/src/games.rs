//! Nonlocal exclusion games and their payoffs.
//!
//! A game `({σ_i}, {O_j}, {α_ij})` pays `Σ α_ij Tr[N(σ_i) O_j]` on a channel
//! `N`. The same number is `Tr[J_N W]` for the game operator
//! `W = d Σ α_ij σ_iᵀ ⊗ O_j`, which is how games meet the weight program:
//! its dual witnesses are game operators.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::channel::{parse_matrix, ChoiMatrix, JsonMatrix, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{
    gell_mann_basis, identity, kron, min_eigenvalue, product_basis, trace_inner, BipartiteShape,
    ComplexMatrix, DensityOperator, HermitianOperator, MarginalSubspace, Side,
};
use crate::sdp::{solve, SdpProblem, SolverOptions};
use crate::weight::{weight_sdp, WeightOptions};

/// Slack on the `min_M Tr[J_M W] ≥ 1` membership test.
pub const CLASSICAL_SET_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Game {
    input_states: Vec<DensityOperator>,
    observables: Vec<HermitianOperator>,
    coefficients: DMatrix<f64>,
}

impl Game {
    pub fn new(
        input_states: Vec<DensityOperator>,
        observables: Vec<HermitianOperator>,
        coefficients: DMatrix<f64>,
    ) -> Result<Self> {
        if input_states.is_empty() || observables.is_empty() {
            return Err(Error::InvalidParameter(
                "a game needs at least one state and one observable".into(),
            ));
        }
        let din = input_states[0].dim();
        let dout = observables[0].dim();
        if input_states.iter().any(|s| s.dim() != din) {
            return Err(Error::DimensionMismatch(
                "input states differ in dimension".into(),
            ));
        }
        if observables.iter().any(|o| o.dim() != dout) {
            return Err(Error::DimensionMismatch(
                "observables differ in dimension".into(),
            ));
        }
        if coefficients.shape() != (input_states.len(), observables.len()) {
            return Err(Error::DimensionMismatch(format!(
                "coefficients are {}x{}, expected {}x{}",
                coefficients.nrows(),
                coefficients.ncols(),
                input_states.len(),
                observables.len()
            )));
        }
        if coefficients.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            input_states,
            observables,
            coefficients,
        })
    }

    pub fn input_states(&self) -> &[DensityOperator] {
        &self.input_states
    }

    pub fn observables(&self) -> &[HermitianOperator] {
        &self.observables
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coefficients
    }

    pub fn dim_in(&self) -> usize {
        self.input_states[0].dim()
    }

    pub fn dim_out(&self) -> usize {
        self.observables[0].dim()
    }

    pub fn shape(&self) -> BipartiteShape {
        BipartiteShape::new(self.dim_in(), self.dim_out())
    }

    /// Canonical game realizing a given operator `W`.
    ///
    /// `W` is expanded as `Σ w_ab G_aᵀ ⊗ H_b` over Gell-Mann bases. Each
    /// traceless `G_a` is shifted to a state `σ_a = (G_a + s_a I)/(s_a d)` and
    /// `σ_0 = I/d`; the observables are the `H_b` themselves and the shifts
    /// are absorbed into the `σ_0` row of `α`. Many games share one operator;
    /// only payoffs are meaningful.
    pub fn from_operator(w: &HermitianOperator, shape: BipartiteShape) -> Result<Self> {
        if w.dim() != shape.total() {
            return Err(Error::DimensionMismatch(format!(
                "operator has dimension {}, shape needs {}",
                w.dim(),
                shape.total()
            )));
        }
        let d = shape.dim_in as f64;
        let gin: Vec<ComplexMatrix> = gell_mann_basis(shape.dim_in)
            .iter()
            .map(|g| g.to_dense())
            .collect();
        let hout: Vec<ComplexMatrix> = gell_mann_basis(shape.dim_out)
            .iter()
            .map(|h| h.to_dense())
            .collect();

        let mut states = vec![DensityOperator::maximally_mixed(shape.dim_in)];
        let mut shifts = vec![0.0];
        for g in gin.iter().skip(1) {
            let s = -min_eigenvalue(g);
            let sigma = (g + identity(shape.dim_in).scale(s)).unscale(s * d);
            states.push(DensityOperator::new(crate::linalg::hermitian_part(&sigma))?);
            shifts.push(s);
        }

        let mut alpha = DMatrix::<f64>::zeros(gin.len(), hout.len());
        for (a, g) in gin.iter().enumerate() {
            let gt = g.transpose();
            for (b, h) in hout.iter().enumerate() {
                let wab = trace_inner(&kron(&gt, h), w.matrix());
                if a == 0 {
                    alpha[(0, b)] += wab / d.sqrt();
                } else {
                    alpha[(a, b)] += wab * shifts[a];
                    alpha[(0, b)] -= wab * shifts[a];
                }
            }
        }
        let observables = hout
            .iter()
            .map(|h| HermitianOperator::new(h.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states, observables, alpha)
    }
}

/// JSON form: `{"states": [...], "observables": [...], "alpha": [[...]]}`
/// with complex entries as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDescriptor {
    pub states: Vec<JsonMatrix>,
    pub observables: Vec<JsonMatrix>,
    pub alpha: Vec<Vec<f64>>,
}

impl GameDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn to_game(&self) -> Result<Game> {
        let states = self
            .states
            .iter()
            .map(|m| DensityOperator::new(parse_matrix(m)?))
            .collect::<Result<Vec<_>>>()?;
        let observables = self
            .observables
            .iter()
            .map(|m| HermitianOperator::new(parse_matrix(m)?))
            .collect::<Result<Vec<_>>>()?;
        let rows = self.alpha.len();
        let cols = self.alpha.first().map_or(0, Vec::len);
        if self.alpha.iter().any(|r| r.len() != cols) {
            return Err(Error::Descriptor("alpha rows have unequal lengths".into()));
        }
        let alpha = DMatrix::from_fn(rows, cols, |i, j| self.alpha[i][j]);
        Game::new(states, observables, alpha)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PayoffReport {
    pub payoff: f64,
    pub classical_max: f64,
    /// `payoff / classical_max`; present only for games in the classical set.
    pub advantage_ratio: Option<f64>,
    #[serde(skip)]
    pub witness_form: HermitianOperator,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MaxPayoffCheck {
    pub max_payoff: f64,
    pub one_minus_weight: f64,
    pub agree: bool,
}

/// `W = d Σ α_ij σ_iᵀ ⊗ O_j` with `d` the input dimension.
pub fn game_operator(g: &Game, d: usize) -> Result<HermitianOperator> {
    if d != g.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "game acts on dimension {}, got d = {d}",
            g.dim_in()
        )));
    }
    let n = g.dim_in() * g.dim_out();
    let mut w = ComplexMatrix::zeros(n, n);
    for (i, sigma) in g.input_states.iter().enumerate() {
        let st = sigma.matrix().transpose();
        for (j, o) in g.observables.iter().enumerate() {
            let a = g.coefficients[(i, j)];
            if a != 0.0 {
                w += kron(&st, o.matrix()).scale(a * d as f64);
            }
        }
    }
    Ok(HermitianOperator::from_hermitian_part(&w))
}

/// `Tr[J_N W]`.
pub fn payoff_choi(n: &QuantumChannel, w: &HermitianOperator) -> Result<f64> {
    if w.dim() != n.shape().total() {
        return Err(Error::DimensionMismatch(format!(
            "operator has dimension {}, channel Choi has {}",
            w.dim(),
            n.shape().total()
        )));
    }
    Ok(trace_inner(n.choi().matrix(), w.matrix()))
}

/// `Σ α_ij Tr[N(σ_i) O_j]`, evaluated by applying the channel.
pub fn payoff_direct(n: &QuantumChannel, g: &Game) -> Result<f64> {
    if n.dim_in() != g.dim_in() || n.dim_out() != g.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "game is {}→{}, channel is {}→{}",
            g.dim_in(),
            g.dim_out(),
            n.dim_in(),
            n.dim_out()
        )));
    }
    let mut total = 0.0;
    for (i, sigma) in g.input_states.iter().enumerate() {
        let out = n.apply_operator(sigma.matrix())?;
        for (j, o) in g.observables.iter().enumerate() {
            total += g.coefficients[(i, j)] * trace_inner(&out, o.matrix());
        }
    }
    Ok(total)
}

/// `max Tr[J_M W]` over PPT Choi states with uniform input marginal; exact on
/// 2⊗2 and 2⊗3 where PPT coincides with entanglement breaking.
pub fn classical_max_payoff(w: &HermitianOperator, shape: BipartiteShape) -> Result<f64> {
    free_extremum(w.matrix(), shape)
}

/// `min Tr[J_M W]` over the same set. Games in the classical-normalized set
/// have this at least one.
pub fn classical_min_payoff(w: &HermitianOperator, shape: BipartiteShape) -> Result<f64> {
    Ok(-free_extremum(&(-w.matrix()), shape)?)
}

/// `J = I/n + Σ y_i B_i` over the traceless uniform-marginal basis, with
/// blocks `J ⪰ 0` and `J^Γ ⪰ 0`. Both sides are strictly feasible.
fn free_extremum(w: &ComplexMatrix, shape: BipartiteShape) -> Result<f64> {
    let n = shape.total();
    if w.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator has dimension {}, shape needs {n}",
            w.nrows()
        )));
    }
    let centre = identity(n).unscale(n as f64);
    let mut p = SdpProblem::new(vec![n, n]);
    p.set_cost(0, centre.clone());
    p.set_cost(1, centre);
    // element 0 of the product basis is I/√n; the rest are traceless
    for b in product_basis(shape, MarginalSubspace::UniformMarginal)
        .iter()
        .skip(1)
    {
        let bt = b.partial_transpose(shape, Side::First);
        p.add_constraint(
            vec![(0, b.scaled(-1.0)), (1, bt.scaled(-1.0))],
            b.trace_with(w),
        );
    }
    let sol = solve(&p, &SolverOptions::default());
    if !sol.is_optimal() {
        return Err(Error::Solver {
            status: sol.status,
            gap: sol.gap,
            iterations: sol.iterations,
        });
    }
    Ok(w.trace().re / n as f64 + sol.objective_value())
}

/// Compares the payoff of the optimal dual witness with `1 − C_w`.
pub fn max_payoff_check(n: &QuantumChannel) -> Result<MaxPayoffCheck> {
    let r = weight_sdp(n, WeightOptions::default())?;
    let max_payoff = payoff_choi(n, &r.witness)?;
    let one_minus_weight = 1.0 - r.value;
    Ok(MaxPayoffCheck {
        max_payoff,
        one_minus_weight,
        agree: (max_payoff - one_minus_weight).abs() <= 1e-6,
    })
}

/// Errors unless `Tr[J_M W] ≥ 1` for every free `M` (within tolerance).
pub fn check_classical_set(w: &HermitianOperator, shape: BipartiteShape) -> Result<()> {
    let min = classical_min_payoff(w, shape)?;
    if min < 1.0 - CLASSICAL_SET_TOL {
        return Err(Error::GameOutsideClassicalSet(format!(
            "min over free Choi states of Tr[J_M W] is {min:.9}, needs at least 1"
        )));
    }
    Ok(())
}

/// `Tr[J_N W] / max_M Tr[J_M W]` for a game operator in the classical set.
pub fn advantage_ratio(n: &QuantumChannel, w: &HermitianOperator) -> Result<f64> {
    check_classical_set(w, n.shape())?;
    let payoff = payoff_choi(n, w)?;
    Ok(payoff / classical_max_payoff(w, n.shape())?)
}

pub fn payoff_report(n: &QuantumChannel, g: &Game) -> Result<PayoffReport> {
    let w = game_operator(g, g.dim_in())?;
    let payoff = payoff_direct(n, g)?;
    let classical_max = classical_max_payoff(&w, n.shape())?;
    let advantage_ratio = check_classical_set(&w, n.shape())
        .ok()
        .map(|_| payoff / classical_max);
    Ok(PayoffReport {
        payoff,
        classical_max,
        advantage_ratio,
        witness_form: w,
    })
}

/// Payoff of a free Choi state, for checks that a witness is valid.
pub fn free_payoff(j: &ChoiMatrix, w: &HermitianOperator) -> f64 {
    trace_inner(j.matrix(), w.matrix())
}
