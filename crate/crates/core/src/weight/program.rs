//! The weight program, posed on the support of `J`.
//!
//! `X ⪯ J` forces the free part onto `range(J)`. When `J` is rank deficient
//! the unrestricted program has no strictly feasible free part and its
//! witness optimum is not attained, which stalls interior-point methods.
//! Restricting `X = V Y V†` to the support removes that face exactly, and an
//! optimal witness of the reduced program lifts to a witness of the full one
//! with the same value.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::channel::ChoiMatrix;
use crate::linalg::{
    gell_mann_basis, hermitian_part, identity, kron, min_eigenvalue, partial_trace,
    partial_transpose, product_basis, trace_inner, BipartiteShape, ComplexMatrix,
    HermitianOperator, MarginalSubspace, Side, SparseHermitian,
};
use crate::sdp::{SdpProblem, SdpSolution};

/// Eigenvalues of `J` at or below this are treated as zero.
const SUPPORT_TOL: f64 = 1e-10;

pub(crate) struct WeightProgram {
    pub problem: SdpProblem,
    shape: BipartiteShape,
    enforce_marginal: bool,
    /// Orthonormal basis of the reduced free-part space.
    basis: Vec<SparseHermitian>,
    /// Isometry onto `range(J)`; `None` when `J` has full rank.
    support: Option<(ComplexMatrix, ComplexMatrix)>,
}

impl WeightProgram {
    /// Builds `max Tr X` over `0 ⪯ X ⪯ J`, `X^Γ ⪰ 0` (and optionally
    /// `Tr_out X ∝ I`), with `X` parameterized by the dual vector.
    pub fn new(j: &ChoiMatrix, enforce_marginal: bool) -> Self {
        let shape = j.shape();
        let n = shape.total();
        let jm = j.matrix().clone();
        let eig = j.operator().eigen();
        let r = eig.values.iter().filter(|&&v| v > SUPPORT_TOL).count();

        let (basis, support, cost) = if r == n {
            let subspace = if enforce_marginal {
                MarginalSubspace::UniformMarginal
            } else {
                MarginalSubspace::Full
            };
            (product_basis(shape, subspace), None, jm.clone())
        } else {
            let v = eig.vectors.columns(0, r).into_owned();
            let u = eig.vectors.columns(r, n - r).into_owned();
            let basis = reduced_basis(shape, &v, enforce_marginal);
            let cost = hermitian_part(&(v.adjoint() * &jm * &v));
            (basis, Some((v, u)), cost)
        };

        let r_dim = cost.nrows();
        let mut problem = SdpProblem::new(vec![r_dim, r_dim, n]);
        problem.set_cost(1, cost);
        for y in &basis {
            let lifted = match &support {
                None => y.partial_transpose(shape, Side::First),
                Some((v, _)) => {
                    let full = v * y.to_dense() * v.adjoint();
                    let pt = partial_transpose(&full, shape, Side::First)
                        .expect("shape matches the Choi state");
                    SparseHermitian::from_dense(&pt)
                }
            };
            problem.add_constraint(
                vec![
                    (0, y.scaled(-1.0)),
                    (1, y.clone()),
                    (2, lifted.scaled(-1.0)),
                ],
                y.trace(),
            );
        }
        Self {
            problem,
            shape,
            enforce_marginal,
            basis,
            support,
        }
    }

    /// Free part `X` (unnormalized) read off the dual vector.
    pub fn free_part(&self, y: &[f64]) -> ComplexMatrix {
        let dim = self.problem.block_dims[0];
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (b, &c) in self.basis.iter().zip(y) {
            b.add_to(&mut out, c);
        }
        let out = match &self.support {
            None => out,
            Some((v, _)) => v * out * v.adjoint(),
        };
        hermitian_part(&out)
    }

    /// Exactly feasible witness built from an approximate primal solution.
    ///
    /// With `r` the constraint residual expanded in the (orthonormal) basis,
    /// `W = P1 + r + t I` and `P0 + t I` restore the equalities while keeping
    /// both operators PSD for `t = max(0, −λ_min(P1 + r))`. On a reduced
    /// program the result is then lifted to the full space.
    pub fn witness(&self, sol: &SdpSolution) -> HermitianOperator {
        let r_dim = self.problem.block_dims[1];
        let mut w = sol.primal[1].clone();
        for (con, b) in self.problem.constraints.iter().zip(&self.basis) {
            let lhs: f64 = con
                .terms
                .iter()
                .map(|(k, a)| a.trace_with(&sol.primal[*k]))
                .sum();
            b.add_to(&mut w, con.rhs - lhs);
        }
        let w = hermitian_part(&w);
        let t = (-min_eigenvalue(&w)).max(0.0);
        let w = w + identity(r_dim).scale(t);
        let p0 = &sol.primal[0] + identity(r_dim).scale(t);
        match &self.support {
            None => HermitianOperator::from_hermitian_part(&w),
            Some((v, u)) => self.lift(&w, &p0, &sol.primal[2], v, u),
        }
    }

    /// Lifts a reduced witness `W̃` with blocks `P̃0`, `P2` to the full space.
    ///
    /// `G = P2^Γ + I` and `K̃ = W̃ − P̃0 − V†GV` lies in the compression of
    /// the orthogonal complement of the free-part space, so some `K` in that
    /// complement has `V†KV = K̃`. In the `(V, U)` frame `W − P0 = G + K`
    /// fixes the diagonal blocks up to a shared `F` and the off-diagonal block
    /// `B = V†(G+K)U` up to a split `B = B_W − B_P`. Taking
    /// `B_W = W̃ M⁻¹ B`, `B_P = −P̃0 M⁻¹ B` with `M = W̃ + P̃0` keeps both
    /// off-diagonal blocks in the range of their diagonal block, so a finite
    /// `F` makes both PSD. `Tr[WJ] = Tr[W̃ V†JV]` since `J` lives on `V`.
    fn lift(
        &self,
        w_red: &ComplexMatrix,
        p0_red: &ComplexMatrix,
        p2: &ComplexMatrix,
        v: &ComplexMatrix,
        u: &ComplexMatrix,
    ) -> HermitianOperator {
        let n = self.shape.total();
        let r = v.ncols();
        let g =
            partial_transpose(p2, self.shape, Side::First).expect("shape matches") + identity(n);
        let k_red = hermitian_part(&(w_red - p0_red - v.adjoint() * &g * v));
        let k = if self.enforce_marginal {
            marginal_complement_preimage(self.shape, v, &k_red)
        } else {
            ComplexMatrix::zeros(n, n)
        };
        let gk = hermitian_part(&(g + k));
        let b = v.adjoint() * &gk * u;
        let c = hermitian_part(&(u.adjoint() * &gk * u));

        let mut m = hermitian_part(&(w_red + p0_red));
        let shift = (1e-14 * (1.0 + m.norm()) - min_eigenvalue(&m)).max(0.0);
        m += identity(r).scale(shift);
        let m_inv_b = Cholesky::new(m)
            .expect("shifted to positive definite")
            .solve(&b);
        let b_w = w_red * &m_inv_b;
        let f0 = hermitian_part(&(m_inv_b.adjoint() * p0_red * &m_inv_b));
        let need = hermitian_part(&(m_inv_b.adjoint() * w_red * &m_inv_b)) - &c - &f0;
        let tau = (-min_eigenvalue(&(-need))).max(0.0);
        let w_uu = c + f0 + identity(n - r).scale(tau);

        let w = v * w_red * v.adjoint()
            + v * &b_w * u.adjoint()
            + u * b_w.adjoint() * v.adjoint()
            + u * w_uu * u.adjoint();
        // Roundoff in the frame change may leave a sliver of negative
        // spectrum; moving it into P0 keeps the witness feasible.
        let w = hermitian_part(&w);
        let fix = (-min_eigenvalue(&w)).max(0.0);
        HermitianOperator::from_hermitian_part(&(w + identity(n).scale(fix)))
    }
}

/// Orthonormal basis of `{Y : V Y V† in the free-part space}`.
fn reduced_basis(
    shape: BipartiteShape,
    v: &ComplexMatrix,
    enforce_marginal: bool,
) -> Vec<SparseHermitian> {
    let r = v.ncols();
    let herm = gell_mann_basis(r);
    if !enforce_marginal {
        return herm;
    }
    // Rows: traceless Gell-Mann components of Tr_out(V H_a V†). Only traceless
    // input marginals are forbidden.
    let gin: Vec<ComplexMatrix> = gell_mann_basis(shape.dim_in)
        .iter()
        .skip(1)
        .map(SparseHermitian::to_dense)
        .collect();
    let mut m = DMatrix::<f64>::zeros(gin.len(), herm.len());
    for (a, h) in herm.iter().enumerate() {
        let lifted = v * h.to_dense() * v.adjoint();
        let marg = partial_trace(&lifted, shape, Side::Second).expect("shape matches");
        for (bi, gb) in gin.iter().enumerate() {
            m[(bi, a)] = trace_inner(gb, &marg);
        }
    }
    let gram = m.transpose() * &m;
    let eig = SymmetricEigen::new(gram);
    let scale = eig.eigenvalues.iter().copied().fold(1.0, f64::max);
    let dense: Vec<ComplexMatrix> = herm.iter().map(SparseHermitian::to_dense).collect();
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= 1e-12 * scale)
        .map(|(col, _)| {
            let mut y = ComplexMatrix::zeros(r, r);
            for (a, h) in dense.iter().enumerate() {
                y += h.scale(eig.eigenvectors[(a, col)]);
            }
            SparseHermitian::from_dense(&hermitian_part(&y))
        })
        .collect()
}

/// Least-squares `K = A ⊗ I` with `Tr A = 0` and `V†KV = K̃`.
fn marginal_complement_preimage(
    shape: BipartiteShape,
    v: &ComplexMatrix,
    k_red: &ComplexMatrix,
) -> ComplexMatrix {
    let gens: Vec<ComplexMatrix> = gell_mann_basis(shape.dim_in)
        .iter()
        .skip(1)
        .map(|g| kron(&g.to_dense(), &identity(shape.dim_out)))
        .collect();
    let compressed: Vec<ComplexMatrix> = gens.iter().map(|g| v.adjoint() * g * v).collect();
    let q = gens.len();
    let mut gram = DMatrix::<f64>::zeros(q, q);
    let mut rhs = nalgebra::DVector::<f64>::zeros(q);
    for a in 0..q {
        rhs[a] = trace_inner(&compressed[a], k_red);
        for b in 0..q {
            gram[(a, b)] = trace_inner(&compressed[a], &compressed[b]);
        }
    }
    let coef = gram
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .expect("svd computed with both factors");
    let n = shape.total();
    let mut k = ComplexMatrix::zeros(n, n);
    for (g, c) in gens.iter().zip(coef.iter()) {
        k += g.scale(*c);
    }
    k
}
