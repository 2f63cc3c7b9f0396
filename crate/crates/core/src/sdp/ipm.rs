//! Infeasible-start primal-dual interior-point method with the HKM search
//! direction and Mehrotra predictor-corrector steps.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use super::{SdpProblem, SdpSolution, SolveStatus, SolverOptions};
use crate::linalg::{hermitian_part, min_eigenvalue, trace_inner, ComplexMatrix, SparseHermitian};

const INFEASIBILITY_TOL: f64 = 1e-8;
const MIN_STEP: f64 = 1e-10;

struct Layout<'a> {
    /// Per block: the constraints touching it and their coefficient matrices.
    by_block: Vec<Vec<(usize, &'a SparseHermitian)>>,
    b: DVector<f64>,
    b_norm: f64,
    c_norm: f64,
}

impl<'a> Layout<'a> {
    fn new(problem: &'a SdpProblem) -> Self {
        let mut by_block = vec![Vec::new(); problem.block_dims.len()];
        for (i, con) in problem.constraints.iter().enumerate() {
            for (k, a) in &con.terms {
                by_block[*k].push((i, a));
            }
        }
        let b = DVector::from_iterator(
            problem.constraints.len(),
            problem.constraints.iter().map(|c| c.rhs),
        );
        let b_norm = b.norm();
        let c_norm = problem
            .cost
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt();
        Self {
            by_block,
            b,
            b_norm,
            c_norm,
        }
    }

    /// `A(X)`.
    fn apply(&self, x: &[ComplexMatrix]) -> DVector<f64> {
        let mut out = DVector::zeros(self.b.len());
        for (k, terms) in self.by_block.iter().enumerate() {
            for &(i, a) in terms {
                out[i] += a.trace_with(&x[k]);
            }
        }
        out
    }

    /// `A*(y)` for one block.
    fn adjoint_block(&self, k: usize, n: usize, y: &DVector<f64>) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(n, n);
        for &(i, a) in &self.by_block[k] {
            if y[i] != 0.0 {
                a.add_to(&mut out, y[i]);
            }
        }
        out
    }
}

#[derive(Clone)]
struct Iterate {
    x: Vec<ComplexMatrix>,
    y: DVector<f64>,
    z: Vec<ComplexMatrix>,
}

struct Measures {
    pobj: f64,
    dobj: f64,
    gap: f64,
    pres: f64,
    dres: f64,
}

impl Measures {
    fn merit(&self) -> f64 {
        self.gap.max(self.pres).max(self.dres)
    }
}

/// Largest `α` with `m + α·dm ⪰ 0`, given `m ≻ 0`; `None` if `m` is not
/// numerically positive definite.
fn max_step(m: &ComplexMatrix, dm: &ComplexMatrix) -> Option<f64> {
    let chol = Cholesky::new(m.clone())?;
    let l = chol.l();
    let w = l.solve_lower_triangular(dm)?;
    let w2 = l.solve_lower_triangular(&w.adjoint())?;
    let lmin = min_eigenvalue(&hermitian_part(&w2));
    Some(if lmin < 0.0 {
        -1.0 / lmin
    } else {
        f64::INFINITY
    })
}

fn max_step_all(m: &[ComplexMatrix], dm: &[ComplexMatrix]) -> f64 {
    m.iter()
        .zip(dm)
        .map(|(a, b)| max_step(a, b).unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min)
}

fn inner(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| trace_inner(x, y)).sum()
}

/// Solves the standard-form problem. Never panics on infeasible or
/// ill-posed input; the returned status reports what happened.
pub fn solve(problem: &SdpProblem, opts: &SolverOptions) -> SdpSolution {
    let layout = Layout::new(problem);
    let m = problem.constraints.len();
    let dims = &problem.block_dims;
    let total_dim: usize = dims.iter().sum();

    let gram = Cholesky::new(gram_matrix(problem));
    let mut it = initial_point(problem, &layout);
    let mut best: Option<(Iterate, Measures, usize)> = None;
    let mut status = SolveStatus::MaxIter;
    let mut stalls = 0;
    let mut iterations = 0;

    for iter in 0..opts.max_iter {
        iterations = iter;
        let ax = layout.apply(&it.x);
        let rp = &layout.b - &ax;
        let rd: Vec<ComplexMatrix> = (0..dims.len())
            .map(|k| &problem.cost[k] - &it.z[k] - layout.adjoint_block(k, dims[k], &it.y))
            .collect();
        let meas = measures(problem, &layout, &it, &rp, &rd);

        if best
            .as_ref()
            .is_none_or(|(_, b, _)| meas.merit() < b.merit())
        {
            best = Some((it.clone(), Measures { ..meas }, iter));
        }
        let xz = inner(&it.x, &it.z);
        let comp = xz.abs() / (1.0 + meas.pobj.abs() + meas.dobj.abs());
        if meas.merit() <= opts.tol && comp <= opts.tol {
            status = SolveStatus::Optimal;
            best = Some((it.clone(), meas, iter));
            break;
        }
        if detect_infeasibility(problem, &layout, &it, &meas) {
            status = SolveStatus::Infeasible;
            best = Some((it.clone(), meas, iter));
            break;
        }

        let mu = xz / total_dim as f64;
        let zinv: Option<Vec<ComplexMatrix>> =
            it.z.iter()
                .map(|z| Cholesky::new(z.clone()).map(|c| c.inverse()))
                .collect();
        let Some(zinv) = zinv else {
            status = SolveStatus::Stalled;
            break;
        };
        let Some(schur) = factor_schur(schur_complement(&layout, m, &it.x, &zinv)) else {
            status = SolveStatus::Stalled;
            break;
        };
        let x_rd_zinv: Vec<ComplexMatrix> = (0..dims.len())
            .map(|k| &it.x[k] * &rd[k] * &zinv[k])
            .collect();

        let direction = |g: &[ComplexMatrix]| {
            let mut rhs = rp.clone();
            for (k, terms) in layout.by_block.iter().enumerate() {
                for &(i, a) in terms {
                    rhs[i] += a.trace_with(&x_rd_zinv[k]) - a.trace_with(&g[k]);
                }
            }
            let mut dy = schur.solve(&rhs);
            // Iterative refinement against the exact operator; the formed
            // Schur matrix loses accuracy as X and Z become ill-conditioned.
            for _ in 0..3 {
                let r = &rhs - schur_apply(&layout, dims, &it.x, &zinv, &dy);
                if r.norm() <= 1e-15 * (1.0 + rhs.norm()) {
                    break;
                }
                dy += schur.solve(&r);
            }
            let dz: Vec<ComplexMatrix> = (0..dims.len())
                .map(|k| &rd[k] - layout.adjoint_block(k, dims[k], &dy))
                .collect();
            let mut dx: Vec<ComplexMatrix> = (0..dims.len())
                .map(|k| hermitian_part(&(&g[k] - &it.x[k] * &dz[k] * &zinv[k])))
                .collect();
            // Restore A(dX) = r_p exactly; the Schur solve loses it once X and
            // Z⁻¹ are badly scaled.
            if let Some(gram) = &gram {
                let w = gram.solve(&(&rp - layout.apply(&dx)));
                for (k, d) in dx.iter_mut().enumerate() {
                    *d += layout.adjoint_block(k, dims[k], &w);
                }
            }
            (dx, dy, dz)
        };

        // predictor
        let g: Vec<ComplexMatrix> = it.x.iter().map(|x| -x).collect();
        let (dxp, _, dzp) = direction(&g);
        let ap = max_step_all(&it.x, &dxp).min(1.0);
        let ad = max_step_all(&it.z, &dzp).min(1.0);
        let xz_pred = inner(&axpy(&it.x, ap, &dxp), &axpy(&it.z, ad, &dzp));
        let expon = (3.0 * ap.min(ad).powi(2)).max(1.0);
        let sigma = if xz > 0.0 {
            (xz_pred / xz).clamp(0.0, 1.0).powf(expon)
        } else {
            0.0
        };

        // corrector
        let g: Vec<ComplexMatrix> = (0..dims.len())
            .map(|k| zinv[k].scale(sigma * mu) - &it.x[k] - &dxp[k] * &dzp[k] * &zinv[k])
            .collect();
        let (dx, dy, dz) = direction(&g);
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let step_p = (gamma * max_step_all(&it.x, &dx)).min(1.0);
        let step_d = (gamma * max_step_all(&it.z, &dz)).min(1.0);

        if step_p < MIN_STEP && step_d < MIN_STEP {
            stalls += 1;
            if stalls >= 3 {
                status = SolveStatus::Stalled;
                break;
            }
        } else {
            stalls = 0;
        }

        it.x = axpy(&it.x, step_p, &dx)
            .iter()
            .map(hermitian_part)
            .collect();
        it.z = axpy(&it.z, step_d, &dz)
            .iter()
            .map(hermitian_part)
            .collect();
        it.y += dy.scale(step_d);
        iterations = iter + 1;
    }

    let (it, meas, _) = match best {
        Some(b) if status != SolveStatus::Optimal && status != SolveStatus::Infeasible => b,
        Some(b) => b,
        None => {
            let rp = &layout.b - layout.apply(&it.x);
            let rd: Vec<ComplexMatrix> = (0..dims.len())
                .map(|k| &problem.cost[k] - &it.z[k] - layout.adjoint_block(k, dims[k], &it.y))
                .collect();
            let meas = measures(problem, &layout, &it, &rp, &rd);
            (it, meas, 0)
        }
    };
    SdpSolution {
        status,
        primal_objective: meas.pobj,
        dual_objective: meas.dobj,
        gap: meas.gap,
        primal_residual: meas.pres,
        dual_residual: meas.dres,
        multipliers: it.y.iter().copied().collect(),
        primal: it.x,
        dual_slack: it.z,
        iterations,
    }
}

fn axpy(a: &[ComplexMatrix], s: f64, b: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    a.iter().zip(b).map(|(x, d)| x + d.scale(s)).collect()
}

fn initial_point(problem: &SdpProblem, layout: &Layout) -> Iterate {
    let mut x = Vec::new();
    let mut z = Vec::new();
    for (k, &n) in problem.block_dims.iter().enumerate() {
        let nf = n as f64;
        let mut xi = 10.0f64.max(nf.sqrt());
        let mut eta = xi.max(problem.cost[k].norm());
        for &(i, a) in &layout.by_block[k] {
            let a_norm = a.entries.iter().map(|e| e.2.norm_sqr()).sum::<f64>().sqrt();
            xi = xi.max(nf * (1.0 + layout.b[i].abs()) / (1.0 + a_norm));
            eta = eta.max(a_norm);
        }
        x.push(ComplexMatrix::identity(n, n).scale(xi));
        z.push(ComplexMatrix::identity(n, n).scale(eta));
    }
    Iterate {
        x,
        y: DVector::zeros(problem.constraints.len()),
        z,
    }
}

fn measures(
    problem: &SdpProblem,
    layout: &Layout,
    it: &Iterate,
    rp: &DVector<f64>,
    rd: &[ComplexMatrix],
) -> Measures {
    let pobj = inner(&problem.cost, &it.x);
    let dobj = layout.b.dot(&it.y);
    let rd_norm = rd.iter().map(|r| r.norm_squared()).sum::<f64>().sqrt();
    Measures {
        pobj,
        dobj,
        gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
        pres: rp.norm() / (1.0 + layout.b_norm),
        dres: rd_norm / (1.0 + layout.c_norm),
    }
}

/// Ray tests: a growing `bᵀy` with `A*(y) + Z → 0` certifies primal
/// infeasibility; a decreasing `⟨C, X⟩` with `A(X) → 0` certifies dual
/// infeasibility.
fn detect_infeasibility(
    problem: &SdpProblem,
    layout: &Layout,
    it: &Iterate,
    meas: &Measures,
) -> bool {
    if meas.dobj > 0.0 {
        let ray: f64 = (0..problem.block_dims.len())
            .map(|k| {
                (layout.adjoint_block(k, problem.block_dims[k], &it.y) + &it.z[k]).norm_squared()
            })
            .sum::<f64>()
            .sqrt();
        if ray / meas.dobj < INFEASIBILITY_TOL {
            return true;
        }
    }
    if meas.pobj < 0.0 {
        let ax = layout.apply(&it.x).norm();
        if ax / -meas.pobj < INFEASIBILITY_TOL {
            return true;
        }
    }
    false
}

/// `G_ij = Σ_k ⟨A_ik, A_jk⟩`.
fn gram_matrix(problem: &SdpProblem) -> DMatrix<f64> {
    let m = problem.constraints.len();
    let dense: Vec<Vec<(usize, ComplexMatrix)>> = problem
        .constraints
        .iter()
        .map(|c| c.terms.iter().map(|(k, a)| (*k, a.to_dense())).collect())
        .collect();
    let mut g = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let mut v = 0.0;
            for (ki, ai) in &problem.constraints[i].terms {
                for (kj, aj) in &dense[j] {
                    if ki == kj {
                        v += ai.trace_with(aj);
                    }
                }
            }
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// `M y` evaluated without forming `M`.
fn schur_apply(
    layout: &Layout,
    dims: &[usize],
    x: &[ComplexMatrix],
    zinv: &[ComplexMatrix],
    y: &DVector<f64>,
) -> DVector<f64> {
    let prod: Vec<ComplexMatrix> = (0..dims.len())
        .map(|k| &x[k] * layout.adjoint_block(k, dims[k], y) * &zinv[k])
        .collect();
    layout.apply(&prod)
}

/// `M_ij = Re Tr[A_i X A_j Z⁻¹]`, summed over blocks.
fn schur_complement(
    layout: &Layout,
    m: usize,
    x: &[ComplexMatrix],
    zinv: &[ComplexMatrix],
) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    for (k, terms) in layout.by_block.iter().enumerate() {
        let n = x[k].nrows();
        let mut t = ComplexMatrix::zeros(n, n);
        for &(j, aj) in terms {
            t.fill(Complex64::new(0.0, 0.0));
            for &(r, s, v) in &aj.entries {
                for col in 0..n {
                    let zs = zinv[k][(s, col)] * v;
                    for row in 0..n {
                        t[(row, col)] += x[k][(row, r)] * zs;
                    }
                }
            }
            for &(i, ai) in terms {
                out[(i, j)] += ai.trace_with(&t);
            }
        }
    }
    // exact symmetry for the Cholesky factorization

    (&out + out.transpose()) * 0.5
}

fn factor_schur(mut schur: DMatrix<f64>) -> Option<Cholesky<f64, nalgebra::Dyn>> {
    let scale = schur
        .diagonal()
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut reg = 0.0;
    for _ in 0..8 {
        if let Some(c) = Cholesky::new(schur.clone()) {
            return Some(c);
        }
        let next = if reg == 0.0 {
            1e-14 * scale
        } else {
            reg * 100.0
        };
        for i in 0..schur.nrows() {
            schur[(i, i)] += next - reg;
        }
        reg = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, SparseHermitian};
    use crate::sdp::SdpProblem;
    use approx::assert_relative_eq;

    fn unit(n: usize, r: usize, c: usize) -> SparseHermitian {
        let mut s = SparseHermitian::new(n);
        if r == c {
            s.entries.push((r, r, Complex64::new(1.0, 0.0)));
        } else {
            s.entries.push((r, c, Complex64::new(0.5, 0.0)));
            s.entries.push((c, r, Complex64::new(0.5, 0.0)));
        }
        s
    }

    #[test]
    fn min_trace_with_fixed_corner() {
        // min Tr X  s.t.  X_00 = 1, X ⪰ 0  → 1
        let mut p = SdpProblem::new(vec![2]);
        p.set_cost(0, identity(2));
        p.add_constraint(vec![(0, unit(2, 0, 0))], 1.0);
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_relative_eq!(sol.objective_value(), 1.0, epsilon = 1e-7);
        assert!(sol.gap <= 1e-8 && sol.primal_residual <= 1e-8);
    }

    #[test]
    fn projector_overlap_inside_unit_box() {
        // max Tr[Π X] s.t. 0 ⪯ X ⪯ I with rank-k Π  → k
        for k in 1..=3 {
            let n = 4;
            let mut proj = ComplexMatrix::zeros(n, n);
            for i in 0..k {
                proj[(i, i)] = Complex64::new(1.0, 0.0);
            }
            let mut p = SdpProblem::new(vec![n, n]);
            p.set_cost(0, -proj);
            for r in 0..n {
                for c in r..n {
                    p.add_constraint(
                        vec![(0, unit(n, r, c)), (1, unit(n, r, c))],
                        if r == c { 1.0 } else { 0.0 },
                    );
                }
            }
            let sol = solve(&p, &SolverOptions::default());
            assert_eq!(sol.status, SolveStatus::Optimal);
            assert_relative_eq!(-sol.objective_value(), k as f64, epsilon = 1e-7);
        }
    }

    #[test]
    fn detects_infeasibility() {
        // X ⪰ 0 (1x1) with X = -1
        let mut p = SdpProblem::new(vec![1]);
        p.set_cost(0, identity(1));
        p.add_constraint(vec![(0, unit(1, 0, 0))], -1.0);
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn complex_hermitian_block() {
        // min Tr[C X] with Tr X = 1 equals λ_min(C) for a complex Hermitian C.
        let c = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        let mut p = SdpProblem::new(vec![2]);
        p.set_cost(0, c);
        let mut tr = SparseHermitian::new(2);
        tr.entries = vec![
            (0, 0, Complex64::new(1.0, 0.0)),
            (1, 1, Complex64::new(1.0, 0.0)),
        ];
        p.add_constraint(vec![(0, tr)], 1.0);
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_relative_eq!(sol.objective_value(), 0.0, epsilon = 1e-7);
        // optimal X is the projector onto the kernel vector (1, i)/√2, so X_01 = -i/2
        assert_relative_eq!(sol.primal[0][(0, 1)].im, -0.5, epsilon = 1e-5);
    }
}
