use nalgebra::DVector;
use num_complex::Complex64;

use super::{BipartiteShape, ComplexMatrix, Side};
use crate::error::{Error, Result};

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// Computational basis vector `|i⟩` in dimension `dim`.
pub fn ket(dim: usize, i: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// `|i⟩⟨j|` in dimension `dim`.
pub fn ketbra(dim: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// Normalized maximally entangled state `Ψ⁺ = (1/d) Σ |ii⟩⟨jj|` on `d⊗d`.
pub fn max_entangled(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    let w = Complex64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = w;
        }
    }
    m
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `Re Tr[a · b]`.
pub fn trace_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.ncols(), b.nrows());
    assert_eq!(a.nrows(), b.ncols());
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Traces out the factor named by `side`, returning an operator on the other one.
pub fn partial_trace(
    m: &ComplexMatrix,
    shape: BipartiteShape,
    side: Side,
) -> Result<ComplexMatrix> {
    shape.check_square(m)?;
    let (din, dout) = (shape.dim_in, shape.dim_out);
    let out = match side {
        Side::Second => ComplexMatrix::from_fn(din, din, |i, j| {
            (0..dout).map(|o| m[(i * dout + o, j * dout + o)]).sum()
        }),
        Side::First => ComplexMatrix::from_fn(dout, dout, |o, p| {
            (0..din).map(|i| m[(i * dout + o, i * dout + p)]).sum()
        }),
    };
    Ok(out)
}

/// Transposes the factor named by `side`.
pub fn partial_transpose(
    m: &ComplexMatrix,
    shape: BipartiteShape,
    side: Side,
) -> Result<ComplexMatrix> {
    shape.check_square(m)?;
    let (din, dout) = (shape.dim_in, shape.dim_out);
    let n = shape.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..din {
        for o in 0..dout {
            for j in 0..din {
                for p in 0..dout {
                    let (r, c) = match side {
                        Side::First => (j * dout + o, i * dout + p),
                        Side::Second => (i * dout + p, j * dout + o),
                    };
                    out[(r, c)] = m[(i * dout + o, j * dout + p)];
                }
            }
        }
    }
    Ok(out)
}

/// Whether the partial transpose on the first factor has no eigenvalue
/// below `-tol`.
pub fn is_ppt(m: &ComplexMatrix, shape: BipartiteShape, tol: f64) -> Result<bool> {
    let pt = partial_transpose(m, shape, Side::First)?;
    Ok(super::min_eigenvalue(&super::hermitian_part(&pt)) >= -tol)
}

/// Reorders tensor factors: factor `k` of the result is factor `perm[k]` of
/// the input, where the input factors have dimensions `dims`.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix> {
    let n: usize = dims.iter().product();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but subsystem dimensions multiply to {n}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len()
        || perm
            .iter()
            .any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::DimensionMismatch(format!(
            "{perm:?} is not a permutation"
        )));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    // index in the permuted ordering -> index in the original ordering
    let map: Vec<usize> = (0..n)
        .map(|idx| {
            let mut digits = vec![0usize; dims.len()];
            let mut rem = idx;
            for k in (0..new_dims.len()).rev() {
                digits[perm[k]] = rem % new_dims[k];
                rem /= new_dims[k];
            }
            digits
                .iter()
                .zip(dims)
                .fold(0, |acc, (&d, &size)| acc * size + d)
        })
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| m[(map[r], map[c])]))
}
