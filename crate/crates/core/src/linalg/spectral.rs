use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{ComplexMatrix, HermitianOperator, PSD_TOL};
use crate::error::{Error, Result};

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
///
/// Each eigenvector is rephased so that its first component of magnitude
/// above `1e-12` is real and positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }

    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &l) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            out += (v * v.adjoint()).scale(l);
        }
        out
    }
}

pub fn eig_hermitian(h: &HermitianOperator) -> EigenDecomposition {
    let eig = SymmetricEigen::new(h.matrix().clone());
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        if let Some(lead) = col.iter().find(|z| z.norm() > 1e-12).copied() {
            col *= lead.conj() / lead.norm();
        }
        vectors.set_column(dst, &col);
    }
    EigenDecomposition {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        vectors,
    }
}

/// Smallest eigenvalue of a Hermitian matrix (the strict upper triangle is ignored).
pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `m^{-1/2}` for a positive definite Hermitian `m`.
pub fn inv_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = SymmetricEigen::new(m.clone());
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min <= 1e-14 {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let d = eig.eigenvalues.map(|l| Complex64::new(1.0 / l.sqrt(), 0.0));
    let v = &eig.eigenvectors;
    Ok(v * ComplexMatrix::from_diagonal(&d) * v.adjoint())
}

/// Maximum of `|⟨ψ|a⊗b⟩|²` over product states, i.e. the squared largest
/// Schmidt coefficient of `psi` on `dim_a ⊗ dim_b`.
pub fn schmidt_max_overlap(psi: &DVector<Complex64>, dim_a: usize, dim_b: usize) -> Result<f64> {
    if psi.len() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} on {dim_a}⊗{dim_b}",
            psi.len()
        )));
    }
    let deviation = (psi.norm() - 1.0).abs();
    if deviation > 1e-8 {
        return Err(Error::NotNormalized { deviation });
    }
    let reshaped = ComplexMatrix::from_fn(dim_a, dim_b, |a, b| psi[a * dim_b + b]);
    let s = reshaped.singular_values();
    let top = s.iter().copied().fold(0.0, f64::max);
    Ok(top * top)
}

/// Checks `Tr[a b] ≤ λ_max(a) Tr[b] + 1e-10` for Hermitian `a` and PSD `b`.
pub fn max_eig_trace_bound_check(a: &HermitianOperator, b: &HermitianOperator) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operands of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let min_eigenvalue = b.min_eigenvalue();
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(a.trace_with(b.matrix()) <= a.max_eigenvalue() * b.trace() + 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, ket, max_entangled, pauli};
    use approx::assert_relative_eq;

    #[test]
    fn eigen_of_identity_and_pure_state() {
        let e = eig_hermitian(&HermitianOperator::identity(4));
        assert_eq!(e.values, vec![1.0; 4]);
        let e = eig_hermitian(&HermitianOperator::new(max_entangled(2)).unwrap());
        assert_relative_eq!(e.values[0], 1.0, epsilon = 1e-14);
        for &l in &e.values[1..] {
            assert!(l.abs() < 1e-14);
        }
        // leading component real-positive
        assert!(e.vectors[(0, 0)].im.abs() < 1e-15 && e.vectors[(0, 0)].re > 0.0);
    }

    #[test]
    fn damping_choi_leading_eigenvalue() {
        // J = p Ψ⁺ + (1-p)(I/2 ⊗ |0⟩⟨0|) at p = 1/2.
        let p = 0.5;
        let mut j = max_entangled(2).scale(p);
        j[(0, 0)] += Complex64::new((1.0 - p) / 2.0, 0.0);
        j[(2, 2)] += Complex64::new((1.0 - p) / 2.0, 0.0);
        let e = eig_hermitian(&HermitianOperator::new(j).unwrap());
        assert_relative_eq!(e.values[0], (1.5 + 1.25f64.sqrt()) / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn reconstruction() {
        let h = ComplexMatrix::from_fn(5, 5, |i, j| {
            Complex64::new((i * j) as f64 * 0.1 + (i + j) as f64, i as f64 - j as f64)
        });
        let h = HermitianOperator::from_hermitian_part(&h);
        let e = eig_hermitian(&h);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let err = (e.reconstruct() - h.matrix()).norm();
        assert!(err <= 1e-10 * h.matrix().norm());
        let gram = e.vectors.adjoint() * &e.vectors;
        assert!((gram - identity(5)).norm() < 1e-12);
    }

    #[test]
    fn schmidt_overlaps() {
        for d in 2..=4 {
            let psi = DVector::from_fn(d * d, |k, _| {
                if k / d == k % d {
                    Complex64::new(1.0 / (d as f64).sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            assert_relative_eq!(
                schmidt_max_overlap(&psi, d, d).unwrap(),
                1.0 / d as f64,
                epsilon = 1e-14
            );
        }
        assert_relative_eq!(
            schmidt_max_overlap(&ket(4, 0), 2, 2).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let mut v = ket(4, 0).scale(0.8f64.sqrt());
        v[3] = Complex64::new(0.2f64.sqrt(), 0.0);
        assert_relative_eq!(schmidt_max_overlap(&v, 2, 2).unwrap(), 0.8, epsilon = 1e-14);
        assert!(matches!(
            schmidt_max_overlap(&ket(4, 0).scale(1.1), 2, 2),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn trace_bound_examples() {
        let rho = HermitianOperator::new(max_entangled(2)).unwrap();
        assert!(max_eig_trace_bound_check(&HermitianOperator::identity(4), &rho).unwrap());
        let z = HermitianOperator::new(pauli(3)).unwrap();
        let zero = HermitianOperator::new(crate::linalg::ketbra(2, 0, 0)).unwrap();
        assert!(max_eig_trace_bound_check(&z, &zero).unwrap());
        assert_relative_eq!(z.trace_with(zero.matrix()), 1.0);
        assert!(matches!(
            max_eig_trace_bound_check(&z, &z),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn inverse_square_root() {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(0.0, -0.5),
                Complex64::new(1.0, 0.0),
            ],
        );
        let s = inv_sqrt_psd(&m).unwrap();
        assert!((&s * &m * &s - identity(2)).norm() < 1e-13);
    }
}
