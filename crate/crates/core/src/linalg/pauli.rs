use nalgebra::Matrix3;
use num_complex::Complex64;

use super::{kron, trace_inner, BipartiteShape, ComplexMatrix, DensityOperator};
use crate::error::{Error, Result};

/// Pauli matrix: 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn pauli(k: usize) -> ComplexMatrix {
    let (o, l, i) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    let e = match k {
        0 => [l, o, o, l],
        1 => [o, l, l, o],
        2 => [o, -i, i, o],
        3 => [l, o, o, -l],
        _ => panic!("Pauli index {k} out of range"),
    };
    ComplexMatrix::from_row_slice(2, 2, &e)
}

/// Pauli-basis coefficients of a two-qubit operator:
/// `a_i = Tr[J σ_i⊗I]/4`, `b_j = Tr[J I⊗σ_j]/4`, `s_ij = Tr[J σ_i⊗σ_j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCorrelation {
    pub local_first: [f64; 3],
    pub local_second: [f64; 3],
    pub correlations: Matrix3<f64>,
}

pub fn pauli_correlation(j: &DensityOperator) -> Result<PauliCorrelation> {
    BipartiteShape::new(2, 2)
        .check_square(j.matrix())
        .map_err(|_| {
            Error::DimensionMismatch(format!(
                "expected a two-qubit operator, got dimension {}",
                j.dim()
            ))
        })?;
    let m = j.matrix();
    let mut local_first = [0.0; 3];
    let mut local_second = [0.0; 3];
    let mut correlations = Matrix3::zeros();
    for a in 1..=3 {
        local_first[a - 1] = trace_inner(m, &kron(&pauli(a), &pauli(0))) / 4.0;
        local_second[a - 1] = trace_inner(m, &kron(&pauli(0), &pauli(a))) / 4.0;
        for b in 1..=3 {
            correlations[(a - 1, b - 1)] = trace_inner(m, &kron(&pauli(a), &pauli(b)));
        }
    }
    Ok(PauliCorrelation {
        local_first,
        local_second,
        correlations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_entangled};

    #[test]
    fn bell_state_correlations() {
        let c = pauli_correlation(&DensityOperator::new(max_entangled(2)).unwrap()).unwrap();
        let expected = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0));
        assert!((c.correlations - expected).norm() < 1e-14);
        assert_eq!(c.local_first, [0.0; 3]);
    }

    #[test]
    fn maximally_mixed_has_no_correlations() {
        let c = pauli_correlation(&DensityOperator::maximally_mixed(4)).unwrap();
        assert!(c.correlations.norm() < 1e-15);
        assert_eq!(c.local_first, [0.0; 3]);
        assert_eq!(c.local_second, [0.0; 3]);
    }

    #[test]
    fn werner_correlations_scale_linearly() {
        for p in [0.0, 0.3, 0.8, 1.0] {
            let j = max_entangled(2).scale(p) + identity(4).scale((1.0 - p) / 4.0);
            let c = pauli_correlation(&DensityOperator::new(j).unwrap()).unwrap();
            let expected = Matrix3::from_diagonal(&nalgebra::Vector3::new(p, -p, p));
            assert!((c.correlations - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn local_terms_are_quarter_projections() {
        // |0⟩⟨0| ⊗ I/2 has Tr[J Z⊗I] = 1, so a_z = 1/4.
        let j = kron(&crate::linalg::ketbra(2, 0, 0), &identity(2).scale(0.5));
        let c = pauli_correlation(&DensityOperator::new(j).unwrap()).unwrap();
        assert_eq!(c.local_first, [0.0, 0.0, 0.25]);
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert!(pauli_correlation(&DensityOperator::maximally_mixed(6)).is_err());
    }
}
