use num_complex::Complex64;

use super::{BipartiteShape, ComplexMatrix, Side};

/// Hermitian matrix stored as its nonzero entries (both triangles).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    pub dim: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHermitian {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    /// Keeps entries above `1e-15` in magnitude from a dense matrix.
    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let mut out = Self::new(m.nrows());
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let v = m[(r, c)];
                if v.norm() > 1e-15 {
                    out.entries.push((r, c, v));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(r, c, v)| (r, c, v * s))
                .collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|(r, c, _)| r == c)
            .map(|(_, _, v)| v.re)
            .sum()
    }

    /// `Re Tr[self · m]`.
    pub fn trace_with(&self, m: &ComplexMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| (v * m[(c, r)]).re)
            .sum()
    }

    /// `out += coef · self`.
    pub fn add_to(&self, out: &mut ComplexMatrix, coef: f64) {
        for &(r, c, v) in &self.entries {
            out[(r, c)] += v * coef;
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::new(self.dim * other.dim);
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &other.entries {
                out.entries
                    .push((r1 * other.dim + r2, c1 * other.dim + c2, v1 * v2));
            }
        }
        out
    }

    pub fn partial_transpose(&self, shape: BipartiteShape, side: Side) -> Self {
        let dout = shape.dim_out;
        let entries = self
            .entries
            .iter()
            .map(|&(r, c, v)| {
                let (i, o, j, p) = (r / dout, r % dout, c / dout, c % dout);
                match side {
                    Side::First => (j * dout + o, i * dout + p, v),
                    Side::Second => (i * dout + p, j * dout + o, v),
                }
            })
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }
}

/// Orthonormal (Hilbert–Schmidt) generalized Gell-Mann basis of `d×d`
/// Hermitian matrices. Element 0 is `I/√d`; all others are traceless.
pub fn gell_mann_basis(d: usize) -> Vec<SparseHermitian> {
    let mut basis = Vec::with_capacity(d * d);
    let id = SparseHermitian {
        dim: d,
        entries: (0..d)
            .map(|i| (i, i, Complex64::new(1.0 / (d as f64).sqrt(), 0.0)))
            .collect(),
    };
    basis.push(id);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in j + 1..d {
            basis.push(SparseHermitian {
                dim: d,
                entries: vec![
                    (j, k, Complex64::new(h, 0.0)),
                    (k, j, Complex64::new(h, 0.0)),
                ],
            });
            basis.push(SparseHermitian {
                dim: d,
                entries: vec![
                    (j, k, Complex64::new(0.0, -h)),
                    (k, j, Complex64::new(0.0, h)),
                ],
            });
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut entries: Vec<_> = (0..l).map(|j| (j, j, Complex64::new(norm, 0.0))).collect();
        entries.push((l, l, Complex64::new(-(l as f64) * norm, 0.0)));
        basis.push(SparseHermitian { dim: d, entries });
    }
    basis
}

/// Subspaces of bipartite Hermitian operators used to parameterize Choi-type
/// variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalSubspace {
    /// All Hermitian operators on `A0 ⊗ A1`.
    Full,
    /// Operators `X` with `Tr_out X ∝ I`.
    UniformMarginal,
    /// Operators with `Tr_out X = 0`.
    ZeroMarginal,
}

/// Orthonormal product basis `G_a ⊗ H_b` of Gell-Mann elements restricted to
/// the requested subspace.
pub fn product_basis(shape: BipartiteShape, subspace: MarginalSubspace) -> Vec<SparseHermitian> {
    let gin = gell_mann_basis(shape.dim_in);
    let gout = gell_mann_basis(shape.dim_out);
    let mut out = Vec::new();
    for (a, ga) in gin.iter().enumerate() {
        for (b, hb) in gout.iter().enumerate() {
            let keep = match subspace {
                MarginalSubspace::Full => true,
                // only H_0 has nonzero trace, so the marginal of G_a⊗H_b is
                // nonzero exactly when b == 0
                MarginalSubspace::UniformMarginal => !(b == 0 && a > 0),
                MarginalSubspace::ZeroMarginal => b != 0,
            };
            if keep {
                out.push(ga.kron(hb));
            }
        }
    }
    out
}
