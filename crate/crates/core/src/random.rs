//! Seeded random states, channels and superchannels.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{measure_and_prepare, PovmEnsemble, QuantumChannel, SuperchannelSpec};
use crate::linalg::{inv_sqrt_psd, ComplexMatrix, DensityOperator, HermitianOperator};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phases of
/// `R`'s diagonal removed).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..d {
        let z = r[(k, k)];
        let phase = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<Complex64> {
    let v = ginibre(d, 1, rng).column(0).into_owned();
    let n = v.norm();
    v.unscale(n)
}

/// Hilbert–Schmidt random mixed state.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(crate::linalg::hermitian_part(&m.unscale(tr)))
        .expect("normalized Wishart matrix is a state")
}

/// Channel from a random isometry `A0 → A1 ⊗ K` with `K` of dimension
/// `kraus_rank`.
pub fn random_channel<R: Rng + ?Sized>(
    dim_in: usize,
    dim_out: usize,
    kraus_rank: usize,
    rng: &mut R,
) -> QuantumChannel {
    let g = ginibre(dim_out * kraus_rank, dim_in, rng);
    let s = inv_sqrt_psd(&(g.adjoint() * &g)).expect("Gram matrix is positive definite");
    let v = g * s;
    let ops = (0..kraus_rank)
        .map(|k| v.rows(k * dim_out, dim_out).into_owned())
        .collect();
    QuantumChannel::from_kraus(dim_in, dim_out, ops, "random").expect("isometry gives a channel")
}

/// POVM with `outcomes` effects `S^{-1/2} G_i S^{-1/2}`, `G_i` Wishart.
pub fn random_povm<R: Rng + ?Sized>(
    d: usize,
    outcomes: usize,
    rng: &mut R,
) -> Vec<HermitianOperator> {
    let gs: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let a = ginibre(d, d, rng);
            &a * a.adjoint()
        })
        .collect();
    let s = gs.iter().fold(ComplexMatrix::zeros(d, d), |acc, g| acc + g);
    let w = inv_sqrt_psd(&s).expect("sum of Wishart matrices is positive definite");
    gs.iter()
        .map(|g| HermitianOperator::from_hermitian_part(&(&w * g * &w)))
        .collect()
}

pub fn random_measure_prepare<R: Rng + ?Sized>(
    dim_in: usize,
    dim_out: usize,
    outcomes: usize,
    rng: &mut R,
) -> QuantumChannel {
    let effects = random_povm(dim_in, outcomes, rng);
    let states = (0..outcomes)
        .map(|_| random_density(dim_out, rng))
        .collect();
    measure_and_prepare(&PovmEnsemble::new(effects, states).expect("random ensemble is valid"))
}

/// Random pre/post-processing for channels `a0 → a1` with a classical
/// register of dimension `e`, mapping `b0 → b1`.
pub fn random_free_superchannel<R: Rng + ?Sized>(
    b0: usize,
    a0: usize,
    a1: usize,
    b1: usize,
    e: usize,
    rng: &mut R,
) -> SuperchannelSpec {
    let pre = random_channel(b0, e * a0, 2, rng);
    let post = random_channel(a1 * e, b1, 2, rng);
    SuperchannelSpec::new(pre, post, e).expect("dimensions chain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    #[test]
    fn haar_is_unitary() {
        let mut rng = seeded(1);
        for d in 1..5 {
            let u = haar_unitary(d, &mut rng);
            assert!((u.adjoint() * &u - identity(d)).norm() < 1e-12);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_density(3, &mut seeded(9));
        let b = random_density(3, &mut seeded(9));
        assert_eq!(a, b);
    }

    #[test]
    fn povm_is_complete() {
        let mut rng = seeded(4);
        let effects = random_povm(3, 5, &mut rng);
        let sum = effects
            .iter()
            .fold(ComplexMatrix::zeros(3, 3), |acc, e| acc + e.matrix());
        assert!((sum - identity(3)).norm() < 1e-12);
        assert!(effects.iter().all(|e| e.min_eigenvalue() > -1e-12));
    }

    #[test]
    fn random_channels_are_cptp() {
        let mut rng = seeded(6);
        for rank in 1..=4 {
            assert!(random_channel(2, 3, rank, &mut rng).is_cptp());
        }
    }
}
