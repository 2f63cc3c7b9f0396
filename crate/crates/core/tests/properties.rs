//! Randomized algebraic identities.

use memweight_core::channel::depolarizing;
use memweight_core::linalg::{kron, partial_trace, partial_transpose, trace_inner, Side};
use memweight_core::random::{ginibre, random_channel, seeded};
use memweight_core::weight::{analytic_weight, tensor_subadditivity_bound, AnalyticKind};
use memweight_core::BipartiteShape;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(seed in 0u64..10_000, da in 1usize..4, db in 1usize..4) {
        let mut rng = seeded(seed);
        let m = ginibre(da * db, da * db, &mut rng);
        let shape = BipartiteShape::new(da, db);
        let twice = partial_transpose(
            &partial_transpose(&m, shape, Side::First).unwrap(), shape, Side::First,
        ).unwrap();
        prop_assert!((twice - &m).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(seed in 0u64..10_000, da in 1usize..4, db in 1usize..4) {
        let mut rng = seeded(seed);
        let a = ginibre(da, da, &mut rng);
        let b = ginibre(db, db, &mut rng);
        let shape = BipartiteShape::new(da, db);
        let t = partial_trace(&kron(&a, &b), shape, Side::Second).unwrap();
        prop_assert!((t - a.map(|z| z * b.trace())).norm() < 1e-10);
    }

    #[test]
    fn subadditivity_bound_dominates_factors(s1 in 0.0f64..=1.0, s2 in 0.0f64..=1.0) {
        let b = tensor_subadditivity_bound(s1, s2).unwrap();
        prop_assert!(b >= s1.max(s2) - 1e-15 && b <= 1.0 + 1e-15);
    }

    #[test]
    fn choi_pairing_is_real(seed in 0u64..10_000, rank in 1usize..4) {
        let mut rng = seeded(seed);
        let a = random_channel(2, 2, rank, &mut rng).choi();
        let b = random_channel(2, 2, rank, &mut rng).choi();
        let x = trace_inner(a.matrix(), b.matrix());
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&x));
    }

    #[test]
    fn depolarizing_closed_form_is_monotone(p in 0.0f64..1.0, dp in 0.0f64..0.1) {
        let q = (p + dp).min(1.0);
        let a = analytic_weight(AnalyticKind::Depolarizing, p).unwrap();
        let b = analytic_weight(AnalyticKind::Depolarizing, q).unwrap();
        prop_assert!(b >= a);
        prop_assert!(depolarizing(2, p).is_ok());
    }
}
