use super::*;
use crate::channel::{
    compose, depolarizing, erasure, identity_channel, maximal_replacement, mix, stochastic_damping,
    tensor, unitary,
};
use crate::linalg::{max_entangled, trace_inner};
use crate::random::{haar_unitary, random_channel, random_measure_prepare, seeded};

fn w(n: &QuantumChannel) -> WeightResult {
    weight_sdp(n, WeightOptions::default()).unwrap()
}

fn check_result(n: &QuantumChannel, r: &WeightResult) {
    let j = n.choi();
    let dual = 1.0 - r.witness.trace_with(j.matrix());
    assert!(
        (dual - r.value).abs() < 1e-6,
        "duality {dual} vs {}",
        r.value
    );
    assert!(r.witness.min_eigenvalue() > -1e-7);
    if let Some(free) = &r.free_part {
        let rest = j.matrix() - free.matrix().scale(1.0 - r.value);
        assert!(crate::linalg::min_eigenvalue(&rest) > -1e-8);
        assert!(free.is_ppt(1e-8));
    }
}

#[test]
fn depolarizing_grid() {
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let n = depolarizing(2, p).unwrap();
        let r = w(&n);
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!(
            (r.value - expected).abs() < 1e-6,
            "p={p}: {} vs {expected}",
            r.value
        );
        assert_eq!(r.exactness, Exactness::Exact);
        check_result(&n, &r);
    }
}

#[test]
fn erasure_half() {
    let n = erasure(0.5).unwrap();
    let r = w(&n);
    assert!((r.value - 0.5).abs() < 1e-6);
    check_result(&n, &r);
}

#[test]
fn unitaries_have_full_weight() {
    let mut rng = seeded(31);
    for _ in 0..5 {
        let n = unitary(haar_unitary(2, &mut rng)).unwrap();
        let r = w(&n);
        assert!(r.value >= 1.0 - 1e-6, "{}", r.value);
        assert!(r.free_part.is_none());
        check_result(&n, &r);
    }
}

#[test]
fn replacement_has_zero_weight() {
    let n = maximal_replacement(2, 2);
    let r = w(&n);
    assert!(r.value <= 1e-8, "{}", r.value);
    check_result(&n, &r);
}

/// Feasible free part for damping(p): diag(a, 0, b, c) in the |i o⟩ basis
/// with b = (1−p)/2 and a = (1−p)/2, c = a − b. It certifies C_w ≤ p.
fn damping_free_part(p: f64) -> ComplexMatrix {
    let a = (1.0 - p) / 2.0;
    let mut x = ComplexMatrix::zeros(4, 4);
    x[(0, 0)] = a.into();
    x[(2, 2)] = a.into();
    x
}

#[test]
fn damping_weight_is_p() {
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let n = stochastic_damping(p).unwrap();
        let j = n.choi();
        let x = damping_free_part(p);
        let rest = j.matrix() - &x;
        assert!(crate::linalg::min_eigenvalue(&rest) > -1e-12);
        assert!(crate::linalg::is_ppt(&x, j.shape(), 1e-12).unwrap());
        let r = w(&n);
        assert!((r.value - p).abs() < 1e-6, "p={p}: {}", r.value);
        check_result(&n, &r);
    }
}

#[test]
fn witness_examples() {
    for p in [0.4, 0.7, 1.0] {
        let n = depolarizing(2, p).unwrap();
        let wt = weight_dual_witness(&n).unwrap();
        let v = wt.trace_with(n.choi().matrix());
        assert!((v - (3.0 - 3.0 * p) / 2.0).abs() < 1e-6, "p={p}: {v}");
    }
    let id = identity_channel(3);
    let wt = weight_dual_witness(&id).unwrap();
    assert!((1.0 - wt.trace_with(id.choi().matrix()) - 1.0).abs() < 1e-6);
    let r = maximal_replacement(2, 2);
    let wt = weight_dual_witness(&r).unwrap();
    assert!((1.0 - wt.trace_with(r.choi().matrix())).abs() < 1e-6);
}

#[test]
fn robustness_values() {
    for p in [0.0, 0.3, 0.5, 0.8, 1.0] {
        let r = robustness_sdp(&depolarizing(2, p).unwrap(), SolverOptions::default()).unwrap();
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!((r.value - expected).abs() < 1e-6, "p={p}: {}", r.value);
    }
    let eb = robustness_sdp(&maximal_replacement(2, 2), SolverOptions::default()).unwrap();
    assert!(eb.value < 1e-6);
    // The identity needs one unit of noise: C_r ≥ d λ_max − 1 = 1, and the
    // noise (I − Ψ⁺)/3 achieves it.
    let id = robustness_sdp(&identity_channel(2), SolverOptions::default()).unwrap();
    assert!((id.value - 1.0).abs() < 1e-6, "{}", id.value);
    let mixed = id.mixing_state.unwrap();
    let s = id.value;
    let j = (identity_channel(2).choi().matrix() + mixed.matrix().scale(s)).unscale(1.0 + s);
    assert!(crate::linalg::is_ppt(&j, BipartiteShape::new(2, 2), 1e-8).unwrap());
}

#[test]
fn eig_bound_examples() {
    for p in [0.4, 0.6, 1.0] {
        let b = lower_bound_eig(&depolarizing(2, p).unwrap());
        assert!((b - (3.0 * p - 1.0) / 6.0).abs() < 1e-12);
    }
    assert!((lower_bound_eig(&identity_channel(2)) - 1.0 / 3.0).abs() < 1e-12);
    let mut rng = seeded(12);
    for _ in 0..10 {
        assert!(lower_bound_eig(&random_measure_prepare(2, 2, 3, &mut rng)) < 1e-12);
    }
}

#[test]
fn qubit_t_examples() {
    let id = lower_bound_qubit_t(&identity_channel(2)).unwrap();
    assert!((id.raw - 1.0).abs() < 1e-9 && (id.clamped - 1.0).abs() < 1e-9);
    for p in [0.5, 0.8] {
        let b = lower_bound_qubit_t(&depolarizing(2, p).unwrap()).unwrap();
        let expected = (3.0 * p - 1.0) / (2.0 * p.powf(0.75));
        assert!((b.raw - expected).abs() < 1e-9);
    }
    let r = lower_bound_qubit_t(&maximal_replacement(2, 2)).unwrap();
    assert!(r.numerator.abs() < 1e-12 && r.clamped == 0.0);
    assert!(lower_bound_qubit_t(&erasure(0.5).unwrap()).is_err());
}

#[test]
fn relation_examples() {
    let rel = weight_robustness_relation(&depolarizing(2, 0.8).unwrap(), WeightOptions::default())
        .unwrap();
    assert!((rel.lhs - 0.7).abs() < 1e-6 && (rel.rhs - 0.7 / 3.0).abs() < 1e-6 && rel.holds);
    let eb =
        weight_robustness_relation(&maximal_replacement(2, 2), WeightOptions::default()).unwrap();
    assert!(eb.holds && eb.lhs < 1e-6);
}

#[test]
fn distillation_examples() {
    let opts = WeightOptions::default();
    let d = distillation_bound(&depolarizing(2, 0.5).unwrap(), 2, None, opts).unwrap();
    assert!((d.epsilon_lower_dimensional - 0.375).abs() < 1e-6);
    let d = distillation_bound(&maximal_replacement(2, 2), 2, None, opts).unwrap();
    assert!((d.epsilon_lower_dimensional - 0.5).abs() < 1e-6);
    let d = distillation_bound(&identity_channel(2), 2, None, opts).unwrap();
    assert!(d.epsilon_lower_dimensional.abs() < 1e-6);
}

#[test]
fn random_channels_satisfy_bounds() {
    let mut rng = seeded(40);
    for i in 0..10 {
        let n = random_channel(2, 2, 1 + i % 4, &mut rng);
        let r = w(&n);
        check_result(&n, &r);
        assert!(lower_bound_eig(&n) <= r.value + 1e-6);
    }
}

#[test]
fn marginal_free_weight_is_smaller() {
    // Dropping the marginal constraint enlarges the free set.
    let mut rng = seeded(41);
    for _ in 0..5 {
        let n = random_channel(2, 2, 2, &mut rng);
        let with = w(&n).value;
        let without = weight_sdp(
            &n,
            WeightOptions {
                enforce_marginal: false,
                ..Default::default()
            },
        )
        .unwrap()
        .value;
        assert!(without <= with + 1e-6);
    }
}

#[test]
fn convexity_and_invariance() {
    let mut rng = seeded(42);
    for _ in 0..3 {
        let a = random_channel(2, 2, 2, &mut rng);
        let b = random_channel(2, 2, 3, &mut rng);
        let (wa, wb) = (w(&a).value, w(&b).value);
        for p in [0.25, 0.5, 0.75] {
            let m = w(&mix(p, &a, &b).unwrap()).value;
            assert!(m <= p * wa + (1.0 - p) * wb + 1e-6);
        }
        let u = unitary(haar_unitary(2, &mut rng)).unwrap();
        let v = unitary(haar_unitary(2, &mut rng)).unwrap();
        let rotated = compose(&v, &compose(&a, &u).unwrap()).unwrap();
        assert!((w(&rotated).value - wa).abs() < 1e-6);
    }
}

#[test]
fn tensor_weight_is_subadditive() {
    let mut rng = seeded(43);
    let a = random_channel(2, 2, 2, &mut rng);
    let b = depolarizing(2, 0.6).unwrap();
    let (wa, wb) = (w(&a).value, w(&b).value);
    let r = w(&tensor(&a, &b));
    assert_eq!(r.exactness, Exactness::PptLowerBound);
    assert!(r.value <= tensor_subadditivity_bound(wa, wb).unwrap() + 1e-6);
}

#[test]
fn witness_separates_free_channels() {
    let n = depolarizing(2, 0.9).unwrap();
    let wt = weight_dual_witness(&n).unwrap();
    let mut rng = seeded(44);
    for _ in 0..20 {
        let eb = random_measure_prepare(2, 2, 4, &mut rng).choi();
        assert!(wt.trace_with(eb.matrix()) >= 1.0 - 1e-6);
        let any = random_channel(2, 2, 3, &mut rng).choi();
        assert!(wt.trace_with(any.matrix()) >= -1e-6);
    }
    // 2I − 2Ψ⁺ is an optimal witness; the solver's may differ but agrees in value
    let analytic = crate::linalg::identity(4).scale(2.0) - max_entangled(2).scale(2.0);
    assert!(
        (trace_inner(&analytic, n.choi().matrix()) - wt.trace_with(n.choi().matrix())).abs() < 1e-6
    );
}

#[test]
fn rejects_oversized() {
    let big = identity_channel(9);
    assert!(weight_sdp(&big, WeightOptions::default()).is_err());
}
