//! Exclusion-game payoffs and the lower bounds, checked against values
//! worked out by hand.

use memweight_core::channel::{depolarizing, erasure, identity_channel, maximal_replacement};
use memweight_core::games::{
    advantage_ratio, classical_max_payoff, classical_min_payoff, game_operator, max_payoff_check,
    payoff_choi, payoff_direct, payoff_report, Game, GameDescriptor,
};
use memweight_core::linalg::{identity, ketbra, max_entangled};
use memweight_core::random::{random_channel, seeded};
use memweight_core::weight::{
    bound_report, distillation_bound, lower_bound_eig, lower_bound_qubit_t, robustness_sdp,
    weight_robustness_relation, weight_sdp, WeightOptions,
};
use memweight_core::{BipartiteShape, DensityOperator, Error, HermitianOperator};
use nalgebra::DMatrix;

fn star() -> HermitianOperator {
    HermitianOperator::from_hermitian_part(&(identity(4).scale(2.0) - max_entangled(2).scale(2.0)))
}

#[test]
fn depolarizing_payoff_in_star_game() {
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let v = payoff_choi(&depolarizing(2, p).unwrap(), &star()).unwrap();
        assert!((v - 1.5 * (1.0 - p)).abs() < 1e-12);
    }
}

#[test]
fn star_game_classical_range() {
    let shape = BipartiteShape::new(2, 2);
    // max: the bit-flip Choi state has no Ψ⁺ overlap; min: Ψ⁺ overlap 1/2
    assert!((classical_max_payoff(&star(), shape).unwrap() - 2.0).abs() < 1e-6);
    assert!((classical_min_payoff(&star(), shape).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn advantage_ratio_of_the_star_game() {
    // payoff (3 − 3p)/2 over the classical maximum 2
    let n = depolarizing(2, 0.6).unwrap();
    let r = advantage_ratio(&n, &star()).unwrap();
    assert!((r - 0.3).abs() < 1e-6);
}

#[test]
fn game_outside_the_classical_set_is_rejected() {
    let w = HermitianOperator::from_hermitian_part(&max_entangled(2));
    let err = advantage_ratio(&identity_channel(2), &w).unwrap_err();
    assert!(matches!(err, Error::GameOutsideClassicalSet(_)));
}

#[test]
fn optimal_witness_payoff_is_one_minus_weight() {
    let mut rng = seeded(17);
    for i in 0..6 {
        let n = random_channel(2, 2, 1 + i % 4, &mut rng);
        let c = max_payoff_check(&n).unwrap();
        assert!(c.agree, "{c:?}");
    }
    let c = max_payoff_check(&erasure(0.3).unwrap()).unwrap();
    assert!((c.one_minus_weight - 0.7).abs() < 1e-6);
}

#[test]
fn direct_and_choi_payoffs_agree() {
    let states = vec![
        DensityOperator::new(ketbra(2, 0, 0)).unwrap(),
        DensityOperator::maximally_mixed(2),
    ];
    let obs = vec![
        HermitianOperator::new(ketbra(3, 2, 2)).unwrap(),
        HermitianOperator::identity(3),
    ];
    let alpha = DMatrix::from_row_slice(2, 2, &[0.5, -0.25, 1.0, 0.1]);
    let g = Game::new(states, obs, alpha).unwrap();
    let n = erasure(0.4).unwrap();
    let a = payoff_direct(&n, &g).unwrap();
    let b = payoff_choi(&n, &game_operator(&g, 2).unwrap()).unwrap();
    assert!((a - b).abs() < 1e-12);
    // by hand: erased fraction 0.6 lands on |2⟩
    let expect = 0.5 * 0.6 - 0.25 + 1.0 * 0.6 + 0.1;
    assert!((a - expect).abs() < 1e-12);
}

#[test]
fn game_descriptor_json() {
    let text = r#"{
        "states": [[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]],
        "observables": [[[[1,0],[0,0]],[[0,0],[1,0]]]],
        "alpha": [[1.0]]
    }"#;
    let g = GameDescriptor::from_json(text).unwrap().to_game().unwrap();
    let w = game_operator(&g, 2).unwrap();
    assert!((w.matrix() - identity(4)).norm() < 1e-12);
    let r = payoff_report(&maximal_replacement(2, 2), &g).unwrap();
    assert!((r.payoff - 1.0).abs() < 1e-12);
    assert_eq!(
        r.advantage_ratio.map(|x| (x - 1.0).abs() < 1e-6),
        Some(true)
    );
    assert!(GameDescriptor::from_json(r#"{"states": []}"#).is_err());
}

#[test]
fn eigenvalue_bound_values() {
    // λ_max of the depolarizing Choi state is (1 + 3p)/4
    let n = depolarizing(2, 0.8).unwrap();
    assert!((lower_bound_eig(&n) - (3.0 * 0.8 - 1.0) / 6.0).abs() < 1e-12);
    assert_eq!(lower_bound_eig(&depolarizing(2, 0.2).unwrap()), 0.0);
}

#[test]
fn qubit_t_bound_of_identity() {
    let t = lower_bound_qubit_t(&identity_channel(2)).unwrap();
    assert!((t.raw - 1.0).abs() < 1e-9);
    assert!(lower_bound_qubit_t(&erasure(0.5).unwrap()).is_err());
}

#[test]
fn robustness_values() {
    let r = robustness_sdp(&depolarizing(2, 0.2).unwrap(), Default::default()).unwrap();
    assert!(r.value < 1e-6);
    let r = robustness_sdp(&identity_channel(2), Default::default()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-6);
    let rel = weight_robustness_relation(&identity_channel(2), WeightOptions::default()).unwrap();
    assert!(rel.holds);
}

#[test]
fn bound_report_orders_bounds() {
    let mut rng = seeded(23);
    for _ in 0..5 {
        let n = random_channel(2, 2, 2, &mut rng);
        let b = bound_report(&n, None, WeightOptions::default()).unwrap();
        assert!(b.consistent(1e-6));
        assert!(b.eig_lower <= b.sdp_value + 1e-6);
    }
}

#[test]
fn distillation_error_bounds() {
    let n = depolarizing(2, 0.6).unwrap();
    let w = weight_sdp(&n, WeightOptions::default()).unwrap().value;
    let d = distillation_bound(&n, 2, Some(0.9), WeightOptions::default()).unwrap();
    assert!((d.free_component - (1.0 - w)).abs() < 1e-12);
    assert!((d.epsilon_lower_dimensional - 0.5 * (1.0 - w)).abs() < 1e-12);
    assert!((d.epsilon_lower_general.unwrap() - 0.1 * (1.0 - w)).abs() < 1e-12);
    assert!(distillation_bound(&n, 1, None, WeightOptions::default()).is_err());
}
