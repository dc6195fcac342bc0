use approx::assert_abs_diff_eq;

use super::*;
use crate::env::{ArmSpec, BanditInstance, RiskParams};
use crate::oracle::ObjectivePoint;
use crate::ramgape::{empirical_pareto, Decision, IndexSnapshot, RoundState, StopReason};

fn five_arm_instance() -> BanditInstance {
    let arms = [
        (0.9, 0.01),
        (0.7, 0.01),
        (0.5, 0.01),
        (0.3, 0.01),
        (0.1, 0.01),
    ]
    .into_iter()
    .map(|(m, v)| ArmSpec::from_moments(m, v).unwrap())
    .collect();
    BanditInstance::with_rho(arms, 10.0).unwrap()
}

fn mixed_instance() -> BanditInstance {
    let arms = [
        (0.6, 0.05),
        (0.55, 0.01),
        (0.5, 0.08),
        (0.4, 0.005),
        (0.45, 0.1),
        (0.3, 0.02),
    ]
    .into_iter()
    .map(|(m, v)| ArmSpec::from_moments(m, v).unwrap())
    .collect();
    BanditInstance::with_rho(arms, 0.01).unwrap()
}

fn three_arms() -> Vec<ObjectivePoint> {
    vec![
        ObjectivePoint::new(0.6, 0.10),
        ObjectivePoint::new(0.5, 0.05),
        ObjectivePoint::new(0.45, 0.12),
    ]
}

fn fb(budget: u64) -> Setting {
    Setting::FixedBudget {
        budget,
        eps: 0.1,
        a: 0.5,
    }
}

fn fc(eps: f64) -> Setting {
    Setting::FixedConfidence {
        delta: 0.1,
        eps,
        round_cap: Some(200_000),
    }
}

/// Runs `alg` and hands every decision, with the state it was made on, to `check`.
fn run_checked(
    alg: Algorithm,
    instance: &BanditInstance,
    setting: Setting,
    seed: u64,
    check: impl FnMut(&RoundState, &Decision),
) -> RunResult {
    struct Checker<F>(F);
    impl<F: FnMut(&RoundState, &Decision)> Observer for Checker<F> {
        fn on_decision(&mut self, state: &RoundState, decision: &Decision) {
            (self.0)(state, decision)
        }
    }
    let mut env = SeededEnvironment::new(instance, seed);
    run_algorithm(
        &alg,
        setting,
        instance.risk(),
        &mut env,
        &mut Checker(check),
    )
    .unwrap()
}

/// Every arm returns the same constant reward, so all arms tie on the mean
/// and all are empirically Pareto optimal.
struct Constant(usize);

impl RewardSource for Constant {
    fn num_arms(&self) -> usize {
        self.0
    }
    fn pull(&mut self, _arm: usize) -> f64 {
        0.5
    }
}

fn all_fixed_budget() -> Vec<Algorithm> {
    [
        "ramgapeb", "rr", "lie-rr", "ra-lucb", "xi-lcb", "hvi", "egp",
    ]
    .iter()
    .map(|n| n.parse().unwrap())
    .collect()
}

fn all_fixed_confidence() -> Vec<Algorithm> {
    ["ramgapec", "rr", "de-rr", "ra-lucb"]
        .iter()
        .map(|n| n.parse().unwrap())
        .collect()
}

#[test]
fn names_round_trip() {
    for (name, _) in ALGORITHM_NAMES {
        let (alg, pinned) = Algorithm::parse_name(name).unwrap();
        let kind = pinned.unwrap_or(SettingKind::FixedBudget);
        assert!(alg.supports(kind));
        assert_eq!(alg.name(kind), name);
    }
    assert!(matches!(
        Algorithm::parse_name("ucb"),
        Err(Error::Config(_))
    ));
}

#[test]
fn setting_mismatch_is_a_config_error() {
    let inst = five_arm_instance();
    let mut env = SeededEnvironment::new(&inst, 1);
    for name in ["egp", "hvi", "xi-lcb", "lie-rr"] {
        let alg: Algorithm = name.parse().unwrap();
        let err =
            run_algorithm(&alg, fc(0.1), inst.risk(), &mut env, &mut NoopObserver).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{name}");
    }
    let err = run_algorithm(
        &Algorithm::DeRoundRobin,
        fb(100),
        inst.risk(),
        &mut env,
        &mut NoopObserver,
    )
    .unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn fixed_budget_is_spent_exactly_and_returns_empirical_set() {
    let inst = mixed_instance();
    for alg in all_fixed_budget() {
        for budget in [13, 100, 257] {
            let res = run_checked(alg, &inst, fb(budget), 3, |_, _| {});
            assert_eq!(res.stop_round, budget, "{}", res.algorithm);
            assert_eq!(res.pull_counts.iter().sum::<u64>(), budget);
            assert_eq!(res.stop_reason, StopReason::Budget);
            let pts: Vec<_> = res
                .arms
                .iter()
                .map(|a| ObjectivePoint::new(a.mu_hat, a.xi_hat))
                .collect();
            assert_eq!(res.returned_set, empirical_pareto(&pts));
            assert!(res.pull_counts.iter().all(|&n| n >= 2));
        }
    }
}

#[test]
fn all_algorithms_are_deterministic() {
    let inst = mixed_instance();
    for alg in all_fixed_budget() {
        let a = run_checked(alg, &inst, fb(300), 9, |_, _| {});
        let b = run_checked(alg, &inst, fb(300), 9, |_, _| {});
        assert_eq!(a, b);
    }
    for alg in all_fixed_confidence() {
        let a = run_checked(alg, &inst, fc(0.3), 9, |_, _| {});
        let b = run_checked(alg, &inst, fc(0.3), 9, |_, _| {});
        assert_eq!(a, b);
    }
}

#[test]
fn round_robin_cycles_evenly() {
    let inst = five_arm_instance();
    let res = run_round_robin(&inst, fb(10 + 5 * 7), 4).unwrap();
    assert_eq!(res.pull_counts, vec![9; 5]);
    let mut expected = 0;
    run_checked(Algorithm::RoundRobin, &inst, fb(40), 4, |state, d| {
        assert_eq!(d.arm, expected, "at t = {}", state.total_pulls());
        expected = (expected + 1) % 5;
    });
}

#[test]
fn round_robin_fixed_confidence_stops_on_rule() {
    let inst = five_arm_instance();
    let res = run_round_robin(&inst, fc(10.0), 1).unwrap();
    assert_eq!((res.stop_round, res.stop_reason), (10, StopReason::Rule));
    let res = run_round_robin(
        &inst,
        Setting::FixedConfidence {
            delta: 0.1,
            eps: 0.0,
            round_cap: Some(37),
        },
        1,
    )
    .unwrap();
    assert_eq!(
        (res.stop_round, res.stop_reason),
        (37, StopReason::RoundCap)
    );
}

#[test]
fn de_round_robin_only_pulls_unsettled_arms() {
    let inst = five_arm_instance();
    let eps = 0.1;
    let res = run_checked(Algorithm::DeRoundRobin, &inst, fc(eps), 2, |state, d| {
        if state.min_pulls() < 2 {
            return;
        }
        let snap = IndexSnapshot::from_state(state);
        let v = snap.ambiguity(d.arm).unwrap().0;
        assert!(snap.in_pareto()[d.arm] || v > eps);
    });
    assert_eq!(res.stop_reason, StopReason::Rule);
    let rr = run_round_robin(&inst, fc(eps), 2).unwrap();
    assert!(res.stop_round <= rr.stop_round + 5);
}

#[test]
fn de_round_robin_with_nothing_eliminated_is_round_robin() {
    // Wide intervals keep every ambiguity above eps, so no arm is skipped.
    let inst = five_arm_instance();
    let setting = Setting::FixedConfidence {
        delta: 0.1,
        eps: 0.0,
        round_cap: Some(60),
    };
    let de = run_de_round_robin(&inst, 0.1, 0.0, 5, Some(60)).unwrap();
    let rr = run_round_robin(&inst, setting, 5).unwrap();
    assert_eq!(de.pull_counts, rr.pull_counts);
    assert_eq!(de.stop_reason, StopReason::RoundCap);
}

#[test]
fn lie_round_robin_skips_least_ambiguous_arm() {
    let snap = IndexSnapshot::from_parts(three_arms(), &[0.01; 3]);
    let v = snap.ambiguities().unwrap();
    assert_eq!(argmin(v.iter().copied().enumerate()), Some(0));

    let inst = mixed_instance();
    let res = run_checked(Algorithm::LieRoundRobin, &inst, fb(400), 6, |state, d| {
        if state.min_pulls() < 2 {
            return;
        }
        let v = IndexSnapshot::from_state(state).ambiguities().unwrap();
        assert_ne!(Some(d.arm), argmin(v.iter().copied().enumerate()));
    });
    assert_eq!(res.stop_round, 400);
}

#[test]
fn lie_round_robin_with_two_arms() {
    let arms = vec![
        ArmSpec::from_moments(0.7, 0.02).unwrap(),
        ArmSpec::from_moments(0.3, 0.02).unwrap(),
    ];
    let inst = BanditInstance::with_rho(arms, 1.0).unwrap();
    let res = run_lie_round_robin(&inst, 50, 0.1, 0.5, 1).unwrap();
    assert_eq!(res.pull_counts.iter().sum::<u64>(), 50);
}

#[test]
fn ra_lucb_pulls_the_pair_and_truncates() {
    let inst = mixed_instance();
    let k = 6;
    let budget = 2 * k + 2 * 20 + 1;
    let mut decisions = Vec::new();
    let res = run_checked(Algorithm::RaLucb, &inst, fb(budget), 8, |_, d| {
        decisions.push(*d)
    });
    assert_eq!(res.stop_round, budget);
    let adaptive = &decisions[2 * k as usize..];
    assert_eq!(adaptive.len(), 41);
    for pair in adaptive.chunks(2) {
        let sel = pair[0].selection.unwrap();
        assert_eq!(pair[0].arm, sel.most_ambiguous);
        if let Some(second) = pair.get(1) {
            assert_eq!(second.selection, Some(sel));
            assert_eq!(second.arm, sel.comparator);
        }
    }
}

#[test]
fn ra_lucb_fixed_confidence_stops() {
    let res = run_ra_lucb(&five_arm_instance(), fc(0.1), 3).unwrap();
    assert_eq!(res.stop_reason, StopReason::Rule);
}

#[test]
fn xi_lcb_pulls_the_lowest_risk_bound() {
    let inst = mixed_instance();
    run_checked(Algorithm::XiLcb, &inst, fb(300), 2, |state, d| {
        if state.min_pulls() < 2 {
            return;
        }
        let lcb: Vec<f64> = (0..state.num_arms())
            .map(|i| state.point(i).xi - state.beta(i))
            .collect();
        let min = lcb.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(lcb[d.arm], min);
        assert!(lcb[..d.arm].iter().all(|&v| v > min));
    });
}

#[test]
fn hvi_values() {
    let reference = HviConfig::default_for(0.01);
    assert_eq!(reference.ref_mu, 0.0);
    assert_abs_diff_eq!(reference.ref_xi, 0.25 / 3.01, epsilon = 1e-15);
    let v = hypervolume_improvement(ObjectivePoint::new(0.5, 0.03), reference);
    assert_abs_diff_eq!(v, 0.0265283, epsilon = 1e-6);
    let at_ref = ObjectivePoint::new(reference.ref_mu, reference.ref_xi);
    assert_eq!(hypervolume_improvement(at_ref, reference), 0.0);
    let odd = HviConfig {
        ref_mu: 0.8,
        ref_xi: 0.0,
    };
    assert!(hypervolume_improvement(ObjectivePoint::new(0.5, 0.1), odd) > 0.0);
}

#[test]
fn hvi_pulls_one_arm_when_everything_is_pareto() {
    let risk = RiskParams::new(0.01).unwrap();
    let mut src = Constant(4);
    let mut decisions = Vec::new();
    struct Log<'a>(&'a mut Vec<usize>);
    impl Observer for Log<'_> {
        fn on_decision(&mut self, _: &RoundState, d: &Decision) {
            self.0.push(d.arm)
        }
    }
    let alg = Algorithm::HviPareto { reference: None };
    let res = run_algorithm(&alg, fb(20), risk, &mut src, &mut Log(&mut decisions)).unwrap();
    assert_eq!(res.returned_set, vec![0, 1, 2, 3]);
    // Equal HVI everywhere: the lowest index wins every single-pull round.
    assert!(decisions[8..].iter().all(|&a| a == 0));
}

#[test]
fn hvi_pairs_inside_and_outside() {
    let inst = mixed_instance();
    let reference = HviConfig::default_for(0.01);
    let res = run_hvi_pareto(&inst, 301, 0.1, 0.5, reference, 4).unwrap();
    assert_eq!(res.stop_round, 301);
}

#[test]
fn egp_literal_gap_hand_example() {
    let gaps = empirical_gaps(&three_arms(), EgpGap::Literal).unwrap();
    // A against B: min(0.1, -0.05); A against C: min(0.15, 0.02).
    assert_abs_diff_eq!(gaps[0], 0.02, epsilon = 1e-12);
    // C is dominated by A: min over j of max(mu_j - mu_C, xi_C - xi_j).
    assert_abs_diff_eq!(gaps[2], 0.07, epsilon = 1e-12);
    let zero = empirical_gaps(&three_arms(), EgpGap::ZeroRadiusIndex).unwrap();
    let snap = IndexSnapshot::from_parts(three_arms(), &[0.0; 3])
        .ambiguities()
        .unwrap();
    assert_eq!(zero, snap);
}

#[test]
fn egp_prefers_less_pulled_arm_on_equal_gaps() {
    // Identical constant rewards give equal gaps; after initialization the
    // radii are equal too, so the selection cycles through the arms.
    let risk = RiskParams::new(0.01).unwrap();
    let mut src = Constant(3);
    let alg = Algorithm::Egp {
        gap: EgpGap::Literal,
    };
    let res = run_algorithm(&alg, fb(30), risk, &mut src, &mut NoopObserver).unwrap();
    assert_eq!(res.pull_counts, vec![10, 10, 10]);
}
