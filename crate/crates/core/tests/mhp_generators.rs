//! Generated Monty Hall scenarios against a direct enumeration of the game.

mod common;

use std::collections::BTreeMap;

use common::q;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use infotransfer::scenario::{door_labels, opens_car_label, opens_label};
use infotransfer::*;

/// Walk every (car, door opened) play of the game and accumulate the
/// probability of each host action, keyed by (action, car).
fn play_out(prior: &[BigRational], pick: usize, policy: HostPolicy) -> BTreeMap<(String, usize), BigRational> {
    let doors = door_labels(prior.len());
    let mut joint = BTreeMap::new();
    for (car, p_car) in prior.iter().enumerate() {
        let choices: Vec<usize> = match policy {
            HostPolicy::Standard => (0..doors.len()).filter(|&d| d != pick && d != car).collect(),
            HostPolicy::Forgetful => (0..doors.len()).filter(|&d| d != pick).collect(),
        };
        let each = p_car / BigRational::from_integer(choices.len().into());
        for d in choices {
            let action = if d == car {
                opens_car_label(&doors[d])
            } else {
                opens_label(&doors[d])
            };
            *joint.entry((action, car)).or_insert_with(BigRational::zero) += &each;
        }
    }
    joint
}

fn prior_strategy(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(0u32..6, n)
        .prop_filter("positive mass", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: u32 = w.iter().sum();
            w.iter().map(|&x| q(x as i64, total as i64)).collect()
        })
}

fn config_strategy() -> impl Strategy<Value = (Vec<BigRational>, usize, HostPolicy)> {
    (3usize..=7).prop_flat_map(|n| {
        (
            prior_strategy(n),
            0..n,
            prop_oneof![Just(HostPolicy::Standard), Just(HostPolicy::Forgetful)],
        )
    })
}

proptest! {
    #[test]
    fn generator_matches_game_enumeration((prior, pick, policy) in config_strategy()) {
        let doors = door_labels(prior.len());
        let probs = prior.iter().map(|r| Probability::from_rational(r.clone()).unwrap()).collect();
        let cfg = MhpConfig::new(prior.len(), Some(probs), &doors[pick], policy).unwrap();
        let s = mhp_scenario(&cfg).unwrap();
        let (ms, om) = (s.model_space(), s.observation_model());
        let played = play_out(&prior, pick, policy);

        for x in om.observation_labels() {
            let expected_evidence = played
                .iter()
                .filter(|((a, _), _)| a == x)
                .fold(BigRational::zero(), |acc, (_, p)| acc + p);
            let ev = evidence(ms, om, x).unwrap();
            prop_assert_eq!(ev.as_rational().unwrap(), &expected_evidence);
            if expected_evidence.is_zero() {
                continue;
            }
            for (car, label) in doors.iter().enumerate() {
                let joint = played.get(&(x.clone(), car)).cloned().unwrap_or_else(BigRational::zero);
                let post = posterior_prob_oracle(ms, om, x, label).unwrap();
                prop_assert_eq!(post.as_rational().unwrap(), &(joint / &expected_evidence));
            }
        }
        // every action the game can produce is an observation of the scenario
        for (action, _) in played.keys() {
            prop_assert!(om.observation_labels().contains(action));
        }
        for j in 0..doors.len() {
            let col = om.likelihood().iter().fold(BigRational::zero(), |acc, row| acc + row[j].as_rational().unwrap());
            prop_assert!(col.is_one());
        }
        prop_assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn standard_host_leaves_pick_at_one_over_n(n in 3usize..=9, pick in 0usize..9, open in 0usize..9) {
        prop_assume!(pick < n && open < n && pick != open);
        let doors = door_labels(n);
        let s = mhp_scenario(&MhpConfig::new(n, None, &doors[pick], HostPolicy::Standard).unwrap()).unwrap();
        let post = posterior_prob_oracle(s.model_space(), s.observation_model(), &opens_label(&doors[open]), &doors[pick]).unwrap();
        prop_assert_eq!(post.as_rational().unwrap(), &q(1, n as i64));
    }
}

#[test]
fn four_door_standard_host() {
    let doors = door_labels(4);
    let s = mhp_scenario(&MhpConfig::new(4, None, "A", HostPolicy::Standard).unwrap()).unwrap();
    let (ms, om) = (s.model_space(), s.observation_model());
    let x = opens_label(&doors[1]);
    assert_eq!(evidence(ms, om, &x).unwrap().as_rational().unwrap(), &q(1, 3));

    let played = play_out(&[q(1, 4), q(1, 4), q(1, 4), q(1, 4)], 0, HostPolicy::Standard);
    let report = transfer_report(ms, om, &x).unwrap();
    let expected = [q(1, 4), q(0, 1), q(3, 8), q(3, 8)];
    for (car, e) in report.entries.iter().enumerate() {
        let joint = played.get(&(x.clone(), car)).cloned().unwrap_or_else(BigRational::zero);
        assert_eq!(joint * BigRational::from_integer(3.into()), expected[car]);
        let oracle = posterior_prob_oracle(ms, om, &x, &e.model).unwrap();
        assert_eq!(oracle.as_rational().unwrap(), &expected[car]);
        assert!((e.posterior_prob.value() - num_traits::ToPrimitive::to_f64(&expected[car]).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn five_door_custom_passes_invariants() {
    let s = mhp_scenario(&MhpConfig::new(5, None, "A", HostPolicy::Standard).unwrap()).unwrap();
    assert_eq!(s.model_space().labels(), ["A", "B", "C", "D4", "D5"]);
    assert_eq!(s.observation_model().observation_labels(), ["Monty_B", "Monty_C", "Monty_D4", "Monty_D5"]);
    assert!(s.is_exact());
    let out = report::verify_scenario(&s).unwrap();
    assert!(out.passed());
}
