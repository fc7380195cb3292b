#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use infotransfer::{ModelSpace, ObservationModel, Probability, Scenario};

/// Integer weights normalized to an exact distribution; at least one weight is positive.
fn normalize(weights: &[u32]) -> Vec<Probability> {
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    weights
        .iter()
        .map(|&w| {
            Probability::from_rational(BigRational::new((w as i64).into(), (total as i64).into()))
                .unwrap()
        })
        .collect()
}

fn weights(len: usize, max: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max, len).prop_filter("needs positive mass", |w| w.iter().any(|&x| x > 0))
}

/// Random exact scenario with up to `max_models` models and `max_obs` observations.
/// Zero weights are common so refuted models and impossible observations occur.
pub fn rational_scenario(max_models: usize, max_obs: usize) -> impl Strategy<Value = Scenario> {
    (1..=max_models, 1..=max_obs).prop_flat_map(|(n, m)| {
        (weights(n, 12), prop::collection::vec(weights(m, 9), n)).prop_map(move |(prior, cols)| {
            let labels: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
            let ms = ModelSpace::from_parts(labels, normalize(&prior)).unwrap();
            let cols: Vec<Vec<Probability>> = cols.iter().map(|c| normalize(c)).collect();
            let rows = (0..m).map(|x| cols.iter().map(|c| c[x].clone()).collect()).collect();
            let obs = (0..m).map(|i| format!("x{i}")).collect();
            let om = ObservationModel::new(obs, rows, &ms).unwrap();
            Scenario::new("random", ms, om, BTreeMap::new()).unwrap()
        })
    })
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
