//! Acceptance criteria. Run with `cargo test -p infotransfer --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::process::Command;
use std::time::Instant;

use num_traits::ToPrimitive;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use infotransfer::oracle::{enumerate_joint, oracle_metrics};
use infotransfer::*;

const CROSS_PATH: f64 = 1e-9;
const IDENTITY: f64 = 1e-12;
const PUBLISHED_DECIMALS: f64 = 1e-7;
const RANDOM_SCENARIOS: usize = 1000;

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn within(label: &str, actual: f64, expected: f64, tol: f64) -> Check {
    ensure!(
        actual == expected || (actual - expected).abs() <= tol,
        "{label}: got {actual}, expected {expected} (tol {tol:e})"
    );
    Ok(())
}

fn info_posterior(s: &Scenario, x: &str, theta: &str) -> std::result::Result<f64, String> {
    posterior_prob_info_form(s.model_space(), s.observation_model(), x, theta)
        .map(|p| p.value())
        .map_err(|e| e.to_string())
}

fn tic_bits(s: &Scenario, x: &str, theta: &str) -> std::result::Result<f64, String> {
    tic(s.model_space(), s.observation_model(), x, theta)
        .map(Bits::value)
        .map_err(|e| e.to_string())
}

fn traditional_posteriors_and_tic() -> Check {
    let s = MhpVariant::Traditional.scenario();
    within("P(A|Monty_B)", info_posterior(&s, "Monty_B", "A")?, 1.0 / 3.0, CROSS_PATH)?;
    within("P(C|Monty_B)", info_posterior(&s, "Monty_B", "C")?, 2.0 / 3.0, CROSS_PATH)?;
    within("TIC(Monty_B->A)", tic_bits(&s, "Monty_B", "A")?, 0.0, IDENTITY)?;
    within("TIC(Monty_B->C)", tic_bits(&s, "Monty_B", "C")?, 1.0, IDENTITY)
}

fn traditional_kl_and_mi() -> Check {
    let s = MhpVariant::Traditional.scenario();
    let (ms, om) = (s.model_space(), s.observation_model());
    let e = |e: Error| e.to_string();
    within("KL expected-TIC", kl_expected_tic(ms, om, "Monty_B").map_err(e)?.value, 2.0 / 3.0, CROSS_PATH)?;
    within("KL classical", kl_classical(ms, om, "Monty_B").map_err(e)?.value(), 2.0 / 3.0, CROSS_PATH)?;
    within("MI expected-TIC", mutual_information(ms, om).map_err(e)?.value, 2.0 / 3.0, CROSS_PATH)?;
    within("MI classical", mutual_information_classical(ms, om).map_err(e)?.value(), 2.0 / 3.0, CROSS_PATH)
}

fn biased_negative_information() -> Check {
    let s = MhpVariant::Biased.scenario();
    within("P(A|Monty_C)", info_posterior(&s, "Monty_C", "A")?, 3.0 / 7.0, CROSS_PATH)?;
    within("P(B|Monty_C)", info_posterior(&s, "Monty_C", "B")?, 4.0 / 7.0, CROSS_PATH)?;
    let t = tic_bits(&s, "Monty_C", "A")?;
    within("TIC(Monty_C->A)", t, (12f64 / 7.0).log2() - 1.0, PUBLISHED_DECIMALS)?;
    within("TIC(Monty_C->A) decimal", t, -0.2223924, PUBLISHED_DECIMALS)?;
    let class = classify_tic(Bits::new(t).map_err(|e| e.to_string())?);
    ensure!(class == SignClass::Misleads, "sign class {class}, expected misleads");

    let table = enumerate_joint(&s).map_err(|e| e.to_string())?;
    let m = oracle_metrics(&table, "Monty_B").map_err(|e| e.to_string())?;
    let a = m.model("A").unwrap().posterior.to_f64().unwrap();
    let c = m.model("C").unwrap().posterior.to_f64().unwrap();
    within("oracle P(A|Monty_B)", a, 3.0 / 5.0, CROSS_PATH)?;
    within("oracle P(C|Monty_B)", c, 2.0 / 5.0, CROSS_PATH)
}

fn forgetful_partial_information() -> Check {
    let s = MhpVariant::Forgetful.scenario();
    for (theta, expected) in [("A", 0.5), ("B", 0.0), ("C", 0.5)] {
        within(&format!("P({theta}|Monty_B)"), info_posterior(&s, "Monty_B", theta)?, expected, CROSS_PATH)?;
    }
    for theta in ["A", "C"] {
        let t = tic_bits(&s, "Monty_B", theta)?;
        within(&format!("TIC(Monty_B->{theta})"), t, 3f64.log2() - 1.0, PUBLISHED_DECIMALS)?;
        within(&format!("TIC(Monty_B->{theta}) decimal"), t, 0.5849625, PUBLISHED_DECIMALS)?;
    }
    Ok(())
}

struct PropertyTally {
    scenarios: usize,
    negative_tic_witnesses: usize,
}

fn check_random_scenario(s: &Scenario, tally: &mut PropertyTally) -> Check {
    let (ms, om) = (s.model_space(), s.observation_model());
    let table = enumerate_joint(s).map_err(|e| e.to_string())?;
    let mut saw_negative = false;
    for x in om.observation_labels() {
        let Ok(oracle) = oracle_metrics(&table, x) else {
            continue;
        };
        let tics = ms
            .labels()
            .iter()
            .map(|theta| tic_bits(s, x, theta))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        for (i, m) in oracle.models.iter().enumerate() {
            let theta = &m.model;
            let info = info_posterior(s, x, theta)?;
            within(&format!("posterior {x}/{theta}"), info, m.posterior.to_f64().unwrap(), CROSS_PATH)?;
            let t = tics[i];
            saw_negative |= t < 0.0 && t.is_finite();
            if let Ok(lte) = local_transfer_entropy(ms, om, x, theta) {
                within(&format!("LTE = TIC {x}/{theta}"), lte.value(), t, CROSS_PATH)?;
            }
            for (other, &t2) in ms.labels().iter().zip(&tics) {
                let Ok(k) = bayes_factor(ms, om, x, theta, other) else {
                    ensure!(t == f64::NEG_INFINITY && t2 == f64::NEG_INFINITY, "bayes factor failed with finite TIC");
                    continue;
                };
                if t.is_finite() && t2.is_finite() {
                    within(&format!("log2 K {x} {theta}/{other}"), k.log2.value(), t - t2, IDENTITY)?;
                } else {
                    ensure!(k.log2.value() == t - t2, "infinite bayes factor mismatch");
                }
            }
        }
        let kl = kl_expected_tic(ms, om, x).map_err(|e| e.to_string())?.value;
        ensure!(kl >= -CROSS_PATH, "KL {kl} below -1e-9");
    }
    let mi = mutual_information(ms, om).map_err(|e| e.to_string())?.value;
    ensure!(mi >= -CROSS_PATH, "MI {mi} below -1e-9");
    tally.scenarios += 1;
    tally.negative_tic_witnesses += saw_negative as usize;
    Ok(())
}

fn randomized_property_suite() -> Check {
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = common::rational_scenario(8, 8);
    let mut tally = PropertyTally {
        scenarios: 0,
        negative_tic_witnesses: 0,
    };
    for _ in 0..RANDOM_SCENARIOS {
        let s = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        check_random_scenario(&s, &mut tally)?;
    }
    ensure!(tally.scenarios == RANDOM_SCENARIOS, "only {} scenarios checked", tally.scenarios);
    ensure!(
        tally.negative_tic_witnesses > 0,
        "no scenario exercised a negative finite TIC"
    );
    Ok(())
}

fn refuted_model_flow() -> Check {
    let mut scenarios = vec![
        (MhpVariant::Traditional.scenario(), "Monty_B", "B"),
        (MhpVariant::Biased.scenario(), "Monty_C", "C"),
        (MhpVariant::Forgetful.scenario(), "Monty_B", "B"),
    ];
    let five = mhp_scenario(&MhpConfig::new(5, None, "C", HostPolicy::Standard).unwrap()).unwrap();
    scenarios.push((five, "Monty_D4", "D4"));

    for (s, x, theta) in &scenarios {
        let (ms, om) = (s.model_space(), s.observation_model());
        let ev = evidence(ms, om, x).map_err(|e| e.to_string())?;
        ensure!(!ev.is_zero(), "{x} should be possible");
        let t = tic_bits(s, x, theta)?;
        ensure!(t == f64::NEG_INFINITY, "{}: TIC({x}->{theta}) = {t}", s.name);
        let info = info_posterior(s, x, theta)?;
        ensure!(info == 0.0, "{}: info-form posterior {info}", s.name);
        let oracle = posterior_prob_oracle(ms, om, x, theta).map_err(|e| e.to_string())?;
        ensure!(oracle == Probability::zero(), "{}: oracle posterior {oracle}", s.name);
        let kl = kl_expected_tic(ms, om, x).map_err(|e| e.to_string())?;
        let term = kl.per_model_terms.iter().find(|term| term.model == *theta).unwrap();
        ensure!(term.weight == 0.0 && term.tic == Bits::NEG_INFINITY, "refuted KL term {term:?}");
        let without: f64 = kl
            .per_model_terms
            .iter()
            .filter(|term| term.model != *theta)
            .map(|term| if term.weight == 0.0 { 0.0 } else { term.weight * term.tic.value() })
            .sum();
        ensure!(kl.value == without, "refuted model changed KL: {} vs {without}", kl.value);
    }
    Ok(())
}

fn cli_determinism_and_verify() -> Check {
    let bin = env!("CARGO_BIN_EXE_infotransfer");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut paths = Vec::new();
    for v in ["traditional", "biased", "forgetful"] {
        let path = dir.path().join(format!("{v}.json"));
        let st = Command::new(bin)
            .args(["mhp", v, "-o", path.to_str().unwrap()])
            .status()
            .map_err(|e| e.to_string())?;
        ensure!(st.success(), "mhp {v} failed");
        paths.push(path);
    }
    let traditional = paths[0].to_str().unwrap();
    for format in ["table", "json", "csv"] {
        let run = || {
            Command::new(bin)
                .args(["solve", traditional, "--observe", "Monty_B", "--format", format])
                .output()
        };
        let first = run().map_err(|e| e.to_string())?;
        let second = run().map_err(|e| e.to_string())?;
        ensure!(first.status.success(), "solve --format {format} failed");
        ensure!(first.stdout == second.stdout, "solve --format {format} output differs between runs");
    }
    for path in &paths {
        let out = Command::new(bin)
            .args(["verify", path.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.status.code() == Some(0),
            "verify {} exited {:?}",
            path.display(),
            out.status.code()
        );
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("1 traditional MHP posteriors and TIC", traditional_posteriors_and_tic),
        ("2 traditional MHP KL and MI via both paths", traditional_kl_and_mi),
        ("3 biased MHP negative information", biased_negative_information),
        ("4 forgetful MHP partial information", forgetful_partial_information),
        ("5 randomized rational property suite (1000 scenarios)", randomized_property_suite),
        ("6 refuted-model flow", refuted_model_flow),
        ("7 CLI determinism and verify", cli_determinism_and_verify),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("[PASS] criterion {name} ({ms} ms)"),
            Err(why) => {
                println!("[FAIL] criterion {name} ({ms} ms): {why}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
