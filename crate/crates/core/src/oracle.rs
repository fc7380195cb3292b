//! Exact brute-force ground truth.
//!
//! Enumerates every `(model, observation)` outcome with its joint probability
//! in arbitrary-precision rationals and recomputes posteriors, TIC, KL and
//! mutual information from that table alone. Nothing here calls into
//! [`crate::bayes`] or [`crate::aggregates`]; the logic is duplicated on
//! purpose so the two can be checked against each other.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct JointRow {
    pub model: String,
    pub observation: String,
    pub joint: BigRational,
}

/// Joint distribution over (model, observation) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct JointOutcomeTable {
    models: Vec<String>,
    observations: Vec<String>,
    priors: Vec<BigRational>,
    rows: Vec<JointRow>,
}

impl JointOutcomeTable {
    pub fn rows(&self) -> &[JointRow] {
        &self.rows
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn joint(&self, model: &str, observation: &str) -> Option<&BigRational> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.observation == observation)
            .map(|r| &r.joint)
    }

    /// `P(x)` summed over the table.
    pub fn marginal(&self, observation: &str) -> BigRational {
        self.rows
            .iter()
            .filter(|r| r.observation == observation)
            .fold(BigRational::zero(), |acc, r| acc + &r.joint)
    }

    fn model_marginal(&self, model: &str) -> BigRational {
        self.rows
            .iter()
            .filter(|r| r.model == model)
            .fold(BigRational::zero(), |acc, r| acc + &r.joint)
    }
}

/// Joint table `P(θ) P(x|θ)`; rejects any float entry.
pub fn enumerate_joint(s: &Scenario) -> Result<JointOutcomeTable> {
    let ms = s.model_space();
    let om = s.observation_model();
    let priors = ms
        .prior()
        .probabilities()
        .iter()
        .map(|p| p.as_rational().cloned().ok_or(Error::NonRational))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (j, model) in ms.labels().iter().enumerate() {
        for (i, observation) in om.observation_labels().iter().enumerate() {
            let lik = om.likelihood()[i][j].as_rational().ok_or(Error::NonRational)?;
            rows.push(JointRow {
                model: model.clone(),
                observation: observation.clone(),
                joint: &priors[j] * lik,
            });
        }
    }
    let table = JointOutcomeTable {
        models: ms.labels().to_vec(),
        observations: om.observation_labels().to_vec(),
        priors,
        rows,
    };

    let total = table
        .rows
        .iter()
        .fold(BigRational::zero(), |acc, r| acc + &r.joint);
    assert!(total.is_one(), "joint table sums to {total}");
    for (model, prior) in table.models.iter().zip(&table.priors) {
        debug_assert_eq!(&table.model_marginal(model), prior);
    }
    Ok(table)
}

fn log2_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

/// One logarithm of an exact positive rational.
fn log2_exact(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    match r.to_f64() {
        Some(v) if v.is_normal() => v.log2(),
        _ => log2_int(r.numer()) - log2_int(r.denom()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleModel {
    pub model: String,
    pub posterior: BigRational,
    /// `log2[P(θ|x) / P(θ)]`; `None` when the prior is zero.
    pub tic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub observation: String,
    pub evidence: BigRational,
    pub models: Vec<OracleModel>,
    pub kl: f64,
}

impl OracleMetrics {
    pub fn model(&self, label: &str) -> Option<&OracleModel> {
        self.models.iter().find(|m| m.model == label)
    }
}

pub fn oracle_metrics(t: &JointOutcomeTable, x: &str) -> Result<OracleMetrics> {
    if !t.observations.iter().any(|o| o == x) {
        return Err(Error::UnknownObservation(x.to_string()));
    }
    let evidence = t.marginal(x);
    if evidence.is_zero() {
        return Err(Error::ImpossibleObservation(x.to_string()));
    }
    let mut models = Vec::with_capacity(t.models.len());
    let mut kl = 0.0;
    for (model, prior) in t.models.iter().zip(&t.priors) {
        let joint = t.joint(model, x).expect("complete table");
        let posterior = joint / &evidence;
        let tic = if prior.is_zero() {
            None
        } else {
            Some(log2_exact(&(&posterior / prior)))
        };
        if !posterior.is_zero() {
            kl += posterior.to_f64().unwrap() * tic.expect("positive posterior has positive prior");
        }
        models.push(OracleModel {
            model: model.clone(),
            posterior,
            tic,
        });
    }
    Ok(OracleMetrics {
        observation: x.to_string(),
        evidence,
        models,
        kl,
    })
}

/// `Σ P(θ, x) log2[P(θ, x) / (P(θ) P(x))]` straight from the joint table.
pub fn oracle_mi(t: &JointOutcomeTable) -> f64 {
    let marginals: Vec<BigRational> = t.observations.iter().map(|x| t.marginal(x)).collect();
    let mut mi = 0.0;
    for row in &t.rows {
        if row.joint.is_zero() {
            continue;
        }
        let j = t.models.iter().position(|m| *m == row.model).unwrap();
        let i = t.observations.iter().position(|o| *o == row.observation).unwrap();
        let ratio = &row.joint / (&t.priors[j] * &marginals[i]);
        mi += row.joint.to_f64().unwrap() * log2_exact(&ratio);
    }
    mi
}
