//! Single-observation Bayesian updating carried out on information contents.
//!
//! For an observation `x` and model `θ` the transfer information content is
//! `TIC(x → θ) = I[P(x)] - I[P(x|θ)]` and the posterior content follows as
//! `I[P(θ|x)] = I[P(θ)] - TIC(x → θ)`. Evidence is always marginalized from
//! the prior and likelihood.

use std::fmt;

use crate::error::{Error, Result};
use crate::info::{
    check_normalized, check_unique, info_content, prob_from_info, Bits, Distribution,
    Probability, Scalar,
};

/// Width of the neutral band used when classifying a TIC.
pub const NEUTRAL_TOLERANCE: f64 = 1e-12;

/// A finite hypothesis space with its prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpace {
    prior: Distribution,
}

impl ModelSpace {
    pub fn new(prior: Distribution) -> Self {
        ModelSpace { prior }
    }

    pub fn from_parts(labels: Vec<String>, prior: Vec<Probability>) -> Result<Self> {
        Ok(ModelSpace {
            prior: Distribution::with_context(labels, prior, "prior")?,
        })
    }

    pub fn prior(&self) -> &Distribution {
        &self.prior
    }

    pub fn labels(&self) -> &[String] {
        self.prior.labels()
    }

    pub fn len(&self) -> usize {
        self.prior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prior.is_empty()
    }

    fn index(&self, label: &str) -> Result<usize> {
        self.prior
            .index_of(label)
            .ok_or_else(|| Error::UnknownModel(label.to_string()))
    }
}

/// Likelihood table `P(x|θ)`: rows are observations, columns are models.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationModel {
    observation_labels: Vec<String>,
    likelihood: Vec<Vec<Probability>>,
}

impl ObservationModel {
    /// Every column must be a distribution over the observations.
    pub fn new(
        observation_labels: Vec<String>,
        likelihood: Vec<Vec<Probability>>,
        models: &ModelSpace,
    ) -> Result<Self> {
        if observation_labels.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        check_unique(&observation_labels)?;
        if likelihood.len() != observation_labels.len() {
            return Err(Error::LengthMismatch {
                what: "likelihood rows".into(),
                expected: observation_labels.len(),
                found: likelihood.len(),
            });
        }
        for (label, row) in observation_labels.iter().zip(&likelihood) {
            if row.len() != models.len() {
                return Err(Error::LengthMismatch {
                    what: format!("likelihood row {label}"),
                    expected: models.len(),
                    found: row.len(),
                });
            }
        }
        for (j, theta) in models.labels().iter().enumerate() {
            check_normalized(
                likelihood.iter().map(|row| &row[j]),
                &format!("column θ={theta}"),
            )?;
        }
        Ok(ObservationModel {
            observation_labels,
            likelihood,
        })
    }

    pub fn observation_labels(&self) -> &[String] {
        &self.observation_labels
    }

    pub fn likelihood(&self) -> &[Vec<Probability>] {
        &self.likelihood
    }

    pub fn model_count(&self) -> usize {
        self.likelihood.first().map_or(0, Vec::len)
    }

    pub fn is_exact(&self) -> bool {
        self.likelihood.iter().flatten().all(Probability::is_exact)
    }

    fn index(&self, label: &str) -> Result<usize> {
        self.observation_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownObservation(label.to_string()))
    }

    fn at(&self, x: usize, theta: usize) -> &Probability {
        &self.likelihood[x][theta]
    }
}

/// Effect of a TIC on a model's probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    /// Positive transfer: the model becomes more probable.
    Informs,
    Neutral,
    /// Negative transfer: the model becomes less probable.
    Misleads,
}

impl SignClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SignClass::Informs => "informs",
            SignClass::Neutral => "neutral",
            SignClass::Misleads => "misleads",
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_dims(ms: &ModelSpace, om: &ObservationModel) -> Result<()> {
    if ms.len() != om.model_count() {
        return Err(Error::LengthMismatch {
            what: "likelihood columns".into(),
            expected: ms.len(),
            found: om.model_count(),
        });
    }
    Ok(())
}

fn clamp_unit(s: Scalar) -> Probability {
    match s {
        Scalar::Float(f) => Probability::from_f64(f.clamp(0.0, 1.0)).expect("clamped"),
        exact => Probability::new(exact).expect("exact marginal of a distribution lies in [0, 1]"),
    }
}

fn evidence_at(ms: &ModelSpace, om: &ObservationModel, x: usize) -> Probability {
    let sum = ms
        .prior()
        .probabilities()
        .iter()
        .enumerate()
        .fold(Scalar::zero(), |acc, (j, prior)| {
            acc.add(&om.at(x, j).scalar().mul(prior.scalar()))
        });
    clamp_unit(sum)
}

/// Resolved indices for an observation that actually has positive evidence.
struct Query {
    x: usize,
    evidence: Probability,
}

fn occurred(ms: &ModelSpace, om: &ObservationModel, x: &str) -> Result<Query> {
    check_dims(ms, om)?;
    let xi = om.index(x)?;
    let evidence = evidence_at(ms, om, xi);
    if evidence.is_zero() {
        return Err(Error::ImpossibleObservation(x.to_string()));
    }
    Ok(Query { x: xi, evidence })
}

/// Marginal probability of the observation, `Σ_θ P(x|θ) P(θ)`.
pub fn evidence(ms: &ModelSpace, om: &ObservationModel, x: &str) -> Result<Probability> {
    check_dims(ms, om)?;
    Ok(evidence_at(ms, om, om.index(x)?))
}

fn tic_at(q: &Query, om: &ObservationModel, theta: usize) -> Bits {
    let evidence_info = info_content(&q.evidence);
    let likelihood_info = info_content(om.at(q.x, theta));
    // evidence_info is finite, so this is never inf - inf
    evidence_info
        .minus(likelihood_info)
        .expect("finite evidence information")
}

/// Transfer information content `I[P(x)] - I[P(x|θ)]`.
///
/// `-inf` for a model the observation refutes.
pub fn tic(ms: &ModelSpace, om: &ObservationModel, x: &str, theta: &str) -> Result<Bits> {
    let q = occurred(ms, om, x)?;
    let t = ms.index(theta)?;
    Ok(tic_at(&q, om, t))
}

pub fn classify_tic(t: Bits) -> SignClass {
    let v = t.value();
    if v > NEUTRAL_TOLERANCE {
        SignClass::Informs
    } else if v < -NEUTRAL_TOLERANCE {
        SignClass::Misleads
    } else {
        SignClass::Neutral
    }
}

fn posterior_info_at(ms: &ModelSpace, tic: Bits, theta: usize) -> Bits {
    let prior_info = info_content(&ms.prior().probabilities()[theta]);
    // tic <= I[P(x)] < inf, so the difference is never NaN
    prior_info.minus(tic).expect("tic is bounded above")
}

/// `I[P(θ|x)] = I[P(θ)] - TIC(x → θ)`.
pub fn posterior_info(
    ms: &ModelSpace,
    om: &ObservationModel,
    x: &str,
    theta: &str,
) -> Result<Bits> {
    let q = occurred(ms, om, x)?;
    let t = ms.index(theta)?;
    Ok(posterior_info_at(ms, tic_at(&q, om, t), t))
}

fn prob_of_posterior_info(b: Bits) -> Probability {
    // Rounding can push a certain posterior a few ulps below zero bits.
    let b = Bits::new(b.value().max(0.0)).expect("not NaN");
    prob_from_info(b).expect("non-negative")
}

/// Posterior probability recovered from the posterior information content.
pub fn posterior_prob_info_form(
    ms: &ModelSpace,
    om: &ObservationModel,
    x: &str,
    theta: &str,
) -> Result<Probability> {
    posterior_info(ms, om, x, theta).map(prob_of_posterior_info)
}

fn posterior_oracle_at(ms: &ModelSpace, om: &ObservationModel, q: &Query, theta: usize) -> Probability {
    let joint = om
        .at(q.x, theta)
        .scalar()
        .mul(ms.prior().probabilities()[theta].scalar());
    clamp_unit(
        joint
            .div(q.evidence.scalar())
            .expect("evidence checked positive"),
    )
}

/// Probability-space Bayes rule `P(x|θ) P(θ) / P(x)`; exact for rational inputs.
pub fn posterior_prob_oracle(
    ms: &ModelSpace,
    om: &ObservationModel,
    x: &str,
    theta: &str,
) -> Result<Probability> {
    let q = occurred(ms, om, x)?;
    let t = ms.index(theta)?;
    Ok(posterior_oracle_at(ms, om, &q, t))
}

/// One model's row in a [`TransferReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransferEntry {
    pub model: String,
    pub prior: Probability,
    pub prior_info: Bits,
    pub likelihood: Probability,
    pub likelihood_info: Bits,
    /// `None` when the model had zero prior probability: the transfer is undefined.
    pub tic: Option<Bits>,
    pub sign_class: Option<SignClass>,
    pub posterior_info: Bits,
    pub posterior_prob: Probability,
}

/// Per-model decomposition of a single observation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub observation: String,
    pub evidence: Probability,
    pub evidence_info: Bits,
    pub entries: Vec<TransferEntry>,
}

impl TransferReport {
    pub fn entry(&self, model: &str) -> Option<&TransferEntry> {
        self.entries.iter().find(|e| e.model == model)
    }
}

pub fn transfer_report(
    ms: &ModelSpace,
    om: &ObservationModel,
    x: &str,
) -> Result<TransferReport> {
    let q = occurred(ms, om, x)?;
    let evidence_info = info_content(&q.evidence);
    let entries = ms
        .prior()
        .iter()
        .enumerate()
        .map(|(j, (label, prior))| {
            let likelihood = om.at(q.x, j).clone();
            let likelihood_info = info_content(&likelihood);
            let prior_info = info_content(prior);
            if prior.is_zero() {
                return TransferEntry {
                    model: label.to_string(),
                    prior: prior.clone(),
                    prior_info,
                    likelihood,
                    likelihood_info,
                    tic: None,
                    sign_class: None,
                    posterior_info: Bits::INFINITY,
                    posterior_prob: Probability::zero(),
                };
            }
            let t = tic_at(&q, om, j);
            let posterior_info = posterior_info_at(ms, t, j);
            TransferEntry {
                model: label.to_string(),
                prior: prior.clone(),
                prior_info,
                likelihood,
                likelihood_info,
                tic: Some(t),
                sign_class: Some(classify_tic(t)),
                posterior_info,
                posterior_prob: prob_of_posterior_info(posterior_info),
            }
        })
        .collect();
    Ok(TransferReport {
        observation: x.to_string(),
        evidence: q.evidence,
        evidence_info,
        entries,
    })
}

/// Likelihood ratio between two models for one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesFactor {
    ratio: Option<Scalar>,
    observation: String,
    denominator_model: String,
    /// `log2 K`; `+inf` when only the denominator likelihood is zero.
    pub log2: Bits,
}

impl BayesFactor {
    /// `K = P(x|θ1) / P(x|θ2)`.
    pub fn ratio(&self) -> Result<&Scalar> {
        self.ratio.as_ref().ok_or_else(|| Error::DivisionByZero {
            observation: self.observation.clone(),
            model: self.denominator_model.clone(),
        })
    }
}

pub fn bayes_factor(
    ms: &ModelSpace,
    om: &ObservationModel,
    x: &str,
    theta1: &str,
    theta2: &str,
) -> Result<BayesFactor> {
    check_dims(ms, om)?;
    let xi = om.index(x)?;
    let l1 = om.at(xi, ms.index(theta1)?);
    let l2 = om.at(xi, ms.index(theta2)?);
    if l1.is_zero() && l2.is_zero() {
        return Err(Error::IndeterminateBayesFactor(x.to_string()));
    }
    let ratio = l1.scalar().div(l2.scalar());
    let log2 = match &ratio {
        Some(k) => Bits::new(k.log2())?,
        None => Bits::INFINITY,
    };
    Ok(BayesFactor {
        ratio,
        observation: x.to_string(),
        denominator_model: theta2.to_string(),
        log2,
    })
}

/// `log2[P(θ|x) / P(θ)]` from the probability-space posterior.
pub fn local_transfer_entropy(
    ms: &ModelSpace,
    om: &ObservationModel,
    x: &str,
    theta: &str,
) -> Result<Bits> {
    let q = occurred(ms, om, x)?;
    let t = ms.index(theta)?;
    let prior = &ms.prior().probabilities()[t];
    let posterior = posterior_oracle_at(ms, om, &q, t);
    let ratio = posterior
        .scalar()
        .div(prior.scalar())
        .ok_or_else(|| Error::ZeroPrior(theta.to_string()))?;
    Bits::new(ratio.log2())
}
