//! KL divergence and mutual information as expectations of TIC.
//!
//! `D_KL(Θ|x ‖ Θ) = Σ_θ P(θ|x) TIC(x → θ)` and
//! `I(Θ; X) = Σ_x P(x) D_KL(Θ|x ‖ Θ)`. The classical forms are kept alongside
//! as cross-checks.

use crate::bayes::{evidence, posterior_prob_oracle, tic, ModelSpace, ObservationModel};
use crate::error::Result;
use crate::info::{entropy, weighted_surprisal, Bits, Probability};

/// One `(model, posterior weight, tic)` term of a KL expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct KlTerm {
    pub model: String,
    pub weight: f64,
    pub tic: Bits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KlResult {
    pub observation: String,
    /// Unclamped sum; can sit a hair below zero from rounding.
    pub value: f64,
    pub per_model_terms: Vec<KlTerm>,
}

impl KlResult {
    /// Value clamped at zero for display.
    pub fn display_value(&self) -> f64 {
        self.value.max(0.0)
    }

    pub fn bits(&self) -> Bits {
        Bits::new(self.display_value()).expect("finite")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationKl {
    pub observation: String,
    pub evidence: Probability,
    pub kl: KlResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiResult {
    pub value: f64,
    pub per_observation_kl: Vec<ObservationKl>,
}

impl MiResult {
    pub fn display_value(&self) -> f64 {
        self.value.max(0.0)
    }
}

/// KL divergence of the posterior from the prior as the posterior-weighted TIC.
pub fn kl_expected_tic(ms: &ModelSpace, om: &ObservationModel, x: &str) -> Result<KlResult> {
    let per_model_terms = ms
        .labels()
        .iter()
        .map(|theta| {
            Ok(KlTerm {
                model: theta.clone(),
                weight: posterior_prob_oracle(ms, om, x, theta)?.value(),
                tic: tic(ms, om, x, theta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = per_model_terms
        .iter()
        .map(|t| weighted_surprisal(t.weight, t.tic.value()))
        .sum();
    Ok(KlResult {
        observation: x.to_string(),
        value,
        per_model_terms,
    })
}

/// `Σ_θ P(θ|x) log2[P(θ|x) / P(θ)]`.
pub fn kl_classical(ms: &ModelSpace, om: &ObservationModel, x: &str) -> Result<Bits> {
    let mut total = 0.0;
    for (theta, prior) in ms.prior().iter() {
        let post = posterior_prob_oracle(ms, om, x, theta)?;
        if post.is_zero() {
            continue;
        }
        // post > 0 implies prior > 0
        let ratio = post.scalar().div(prior.scalar()).expect("prior positive");
        total += post.value() * ratio.log2();
    }
    Bits::new(total)
}

/// Mutual information as the evidence-weighted average of per-observation KL.
pub fn mutual_information(ms: &ModelSpace, om: &ObservationModel) -> Result<MiResult> {
    let mut per_observation_kl = Vec::new();
    for x in om.observation_labels() {
        let ev = evidence(ms, om, x)?;
        if ev.is_zero() {
            continue;
        }
        let kl = kl_expected_tic(ms, om, x)?;
        per_observation_kl.push(ObservationKl {
            observation: x.clone(),
            evidence: ev,
            kl,
        });
    }
    let value = per_observation_kl
        .iter()
        .map(|o| o.evidence.value() * o.kl.value)
        .sum();
    Ok(MiResult {
        value,
        per_observation_kl,
    })
}

/// `H(Θ) - Σ_x P(x) H(Θ | X = x)`.
pub fn mutual_information_classical(ms: &ModelSpace, om: &ObservationModel) -> Result<Bits> {
    let mut conditional = 0.0;
    for x in om.observation_labels() {
        let ev = evidence(ms, om, x)?;
        if ev.is_zero() {
            continue;
        }
        let posterior = ms
            .labels()
            .iter()
            .map(|theta| posterior_prob_oracle(ms, om, x, theta))
            .collect::<Result<Vec<_>>>()?;
        // Float posteriors may miss 1 by rounding; entropy only needs the values.
        let h: f64 = posterior
            .iter()
            .map(|p| weighted_surprisal(p.value(), p.info().value()))
            .sum();
        conditional += ev.value() * h;
    }
    Bits::new(entropy(ms.prior()).value() - conditional)
}
