//! Scenarios, Monty Hall generators and the JSON scenario file format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bayes::{ModelSpace, ObservationModel};
use crate::error::{Error, Result};
use crate::info::{Distribution, Probability, Scalar};

/// A model space paired with an observation model.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    model_space: ModelSpace,
    observation_model: ObservationModel,
    pub metadata: BTreeMap<String, Value>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        model_space: ModelSpace,
        observation_model: ObservationModel,
        metadata: BTreeMap<String, Value>,
    ) -> Result<Self> {
        if model_space.len() != observation_model.model_count() {
            return Err(Error::LengthMismatch {
                what: "likelihood columns".into(),
                expected: model_space.len(),
                found: observation_model.model_count(),
            });
        }
        Ok(Scenario {
            name: name.into(),
            model_space,
            observation_model,
            metadata,
        })
    }

    pub fn model_space(&self) -> &ModelSpace {
        &self.model_space
    }

    pub fn observation_model(&self) -> &ObservationModel {
        &self.observation_model
    }

    /// True when every prior and likelihood entry is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.model_space.prior().is_exact() && self.observation_model.is_exact()
    }

    pub fn to_json(&self) -> String {
        let file = ScenarioFile {
            name: self.name.clone(),
            models: self
                .model_space
                .prior()
                .iter()
                .map(|(label, p)| ModelEntry {
                    label: label.to_string(),
                    prior: Literal::from(p),
                })
                .collect(),
            observations: self.observation_model.observation_labels().to_vec(),
            likelihood: self
                .observation_model
                .likelihood()
                .iter()
                .map(|row| row.iter().map(Literal::from).collect())
                .collect(),
            metadata: self.metadata.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.into_scenario()
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    Scenario::from_json(&text)
}

pub fn save_scenario(s: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, s.to_json())?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    models: Vec<ModelEntry>,
    observations: Vec<String>,
    likelihood: Vec<Vec<Literal>>,
    #[serde(default)]
    metadata: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelEntry {
    label: String,
    prior: Literal,
}

/// Integer JSON numbers and `"num/den"` strings are exact; other numbers are floats.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Literal {
    Integer(i64),
    Float(f64),
    Text(String),
}

impl From<&Probability> for Literal {
    fn from(p: &Probability) -> Self {
        match p.scalar() {
            Scalar::Exact(_) => Literal::Text(p.to_string()),
            Scalar::Float(f) => Literal::Float(*f),
        }
    }
}

impl Literal {
    fn to_probability(&self, field: impl Fn() -> String) -> Result<Probability> {
        let scalar = match self {
            Literal::Integer(i) => Scalar::from_str(&i.to_string()),
            Literal::Float(f) => Ok(Scalar::Float(*f)),
            Literal::Text(t) => t.parse(),
        };
        scalar.and_then(Probability::new).map_err(|e| Error::Field {
            field: field(),
            message: e.to_string(),
        })
    }
}

impl ScenarioFile {
    fn into_scenario(self) -> Result<Scenario> {
        let mut labels = Vec::with_capacity(self.models.len());
        let mut priors = Vec::with_capacity(self.models.len());
        for (i, m) in self.models.into_iter().enumerate() {
            priors.push(m.prior.to_probability(|| format!("models[{i}].prior"))?);
            labels.push(m.label);
        }
        let model_space = ModelSpace::from_parts(labels, priors)?;
        let likelihood = self
            .likelihood
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, lit)| lit.to_probability(|| format!("likelihood[{r}][{c}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let observation_model = ObservationModel::new(self.observations, likelihood, &model_space)?;
        Scenario::new(self.name, model_space, observation_model, self.metadata)
    }
}

/// How the host picks a door to open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HostPolicy {
    /// Knows where the car is and always reveals a goat.
    Standard,
    /// Opens any non-picked door uniformly at random.
    Forgetful,
}

impl HostPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            HostPolicy::Standard => "standard",
            HostPolicy::Forgetful => "forgetful",
        }
    }
}

impl fmt::Display for HostPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HostPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(HostPolicy::Standard),
            "forgetful" => Ok(HostPolicy::Forgetful),
            other => Err(Error::InvalidConfig(format!("unknown host policy {other:?}"))),
        }
    }
}

/// `A`, `B`, `C`, then `D4`, `D5`, ...
pub fn door_labels(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| match i {
            1 => "A".to_string(),
            2 => "B".to_string(),
            3 => "C".to_string(),
            _ => format!("D{i}"),
        })
        .collect()
}

/// Observation label for the host opening `door` and revealing a goat.
pub fn opens_label(door: &str) -> String {
    format!("Monty_{door}")
}

/// Observation label for the forgetful host opening `door` onto the car.
pub fn opens_car_label(door: &str) -> String {
    format!("Monty_{door}_car")
}

#[derive(Debug, Clone, PartialEq)]
pub struct MhpConfig {
    door_count: usize,
    prior: Distribution,
    contestant_pick: String,
    host_policy: HostPolicy,
}

impl MhpConfig {
    /// `prior` defaults to uniform when `None`.
    pub fn new(
        door_count: usize,
        prior: Option<Vec<Probability>>,
        contestant_pick: &str,
        host_policy: HostPolicy,
    ) -> Result<Self> {
        if door_count < 3 {
            return Err(Error::InvalidConfig(format!(
                "door count must be at least 3, got {door_count}"
            )));
        }
        let labels = door_labels(door_count);
        if !labels.iter().any(|l| l == contestant_pick) {
            return Err(Error::InvalidConfig(format!(
                "pick {contestant_pick:?} is not one of the doors {labels:?}"
            )));
        }
        let prior = match prior {
            None => Distribution::uniform(labels)?,
            Some(p) => Distribution::with_context(labels, p, "door prior")?,
        };
        Ok(MhpConfig {
            door_count,
            prior,
            contestant_pick: contestant_pick.to_string(),
            host_policy,
        })
    }

    pub fn door_count(&self) -> usize {
        self.door_count
    }

    pub fn prior(&self) -> &Distribution {
        &self.prior
    }

    pub fn contestant_pick(&self) -> &str {
        &self.contestant_pick
    }

    pub fn host_policy(&self) -> HostPolicy {
        self.host_policy
    }
}

/// The three published Monty Hall variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhpVariant {
    Traditional,
    /// Car placed by a die roll: A on 1-3, B on 4-5, C on 6.
    Biased,
    Forgetful,
}

impl MhpVariant {
    pub fn name(self) -> &'static str {
        match self {
            MhpVariant::Traditional => "traditional",
            MhpVariant::Biased => "biased",
            MhpVariant::Forgetful => "forgetful",
        }
    }

    pub fn config(self) -> MhpConfig {
        let cfg = match self {
            MhpVariant::Traditional => MhpConfig::new(3, None, "A", HostPolicy::Standard),
            MhpVariant::Biased => MhpConfig::new(
                3,
                Some(vec![
                    Probability::ratio(3, 6).unwrap(),
                    Probability::ratio(2, 6).unwrap(),
                    Probability::ratio(1, 6).unwrap(),
                ]),
                "A",
                HostPolicy::Standard,
            ),
            MhpVariant::Forgetful => MhpConfig::new(3, None, "A", HostPolicy::Forgetful),
        };
        cfg.expect("published variants are valid")
    }

    pub fn scenario(self) -> Scenario {
        let mut s = mhp_scenario(&self.config()).expect("published variants are valid");
        s.name = format!("{}-mhp", self.name());
        s.metadata
            .insert("variant".into(), Value::String(self.name().into()));
        s
    }
}

impl FromStr for MhpVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "traditional" => Ok(MhpVariant::Traditional),
            "biased" => Ok(MhpVariant::Biased),
            "forgetful" => Ok(MhpVariant::Forgetful),
            other => Err(Error::InvalidConfig(format!("unknown variant {other:?}"))),
        }
    }
}

fn exact(num: usize, den: usize) -> Probability {
    Probability::ratio(num as i64, den as i64).expect("0 <= num <= den")
}

/// Build the Monty Hall scenario: models are car locations, observations are
/// host actions after the contestant's pick.
pub fn mhp_scenario(cfg: &MhpConfig) -> Result<Scenario> {
    let doors = door_labels(cfg.door_count);
    let n = cfg.door_count;
    let pick = cfg.contestant_pick.as_str();
    let openable: Vec<&String> = doors.iter().filter(|d| *d != pick).collect();

    let mut observations = Vec::new();
    let mut likelihood = Vec::new();
    match cfg.host_policy {
        HostPolicy::Standard => {
            for &d in &openable {
                observations.push(opens_label(d));
                likelihood.push(
                    doors
                        .iter()
                        .map(|car| {
                            if car == d {
                                Probability::zero()
                            } else if car == pick {
                                exact(1, n - 1)
                            } else {
                                exact(1, n - 2)
                            }
                        })
                        .collect(),
                );
            }
        }
        HostPolicy::Forgetful => {
            for &d in &openable {
                observations.push(opens_label(d));
                likelihood.push(
                    doors
                        .iter()
                        .map(|car| if car == d { Probability::zero() } else { exact(1, n - 1) })
                        .collect(),
                );
            }
            for &d in &openable {
                observations.push(opens_car_label(d));
                likelihood.push(
                    doors
                        .iter()
                        .map(|car| if car == d { exact(1, n - 1) } else { Probability::zero() })
                        .collect(),
                );
            }
        }
    }

    let model_space = ModelSpace::new(cfg.prior.clone());
    let observation_model = ObservationModel::new(observations, likelihood, &model_space)?;
    let mut metadata = BTreeMap::new();
    metadata.insert("doors".into(), Value::from(n));
    metadata.insert("pick".into(), Value::String(pick.into()));
    metadata.insert("policy".into(), Value::String(cfg.host_policy.as_str().into()));
    Scenario::new(
        format!("mhp-{n}-doors-{}", cfg.host_policy),
        model_space,
        observation_model,
        metadata,
    )
}
