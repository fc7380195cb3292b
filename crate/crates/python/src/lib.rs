use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use infotransfer::report::{verify_scenario, Format, ReportDocument};
use infotransfer::{Bits, Error, HostPolicy, MhpConfig, MhpVariant, Probability};

create_exception!(pyinfotransfer, ImpossibleObservation, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ImpossibleObservation(_) => ImpossibleObservation::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A probability given either as a float or as a string like "7/12".
#[derive(FromPyObject)]
enum ProbArg {
    Text(String),
    Number(f64),
}

impl ProbArg {
    fn parse(self) -> PyResult<Probability> {
        match self {
            ProbArg::Text(s) => s.parse().map_err(to_py),
            ProbArg::Number(f) => Probability::from_f64(f).map_err(to_py),
        }
    }
}

#[pyfunction]
fn info_content(p: ProbArg) -> PyResult<f64> {
    Ok(infotransfer::info_content(&p.parse()?).value())
}

#[pyfunction]
fn prob_from_info(bits: f64) -> PyResult<f64> {
    let b = Bits::new(bits).map_err(to_py)?;
    Ok(infotransfer::prob_from_info(b).map_err(to_py)?.value())
}

#[pyfunction]
fn entropy(probabilities: Vec<ProbArg>) -> PyResult<f64> {
    let probs = probabilities
        .into_iter()
        .map(ProbArg::parse)
        .collect::<PyResult<Vec<_>>>()?;
    let labels = (0..probs.len()).map(|i| i.to_string()).collect();
    let d = infotransfer::Distribution::new(labels, probs).map_err(to_py)?;
    Ok(infotransfer::entropy(&d).value())
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "pyinfotransfer")]
#[derive(Clone)]
struct TransferEntry {
    model: String,
    prior: f64,
    prior_bits: f64,
    likelihood: f64,
    likelihood_bits: f64,
    /// None when the model had zero prior probability.
    tic: Option<f64>,
    sign: Option<String>,
    posterior_bits: f64,
    posterior_prob: f64,
}

#[pymethods]
impl TransferEntry {
    fn __repr__(&self) -> String {
        format!(
            "TransferEntry(model={:?}, tic={:?}, sign={:?}, posterior_prob={})",
            self.model, self.tic, self.sign, self.posterior_prob
        )
    }
}

#[pyclass(frozen, get_all, module = "pyinfotransfer")]
struct TransferReport {
    observation: String,
    evidence: f64,
    evidence_bits: f64,
    entries: Vec<TransferEntry>,
}

#[pymethods]
impl TransferReport {
    fn entry(&self, model: &str) -> Option<TransferEntry> {
        self.entries.iter().find(|e| e.model == model).cloned()
    }

    fn __repr__(&self) -> String {
        format!(
            "TransferReport(observation={:?}, evidence={}, entries={})",
            self.observation,
            self.evidence,
            self.entries.len()
        )
    }
}

#[pyclass(frozen, name = "Scenario", module = "pyinfotransfer")]
struct PyScenario {
    inner: infotransfer::Scenario,
}

#[pymethods]
impl PyScenario {
    /// One of "traditional", "biased", "forgetful".
    #[staticmethod]
    fn mhp(variant: &str) -> PyResult<Self> {
        let v: MhpVariant = variant.parse().map_err(to_py)?;
        Ok(PyScenario { inner: v.scenario() })
    }

    #[staticmethod]
    #[pyo3(signature = (doors, pick = "A", policy = "standard", prior = None))]
    fn custom_mhp(
        doors: usize,
        pick: &str,
        policy: &str,
        prior: Option<Vec<ProbArg>>,
    ) -> PyResult<Self> {
        let policy: HostPolicy = policy.parse().map_err(to_py)?;
        let prior = prior
            .map(|p| p.into_iter().map(ProbArg::parse).collect::<PyResult<Vec<_>>>())
            .transpose()?;
        let cfg = MhpConfig::new(doors, prior, pick, policy).map_err(to_py)?;
        Ok(PyScenario {
            inner: infotransfer::mhp_scenario(&cfg).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyScenario {
            inner: infotransfer::load_scenario(path).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyScenario {
            inner: infotransfer::Scenario::from_json(text).map_err(to_py)?,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        infotransfer::save_scenario(&self.inner, path).map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn models(&self) -> Vec<String> {
        self.inner.model_space().labels().to_vec()
    }

    #[getter]
    fn observations(&self) -> Vec<String> {
        self.inner.observation_model().observation_labels().to_vec()
    }

    #[getter]
    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    /// Evidence as a float; see `evidence_exact` for the rational form.
    fn evidence(&self, observation: &str) -> PyResult<f64> {
        let s = &self.inner;
        Ok(infotransfer::evidence(s.model_space(), s.observation_model(), observation)
            .map_err(to_py)?
            .value())
    }

    fn evidence_exact(&self, observation: &str) -> PyResult<String> {
        let s = &self.inner;
        Ok(infotransfer::evidence(s.model_space(), s.observation_model(), observation)
            .map_err(to_py)?
            .to_string())
    }

    fn tic(&self, observation: &str, model: &str) -> PyResult<f64> {
        let s = &self.inner;
        Ok(infotransfer::tic(s.model_space(), s.observation_model(), observation, model)
            .map_err(to_py)?
            .value())
    }

    fn classify(&self, observation: &str, model: &str) -> PyResult<String> {
        let t = self.tic(observation, model)?;
        Ok(infotransfer::classify_tic(Bits::new(t).map_err(to_py)?).to_string())
    }

    fn posterior_info(&self, observation: &str, model: &str) -> PyResult<f64> {
        let s = &self.inner;
        Ok(
            infotransfer::posterior_info(s.model_space(), s.observation_model(), observation, model)
                .map_err(to_py)?
                .value(),
        )
    }

    /// Posterior recovered from the posterior information content.
    fn posterior(&self, observation: &str, model: &str) -> PyResult<f64> {
        let s = &self.inner;
        Ok(infotransfer::posterior_prob_info_form(
            s.model_space(),
            s.observation_model(),
            observation,
            model,
        )
        .map_err(to_py)?
        .value())
    }

    /// Probability-space Bayes rule; a "num/den" string for exact scenarios.
    fn posterior_oracle(&self, observation: &str, model: &str) -> PyResult<String> {
        let s = &self.inner;
        Ok(infotransfer::posterior_prob_oracle(
            s.model_space(),
            s.observation_model(),
            observation,
            model,
        )
        .map_err(to_py)?
        .to_string())
    }

    fn local_transfer_entropy(&self, observation: &str, model: &str) -> PyResult<f64> {
        let s = &self.inner;
        Ok(infotransfer::local_transfer_entropy(
            s.model_space(),
            s.observation_model(),
            observation,
            model,
        )
        .map_err(to_py)?
        .value())
    }

    /// `(ratio, log2_ratio)`; ratio is None when the second likelihood is zero.
    fn bayes_factor(
        &self,
        observation: &str,
        model1: &str,
        model2: &str,
    ) -> PyResult<(Option<f64>, f64)> {
        let s = &self.inner;
        let k = infotransfer::bayes_factor(
            s.model_space(),
            s.observation_model(),
            observation,
            model1,
            model2,
        )
        .map_err(to_py)?;
        Ok((k.ratio().ok().map(|r| r.to_f64()), k.log2.value()))
    }

    fn transfer_report(&self, observation: &str) -> PyResult<TransferReport> {
        let s = &self.inner;
        let r = infotransfer::transfer_report(s.model_space(), s.observation_model(), observation)
            .map_err(to_py)?;
        Ok(TransferReport {
            observation: r.observation.clone(),
            evidence: r.evidence.value(),
            evidence_bits: r.evidence_info.value(),
            entries: r
                .entries
                .iter()
                .map(|e| TransferEntry {
                    model: e.model.clone(),
                    prior: e.prior.value(),
                    prior_bits: e.prior_info.value(),
                    likelihood: e.likelihood.value(),
                    likelihood_bits: e.likelihood_info.value(),
                    tic: e.tic.map(Bits::value),
                    sign: e.sign_class.map(|c| c.to_string()),
                    posterior_bits: e.posterior_info.value(),
                    posterior_prob: e.posterior_prob.value(),
                })
                .collect(),
        })
    }

    fn kl(&self, observation: &str) -> PyResult<f64> {
        let s = &self.inner;
        Ok(infotransfer::kl_expected_tic(s.model_space(), s.observation_model(), observation)
            .map_err(to_py)?
            .value)
    }

    fn kl_classical(&self, observation: &str) -> PyResult<f64> {
        let s = &self.inner;
        Ok(infotransfer::kl_classical(s.model_space(), s.observation_model(), observation)
            .map_err(to_py)?
            .value())
    }

    fn mutual_information(&self) -> PyResult<f64> {
        let s = &self.inner;
        Ok(infotransfer::mutual_information(s.model_space(), s.observation_model())
            .map_err(to_py)?
            .value)
    }

    fn mutual_information_classical(&self) -> PyResult<f64> {
        let s = &self.inner;
        Ok(
            infotransfer::mutual_information_classical(s.model_space(), s.observation_model())
                .map_err(to_py)?
                .value(),
        )
    }

    /// `(max_deviation, passed)` against the exact oracle.
    fn verify(&self) -> PyResult<(f64, bool)> {
        let out = verify_scenario(&self.inner).map_err(to_py)?;
        Ok((out.max_deviation(), out.passed()))
    }

    /// Rendered report, same as the `solve` CLI command.
    #[pyo3(signature = (observation, format = "table", precision = 6))]
    fn solve(&self, observation: &str, format: &str, precision: usize) -> PyResult<String> {
        let format: Format = format.parse().map_err(PyValueError::new_err)?;
        let doc = ReportDocument::build(&self.inner, observation).map_err(to_py)?;
        Ok(doc.render(format, precision))
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(name={:?}, models={}, observations={})",
            self.inner.name,
            self.inner.model_space().len(),
            self.inner.observation_model().observation_labels().len()
        )
    }
}

#[pymodule]
fn pyinfotransfer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<TransferReport>()?;
    m.add_class::<TransferEntry>()?;
    m.add_function(wrap_pyfunction!(info_content, m)?)?;
    m.add_function(wrap_pyfunction!(prob_from_info, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add("ImpossibleObservation", m.py().get_type::<ImpossibleObservation>())?;
    Ok(())
}
