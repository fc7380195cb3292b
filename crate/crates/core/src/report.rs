//! Rendering of transfer reports, KL/MI summaries and oracle verification.
//!
//! Tables print at a fixed decimal precision. CSV and JSON print every number
//! with 17 significant digits so the binary64 value survives a round trip.
//! Output is deterministic: stable ordering, no timestamps, no locale.

use std::fmt::Write as _;

use crate::aggregates::{kl_classical, kl_expected_tic, mutual_information, mutual_information_classical};
use crate::bayes::{transfer_report, TransferReport};
use crate::error::Result;
use crate::info::Bits;
use crate::oracle::{enumerate_joint, oracle_metrics, oracle_mi};
use crate::scenario::Scenario;

pub const DEFAULT_PRECISION: usize = 6;

/// Engine-vs-oracle agreement threshold used by verification.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

pub const CSV_HEADER: &str =
    "model,prior,prior_bits,evidence_bits,likelihood_bits,tic_bits,sign,posterior_bits,posterior_prob";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

/// Decimal with `precision` places; infinities as `inf` / `-inf`.
pub fn fixed(x: f64, precision: usize) -> String {
    if x == f64::INFINITY {
        return "inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-inf".into();
    }
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Positional decimal with 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x == f64::INFINITY {
        return "inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-inf".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci.rsplit_once('e').unwrap().1.parse().unwrap();
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn json_number(x: f64) -> String {
    if x == f64::INFINITY {
        "\"Infinity\"".into()
    } else if x == f64::NEG_INFINITY {
        "\"-Infinity\"".into()
    } else {
        sig17(x)
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub model: String,
    pub prior: f64,
    pub prior_bits: f64,
    pub evidence_bits: f64,
    pub likelihood_bits: f64,
    /// `None` marks an undefined transfer (zero prior).
    pub tic_bits: Option<f64>,
    pub sign: Option<String>,
    pub posterior_bits: f64,
    pub posterior_prob: f64,
}

/// Everything `solve` prints for one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDocument {
    pub scenario: String,
    pub observation: String,
    pub evidence: f64,
    pub evidence_bits: f64,
    pub rows: Vec<ReportRow>,
    pub kl_expected_tic: f64,
    pub kl_classical: f64,
}

impl ReportDocument {
    pub fn build(s: &Scenario, observation: &str) -> Result<Self> {
        let ms = s.model_space();
        let om = s.observation_model();
        let report = transfer_report(ms, om, observation)?;
        let kl = kl_expected_tic(ms, om, observation)?;
        let klc = kl_classical(ms, om, observation)?;
        Ok(Self::from_parts(&s.name, &report, kl.value, klc.value()))
    }

    fn from_parts(name: &str, r: &TransferReport, kl: f64, klc: f64) -> Self {
        let rows = r
            .entries
            .iter()
            .map(|e| ReportRow {
                model: e.model.clone(),
                prior: e.prior.value(),
                prior_bits: e.prior_info.value(),
                evidence_bits: r.evidence_info.value(),
                likelihood_bits: e.likelihood_info.value(),
                tic_bits: e.tic.map(Bits::value),
                sign: e.sign_class.map(|c| c.as_str().to_string()),
                posterior_bits: e.posterior_info.value(),
                posterior_prob: e.posterior_prob.value(),
            })
            .collect();
        ReportDocument {
            scenario: name.to_string(),
            observation: r.observation.clone(),
            evidence: r.evidence.value(),
            evidence_bits: r.evidence_info.value(),
            rows,
            kl_expected_tic: kl,
            kl_classical: klc,
        }
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Table => self.render_table(precision),
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    pub fn render_table(&self, precision: usize) -> String {
        let f = |x: f64| fixed(x, precision);
        let mut cells = vec![CSV_HEADER.split(',').map(str::to_string).collect::<Vec<_>>()];
        for r in &self.rows {
            cells.push(vec![
                r.model.clone(),
                f(r.prior),
                f(r.prior_bits),
                f(r.evidence_bits),
                f(r.likelihood_bits),
                r.tic_bits.map_or_else(|| "undefined".into(), f),
                r.sign.clone().unwrap_or_else(|| "undefined".into()),
                f(r.posterior_bits),
                f(r.posterior_prob),
            ]);
        }
        let mut out = String::new();
        writeln!(out, "scenario: {}", self.scenario).unwrap();
        writeln!(out, "observation: {}", self.observation).unwrap();
        writeln!(
            out,
            "evidence: P = {}, I = {} bits",
            f(self.evidence),
            f(self.evidence_bits)
        )
        .unwrap();
        out.push('\n');
        out.push_str(&align(&cells));
        out.push('\n');
        writeln!(out, "KL (expected TIC): {} bits", f(self.kl_expected_tic.max(0.0))).unwrap();
        writeln!(out, "KL (classical):    {} bits", f(self.kl_classical.max(0.0))).unwrap();
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                csv_field(&r.model),
                sig17(r.prior),
                sig17(r.prior_bits),
                sig17(r.evidence_bits),
                sig17(r.likelihood_bits),
                r.tic_bits.map_or_else(|| "undefined".into(), sig17),
                r.sign.as_deref().unwrap_or("undefined"),
                sig17(r.posterior_bits),
                sig17(r.posterior_prob),
            )
            .unwrap();
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        writeln!(out, "  \"scenario\": {},", json_string(&self.scenario)).unwrap();
        writeln!(out, "  \"observation\": {},", json_string(&self.observation)).unwrap();
        writeln!(out, "  \"evidence\": {},", json_number(self.evidence)).unwrap();
        writeln!(out, "  \"evidence_bits\": {},", json_number(self.evidence_bits)).unwrap();
        out.push_str("  \"rows\": [\n");
        for (i, r) in self.rows.iter().enumerate() {
            let tic = r.tic_bits.map_or_else(|| "null".into(), json_number);
            let sign = r.sign.as_deref().map_or_else(|| "null".into(), json_string);
            write!(
                out,
                "    {{\"model\": {}, \"prior\": {}, \"prior_bits\": {}, \"evidence_bits\": {}, \
                 \"likelihood_bits\": {}, \"tic_bits\": {}, \"sign\": {}, \"posterior_bits\": {}, \
                 \"posterior_prob\": {}}}",
                json_string(&r.model),
                json_number(r.prior),
                json_number(r.prior_bits),
                json_number(r.evidence_bits),
                json_number(r.likelihood_bits),
                tic,
                sign,
                json_number(r.posterior_bits),
                json_number(r.posterior_prob),
            )
            .unwrap();
            out.push_str(if i + 1 < self.rows.len() { ",\n" } else { "\n" });
        }
        out.push_str("  ],\n");
        writeln!(
            out,
            "  \"kl\": {{\"expected_tic\": {}, \"classical\": {}}}",
            json_number(self.kl_expected_tic),
            json_number(self.kl_classical)
        )
        .unwrap();
        out.push_str("}\n");
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Left-align the first column, right-align the rest.
fn align(cells: &[Vec<String>]) -> String {
    let cols = cells[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in cells {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                write!(line, "{cell:<w$}", w = widths[c]).unwrap();
            } else {
                write!(line, "  {cell:>w$}", w = widths[c]).unwrap();
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// KL for one observation via both routes.
#[derive(Debug, Clone, PartialEq)]
pub struct KlDocument {
    pub scenario: String,
    pub observation: String,
    pub expected_tic: f64,
    pub classical: f64,
    /// `(model, posterior weight, tic)`.
    pub terms: Vec<(String, f64, f64)>,
}

impl KlDocument {
    pub fn build(s: &Scenario, observation: &str) -> Result<Self> {
        let ms = s.model_space();
        let om = s.observation_model();
        let kl = kl_expected_tic(ms, om, observation)?;
        let classical = kl_classical(ms, om, observation)?.value();
        Ok(KlDocument {
            scenario: s.name.clone(),
            observation: observation.to_string(),
            expected_tic: kl.value,
            classical,
            terms: kl
                .per_model_terms
                .into_iter()
                .map(|t| (t.model, t.weight, t.tic.value()))
                .collect(),
        })
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        let mut out = String::new();
        match format {
            Format::Table => {
                let f = |x: f64| fixed(x, precision);
                writeln!(out, "scenario: {}", self.scenario).unwrap();
                writeln!(out, "observation: {}", self.observation).unwrap();
                out.push('\n');
                let mut cells = vec![vec!["model".into(), "weight".into(), "tic_bits".into()]];
                for (m, w, t) in &self.terms {
                    cells.push(vec![m.clone(), f(*w), f(*t)]);
                }
                out.push_str(&align(&cells));
                out.push('\n');
                writeln!(out, "KL (expected TIC): {} bits", f(self.expected_tic.max(0.0))).unwrap();
                writeln!(out, "KL (classical):    {} bits", f(self.classical.max(0.0))).unwrap();
                writeln!(out, "difference:        {:e}", (self.expected_tic - self.classical).abs())
                    .unwrap();
            }
            Format::Csv => {
                out.push_str("model,weight,tic_bits\n");
                for (m, w, t) in &self.terms {
                    writeln!(out, "{},{},{}", csv_field(m), sig17(*w), sig17(*t)).unwrap();
                }
            }
            Format::Json => {
                let terms: Vec<String> = self
                    .terms
                    .iter()
                    .map(|(m, w, t)| {
                        format!(
                            "{{\"model\": {}, \"weight\": {}, \"tic_bits\": {}}}",
                            json_string(m),
                            json_number(*w),
                            json_number(*t)
                        )
                    })
                    .collect();
                writeln!(
                    out,
                    "{{\"scenario\": {}, \"observation\": {}, \"expected_tic\": {}, \"classical\": {}, \"terms\": [{}]}}",
                    json_string(&self.scenario),
                    json_string(&self.observation),
                    json_number(self.expected_tic),
                    json_number(self.classical),
                    terms.join(", ")
                )
                .unwrap();
            }
        }
        out
    }
}

/// Mutual information via both routes.
#[derive(Debug, Clone, PartialEq)]
pub struct MiDocument {
    pub scenario: String,
    pub expected_tic: f64,
    pub classical: f64,
    /// `(observation, evidence, kl)`.
    pub per_observation: Vec<(String, f64, f64)>,
}

impl MiDocument {
    pub fn build(s: &Scenario) -> Result<Self> {
        let ms = s.model_space();
        let om = s.observation_model();
        let mi = mutual_information(ms, om)?;
        let classical = mutual_information_classical(ms, om)?.value();
        Ok(MiDocument {
            scenario: s.name.clone(),
            expected_tic: mi.value,
            classical,
            per_observation: mi
                .per_observation_kl
                .into_iter()
                .map(|o| (o.observation, o.evidence.value(), o.kl.value))
                .collect(),
        })
    }

    pub fn difference(&self) -> f64 {
        (self.expected_tic - self.classical).abs()
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        let mut out = String::new();
        match format {
            Format::Table => {
                let f = |x: f64| fixed(x, precision);
                writeln!(out, "scenario: {}", self.scenario).unwrap();
                out.push('\n');
                let mut cells = vec![vec!["observation".into(), "evidence".into(), "kl_bits".into()]];
                for (x, e, k) in &self.per_observation {
                    cells.push(vec![x.clone(), f(*e), f(*k)]);
                }
                out.push_str(&align(&cells));
                out.push('\n');
                writeln!(out, "MI (expected TIC): {} bits", f(self.expected_tic.max(0.0))).unwrap();
                writeln!(out, "MI (classical):    {} bits", f(self.classical.max(0.0))).unwrap();
                writeln!(out, "difference:        {:e}", self.difference()).unwrap();
            }
            Format::Csv => {
                out.push_str("observation,evidence,kl_bits\n");
                for (x, e, k) in &self.per_observation {
                    writeln!(out, "{},{},{}", csv_field(x), sig17(*e), sig17(*k)).unwrap();
                }
            }
            Format::Json => {
                let rows: Vec<String> = self
                    .per_observation
                    .iter()
                    .map(|(x, e, k)| {
                        format!(
                            "{{\"observation\": {}, \"evidence\": {}, \"kl_bits\": {}}}",
                            json_string(x),
                            json_number(*e),
                            json_number(*k)
                        )
                    })
                    .collect();
                writeln!(
                    out,
                    "{{\"scenario\": {}, \"expected_tic\": {}, \"classical\": {}, \"difference\": {}, \"per_observation\": [{}]}}",
                    json_string(&self.scenario),
                    json_number(self.expected_tic),
                    json_number(self.classical),
                    json_number(self.difference()),
                    rows.join(", ")
                )
                .unwrap();
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub quantity: String,
    pub engine: f64,
    pub oracle: f64,
    pub deviation: f64,
}

/// Engine-vs-oracle comparison over every quantity the engine reports.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub scenario: String,
    pub checks: Vec<Check>,
}

impl VerifyOutcome {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= VERIFY_TOLERANCE
    }

    pub fn render(&self) -> String {
        let mut cells = vec![vec![
            "quantity".to_string(),
            "engine".into(),
            "oracle".into(),
            "deviation".into(),
        ]];
        for c in &self.checks {
            cells.push(vec![
                c.quantity.clone(),
                sig17(c.engine),
                sig17(c.oracle),
                format!("{:e}", c.deviation),
            ]);
        }
        let mut out = String::new();
        writeln!(out, "scenario: {}", self.scenario).unwrap();
        out.push('\n');
        out.push_str(&align(&cells));
        out.push('\n');
        writeln!(out, "max deviation: {:e}", self.max_deviation()).unwrap();
        writeln!(out, "tolerance:     {VERIFY_TOLERANCE:e}").unwrap();
        writeln!(out, "result: {}", if self.passed() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

fn deviation(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        let d = (a - b).abs();
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }
}

/// Compare engine results with the exact oracle. Requires rational inputs.
pub fn verify_scenario(s: &Scenario) -> Result<VerifyOutcome> {
    let table = enumerate_joint(s)?;
    let ms = s.model_space();
    let om = s.observation_model();
    let mut checks = Vec::new();
    let mut push = |quantity: String, engine: f64, oracle: f64| {
        checks.push(Check {
            quantity,
            engine,
            oracle,
            deviation: deviation(engine, oracle),
        })
    };

    for x in om.observation_labels() {
        let evidence = table.marginal(x);
        if num_traits::Zero::is_zero(&evidence) {
            continue;
        }
        let oracle = oracle_metrics(&table, x)?;
        let report = transfer_report(ms, om, x)?;
        push(
            format!("P({x})"),
            report.evidence.value(),
            num_traits::ToPrimitive::to_f64(&oracle.evidence).unwrap(),
        );
        for e in &report.entries {
            let o = oracle.model(&e.model).expect("same models");
            push(
                format!("P({}|{x})", e.model),
                e.posterior_prob.value(),
                num_traits::ToPrimitive::to_f64(&o.posterior).unwrap(),
            );
            if let (Some(t), Some(ot)) = (e.tic, o.tic) {
                push(format!("TIC({x}->{})", e.model), t.value(), ot);
            }
        }
        push(
            format!("KL[{x}] expected-tic"),
            kl_expected_tic(ms, om, x)?.value,
            oracle.kl,
        );
        push(format!("KL[{x}] classical"), kl_classical(ms, om, x)?.value(), oracle.kl);
    }
    let mi = oracle_mi(&table);
    push("MI expected-tic".into(), mutual_information(ms, om)?.value, mi);
    push("MI classical".into(), mutual_information_classical(ms, om)?.value(), mi);

    Ok(VerifyOutcome {
        scenario: s.name.clone(),
        checks,
    })
}
