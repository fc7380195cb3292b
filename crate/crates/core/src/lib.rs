//! Discrete Bayesian inference carried out on information contents.
//!
//! An observation `x` delivers `TIC(x → θ) = I[P(x)] - I[P(x|θ)]` bits to each
//! model `θ`. Positive transfers make a model more probable, negative ones
//! make it less probable. KL divergence and mutual information follow as
//! expectations of the same quantity.
//!
//! ```
//! use infotransfer::{scenario::MhpVariant, bayes};
//!
//! let s = MhpVariant::Traditional.scenario();
//! let t = bayes::tic(s.model_space(), s.observation_model(), "Monty_B", "C").unwrap();
//! assert_eq!(t.value(), 1.0);
//! ```

pub mod aggregates;
pub mod bayes;
pub mod error;
pub mod info;
pub mod oracle;
pub mod report;
pub mod scenario;

pub use aggregates::{
    kl_classical, kl_expected_tic, mutual_information, mutual_information_classical, KlResult,
    MiResult,
};
pub use bayes::{
    bayes_factor, classify_tic, evidence, local_transfer_entropy, posterior_info,
    posterior_prob_info_form, posterior_prob_oracle, tic, transfer_report, BayesFactor,
    ModelSpace, ObservationModel, SignClass, TransferEntry, TransferReport,
};
pub use error::{Error, Result};
pub use info::{entropy, info_content, prob_from_info, Bits, Distribution, Probability, Scalar};
pub use scenario::{
    load_scenario, mhp_scenario, save_scenario, HostPolicy, MhpConfig, MhpVariant, Scenario,
};
