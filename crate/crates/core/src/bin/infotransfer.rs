use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use infotransfer::report::{
    verify_scenario, Format, KlDocument, MiDocument, ReportDocument, DEFAULT_PRECISION,
};
use infotransfer::{load_scenario, mhp_scenario, Error, HostPolicy, MhpConfig, MhpVariant, Probability};

const EXIT_USAGE: u8 = 2;
const EXIT_IMPOSSIBLE: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "infotransfer", version, about = "Bayesian updates in information space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Monty Hall scenario file.
    Mhp {
        /// traditional, biased, forgetful or custom-N
        variant: String,
        #[arg(long)]
        doors: Option<usize>,
        /// Comma-separated door prior, e.g. 1/2,1/3,1/6
        #[arg(long)]
        prior: Option<String>,
        #[arg(long)]
        pick: Option<String>,
        /// standard or forgetful
        #[arg(long)]
        policy: Option<String>,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Per-model transfer report for one observation.
    Solve {
        scenario: PathBuf,
        #[arg(long)]
        observe: String,
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// KL divergence of posterior from prior for one observation.
    Kl {
        scenario: PathBuf,
        #[arg(long)]
        observe: String,
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// Mutual information between models and observations.
    Mi {
        scenario: PathBuf,
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// Compare the engine against the exact enumeration oracle.
    Verify { scenario: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ImpossibleObservation(_) => EXIT_IMPOSSIBLE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn parse_prior(list: &str) -> Result<Vec<Probability>, Failure> {
    list.split(',')
        .map(|s| s.parse::<Probability>().map_err(Failure::from))
        .collect()
}

fn mhp_config(
    variant: &str,
    doors: Option<usize>,
    prior: Option<&str>,
    pick: Option<&str>,
    policy: Option<&str>,
) -> Result<(MhpConfig, Option<MhpVariant>), Failure> {
    let custom_doors = match variant.strip_prefix("custom") {
        Some("") | Some("-N") => Some(doors),
        Some(rest) => match rest.strip_prefix('-').and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if doors.is_none_or(|d| d == n) => Some(Some(n)),
            Some(_) => return Err(usage("--doors disagrees with the variant name")),
            None => return Err(usage(format!("unknown variant {variant:?}"))),
        },
        None => None,
    };
    match custom_doors {
        Some(doors) => {
            let doors = doors.ok_or_else(|| usage("custom variant requires --doors"))?;
            let prior = prior.map(parse_prior).transpose()?;
            let policy = policy.map_or(Ok(HostPolicy::Standard), str::parse)?;
            let cfg = MhpConfig::new(doors, prior, pick.unwrap_or("A"), policy)?;
            Ok((cfg, None))
        }
        None => {
            let v: MhpVariant = variant.parse()?;
            if doors.is_some() || prior.is_some() || policy.is_some() || pick.is_some_and(|p| p != "A") {
                return Err(usage(format!(
                    "variant {variant} is fixed; use custom-N to change doors, prior, pick or policy"
                )));
            }
            Ok((v.config(), Some(v)))
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Mhp {
            variant,
            doors,
            prior,
            pick,
            policy,
            output,
        } => {
            let (cfg, named) =
                mhp_config(&variant, doors, prior.as_deref(), pick.as_deref(), policy.as_deref())?;
            let scenario = match named {
                Some(v) => v.scenario(),
                None => {
                    let mut s = mhp_scenario(&cfg)?;
                    s.metadata.insert("variant".into(), "custom".into());
                    s
                }
            };
            match output {
                Some(path) => {
                    infotransfer::save_scenario(&scenario, path)?;
                    Ok(String::new())
                }
                None => Ok(scenario.to_json()),
            }
        }
        Command::Solve {
            scenario,
            observe,
            format,
            precision,
        } => {
            let s = load_scenario(scenario)?;
            Ok(ReportDocument::build(&s, &observe)?.render(format, precision))
        }
        Command::Kl {
            scenario,
            observe,
            format,
            precision,
        } => {
            let s = load_scenario(scenario)?;
            Ok(KlDocument::build(&s, &observe)?.render(format, precision))
        }
        Command::Mi {
            scenario,
            format,
            precision,
        } => {
            let s = load_scenario(scenario)?;
            Ok(MiDocument::build(&s)?.render(format, precision))
        }
        Command::Verify { scenario } => {
            let s = load_scenario(scenario)?;
            let outcome = verify_scenario(&s)?;
            let text = outcome.render();
            if outcome.passed() {
                Ok(text)
            } else {
                Err(Failure {
                    code: EXIT_VERIFY_FAILED,
                    message: text,
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.code == EXIT_VERIFY_FAILED {
                print!("{}", f.message);
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
