//! `polyent`: exact polynomial entropy of piecewise-linear interval maps.
//!
//! Exit codes: 0 when the result is decided, 2 when it is UNKNOWN within
//! budget, 1 on errors and failed checks.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use polyent_core::classify::DEFAULT_TYPE_BUDGET;
use polyent_core::horseshoe::HorseshoeCertificate;
use polyent_core::logistic::LogisticConfig;
use polyent_core::seporacle::OracleConfig;
use polyent_core::Limits;

use commands::SequenceSource;
use report::{Format, Inputs, RunReport};

#[derive(Debug, Parser)]
#[command(name = "polyent", version, about = "Polynomial entropy of piecewise-linear interval maps")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the floating-point oracle.
    #[arg(long, global = true, default_value_t = OracleConfig::default().seed)]
    seed: u64,
    /// Largest n such that periods 2^(n+1) are probed when classifying.
    #[arg(long, global = true, default_value_t = DEFAULT_TYPE_BUDGET)]
    budget: u32,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide the polynomial entropy of a map.
    Hpol { map: PathBuf },
    /// Fixed set, essential intervals, covering DAG and longest chain.
    Structure {
        map: PathBuf,
        /// Analyse this iterate of the map.
        #[arg(long, default_value_t = 1)]
        iterate: u64,
    },
    /// Build a one-way horseshoe certificate from the chain evidence.
    Horseshoe { map: PathBuf },
    /// Re-check a horseshoe certificate against a map.
    Verify { map: PathBuf, cert: PathBuf },
    /// Write a reference map.
    Family {
        /// One of f0, gn, plateau, tent.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Apply the doubling operator k times.
    Double {
        map: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
    },
    /// Floating-point separated-set estimate of the entropy exponent.
    SepEstimate {
        map: Option<PathBuf>,
        /// Use the logistic map with this parameter instead of a map file.
        #[arg(long, conflicts_with = "map")]
        logistic: Option<f64>,
        /// Comma-separated, strictly decreasing.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Largest horizon; the fit uses n_max/8, n_max/4, n_max/2, n_max.
        #[arg(long)]
        n_max: Option<usize>,
        /// Also write the (epsilon, n, count) table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Word complexity and entropy exponent of a symbol sequence.
    Subshift {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Separated-set bracket for the dendrite extension of a subshift.
    DendriteBound {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Attracting cycle and entropy of the logistic family.
    Logistic {
        #[arg(long)]
        lambda: Option<f64>,
        /// Inclusive grid a:b:step.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = LogisticConfig::default().lambda_inf)]
        lambda_inf: f64,
    },
}

#[derive(Debug, clap::Args)]
struct SeqArgs {
    /// File of digit symbols.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generate a Sturmian word from comma-separated continued-fraction digits.
    #[arg(long, value_delimiter = ',')]
    sturmian: Option<Vec<u32>>,
    /// Generate a periodic word from this pattern.
    #[arg(long)]
    periodic: Option<String>,
    /// Length of a generated word.
    #[arg(long, default_value_t = 1 << 14)]
    length: usize,
}

impl SeqArgs {
    fn source(&self) -> SequenceSource {
        SequenceSource {
            input: self.input.clone(),
            sturmian: self.sturmian.clone(),
            periodic: self.periodic.clone(),
            length: self.length,
        }
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<report::Outcome> {
    let limits = Limits::default();
    match &cli.command {
        Command::Hpol { map } => commands::hpol(&commands::read_map(inputs, map)?, cli.budget, &limits),
        Command::Structure { map, iterate } => {
            commands::structure_of(&commands::read_map(inputs, map)?, *iterate, &limits)
        }
        Command::Horseshoe { map } => commands::horseshoe(&commands::read_map(inputs, map)?, cli.budget, &limits),
        Command::Verify { map, cert } => {
            let f = commands::read_map(inputs, map)?;
            let text = inputs.read(cert)?;
            let cert: HorseshoeCertificate =
                serde_json::from_str(&text).with_context(|| format!("parsing certificate {}", cert.display()))?;
            commands::verify(&f, &cert, &limits)
        }
        Command::Family { kind, n } => commands::family(&commands::family_kind(kind, *n)?),
        Command::Double { map, k } => commands::doubled(&commands::read_map(inputs, map)?, *k),
        Command::SepEstimate {
            map,
            logistic,
            eps,
            n_max,
            csv,
        } => {
            let cfg = commands::oracle_config(eps.clone(), *n_max, cli.seed)?;
            let outcome = match (map, logistic) {
                (Some(p), None) => {
                    let fm = commands::read_map(inputs, p)?.to_float();
                    commands::sep_estimate(&|x| fm.eval(x), serde_json::json!({ "map": p }), &cfg)?
                }
                (None, Some(l)) => {
                    let l = *l;
                    anyhow::ensure!((0.0..=4.0).contains(&l), "logistic parameter {l} is outside [0, 4]");
                    commands::sep_estimate(&|x| l * x * (1.0 - x), serde_json::json!({ "logistic": l }), &cfg)?
                }
                _ => anyhow::bail!("give a map file or --logistic"),
            };
            if let (Some(path), Some(table)) = (csv, &outcome.table) {
                report::emit(&table.to_csv()?, Some(path))?;
            }
            Ok(outcome)
        }
        Command::Subshift { seq, n_max } => {
            commands::subshift(&commands::read_sequence(inputs, &seq.source())?, *n_max)
        }
        Command::DendriteBound { seq, n_max } => {
            commands::dendrite(&commands::read_sequence(inputs, &seq.source())?, *n_max)
        }
        Command::Logistic {
            lambda,
            sweep,
            lambda_inf,
        } => {
            let cfg = LogisticConfig {
                lambda_inf: *lambda_inf,
                ..LogisticConfig::default()
            };
            commands::logistic(*lambda, sweep.as_deref(), &cfg)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not configure {n} threads: {e}");
        }
    }
    let mut inputs = Inputs::default();
    let result = run(&cli, &mut inputs).and_then(|outcome| {
        let format = report::resolve_format(cli.format, cli.out.as_ref());
        let text = report::render(&outcome, format, |result| RunReport {
            command: std::iter::once("polyent".to_string()).chain(std::env::args().skip(1)).collect(),
            inputs: std::mem::take(&mut inputs.digests),
            version: env!("CARGO_PKG_VERSION"),
            seed: cli.seed,
            result,
        })?;
        report::emit(&text, cli.out.as_ref())?;
        Ok(outcome.status)
    });
    match result {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
