//! Subcommand bodies. Each returns an [`Outcome`] for the dispatcher to emit.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use polyent_core::classify::{polynomial_entropy, Evidence, Hpol};
use polyent_core::families::{double, make, FamilySpec};
use polyent_core::fixstruct::structure;
use polyent_core::horseshoe::{horseshoe_from_chain, verify_horseshoe, HorseshoeCertificate};
use polyent_core::logistic::{is_monotone, logistic_hpol, parse_sweep, sweep, LogisticConfig, LogisticVerdict};
use polyent_core::seporacle::{slope_estimate, OracleConfig};
use polyent_core::symbolic::{
    complexity, dendrite_hpol_bracket, dendrite_sep_lower, subshift_hpol_estimate, SymbolSequence,
};
use polyent_core::{Limits, PLMap};

use crate::report::{Inputs, Outcome, Status, Table};

pub fn read_map(inputs: &mut Inputs, path: &Path) -> Result<PLMap> {
    let text = inputs.read(path)?;
    serde_json::from_str(&text).with_context(|| format!("parsing map file {}", path.display()))
}

fn hpol_status(h: &Hpol) -> Status {
    match h {
        Hpol::Unknown => Status::Unknown,
        _ => Status::Decided,
    }
}

fn hpol_cell(h: &Hpol) -> String {
    match h {
        Hpol::Finite(n) => n.to_string(),
        Hpol::Infinite => "INFINITE".into(),
        Hpol::Unknown => "UNKNOWN".into(),
    }
}

pub fn hpol(f: &PLMap, budget: u32, limits: &Limits) -> Result<Outcome> {
    let report = polynomial_entropy(f, budget, limits)?;
    let status = hpol_status(&report.h_pol);
    Outcome::report(report, status)
}

pub fn structure_of(f: &PLMap, iterate: u64, limits: &Limits) -> Result<Outcome> {
    let g = f.iterate(iterate, limits)?;
    let s = structure(&g, limits)?;
    Outcome::report(json!({ "iterate": iterate, "structure": s }), Status::Decided)
}

/// Certificate for `f` built from the chain evidence of its entropy report:
/// a horseshoe for `g = f^m` with iterate `k` is one for `f` with iterate `k·m`.
pub fn horseshoe(f: &PLMap, budget: u32, limits: &Limits) -> Result<Outcome> {
    let report = polynomial_entropy(f, budget, limits)?;
    let (iterate, chain) = match &report.evidence {
        Evidence::Chain { iterate, chain } if !chain.is_empty() => (*iterate, chain),
        Evidence::Chain { .. } => bail!("polynomial entropy is 0, so there is no horseshoe to certify"),
        Evidence::Period { period, .. } => {
            bail!("entropy is infinite (period {period} present); no chain to build a horseshoe from")
        }
        Evidence::None { reason } => {
            return Outcome::report(json!({ "entropy": report, "certificate": null, "reason": reason }), Status::Unknown)
        }
    };
    let g = f.iterate(iterate, limits)?;
    let on_g = horseshoe_from_chain(&g, chain, limits)?;
    let cert = on_g.with_iterate(on_g.iterate * iterate);
    verify_horseshoe(f, &cert, limits).map_err(|e| anyhow!("constructed certificate failed to verify: {e}"))?;
    Ok(Outcome {
        result: serde_json::to_value(&cert)?,
        table: None,
        status: Status::Decided,
        raw: true,
    })
}

pub fn verify(f: &PLMap, cert: &HorseshoeCertificate, limits: &Limits) -> Result<Outcome> {
    match verify_horseshoe(f, cert, limits) {
        Ok(()) => Outcome::report(
            json!({ "verified": true, "order": cert.order(), "iterate": cert.iterate }),
            Status::Decided,
        ),
        Err(failure) => {
            eprintln!("verification failed: {failure}");
            Outcome::report(json!({ "verified": false, "failure": failure }), Status::Failed)
        }
    }
}

pub fn family_kind(kind: &str, n: Option<u32>) -> Result<FamilySpec> {
    Ok(match kind {
        "f0" => FamilySpec::F0,
        "plateau" => FamilySpec::Plateau,
        "tent" => FamilySpec::Tent,
        "gn" => FamilySpec::Gn {
            n: n.ok_or_else(|| anyhow!("--kind gn needs --n"))?,
        },
        other => bail!("unknown family kind {other:?}; expected f0, gn, plateau or tent"),
    })
}

fn raw_map(f: &PLMap) -> Result<Outcome> {
    Ok(Outcome {
        result: serde_json::to_value(f)?,
        table: None,
        status: Status::Decided,
        raw: true,
    })
}

pub fn family(spec: &FamilySpec) -> Result<Outcome> {
    raw_map(&make(spec))
}

pub fn doubled(f: &PLMap, k: u32) -> Result<Outcome> {
    let mut g = f.clone();
    for _ in 0..k {
        g = double(&g);
    }
    raw_map(&g)
}

pub fn oracle_config(eps: Option<Vec<f64>>, n_max: Option<usize>, seed: u64) -> Result<OracleConfig> {
    let mut cfg = OracleConfig {
        seed,
        ..OracleConfig::default()
    };
    if let Some(e) = eps {
        cfg.epsilons = e;
    }
    if let Some(n) = n_max {
        if !n.is_power_of_two() || n < 16 {
            bail!("--n-max must be a power of two and at least 16");
        }
        cfg.horizons = (0..4).rev().map(|i| n >> i).collect();
    }
    Ok(cfg)
}

pub fn sep_estimate(f: &(dyn Fn(f64) -> f64 + Sync), source: serde_json::Value, cfg: &OracleConfig) -> Result<Outcome> {
    let est = slope_estimate(&f, cfg)?;
    let mut table = Table::new(vec!["epsilon", "n", "count"]);
    for c in &est.counts {
        table.push(vec![c.epsilon.to_string(), c.n.to_string(), c.count.to_string()]);
    }
    let summary = json!({
        "source": source,
        "config": cfg,
        "headline": est.headline,
        "per_epsilon": est.per_epsilon,
        "pool_size": est.pool_size,
        "counts": est.counts,
        "advisory": "floating-point estimate; never used for exact verdicts",
    });
    Ok(Outcome::report(summary, Status::Decided)?.with_table(table))
}

pub struct SequenceSource {
    pub input: Option<PathBuf>,
    pub sturmian: Option<Vec<u32>>,
    pub periodic: Option<String>,
    pub length: usize,
}

pub fn read_sequence(inputs: &mut Inputs, src: &SequenceSource) -> Result<SymbolSequence> {
    Ok(match (&src.input, &src.sturmian, &src.periodic) {
        (Some(p), None, None) => SymbolSequence::from_text(&inputs.read(p)?, &p.display().to_string())?,
        (None, Some(d), None) => SymbolSequence::sturmian(d, src.length)?,
        (None, None, Some(pat)) => SymbolSequence::periodic(pat, src.length)?,
        _ => bail!("give exactly one of --input, --sturmian, --periodic"),
    })
}

pub fn subshift(seq: &SymbolSequence, n_max: usize) -> Result<Outcome> {
    let profile = complexity(seq, n_max)?;
    let est = subshift_hpol_estimate(&profile)?;
    let mut table = Table::new(vec!["n", "omega"]);
    for (n, w) in profile.omega.iter().enumerate() {
        table.push(vec![n.to_string(), w.to_string()]);
    }
    let result = json!({
        "provenance": seq.provenance,
        "profile": profile,
        "estimate": est,
    });
    Ok(Outcome::report(result, Status::Decided)?.with_table(table))
}

pub fn dendrite(seq: &SymbolSequence, n_max: usize) -> Result<Outcome> {
    let profile = complexity(seq, n_max)?;
    let bracket = dendrite_hpol_bracket(&profile)?;
    let mut table = Table::new(vec!["time", "sep_lower"]);
    for n in 0..=n_max / 2 {
        table.push(vec![(2 * n).to_string(), dendrite_sep_lower(&profile, n)?.to_string()]);
    }
    let status = if bracket.consistent { Status::Decided } else { Status::Failed };
    if !bracket.consistent {
        eprintln!(
            "lower slope {:.3} exceeds upper value {:.3} by more than the tolerance",
            bracket.lower_slope, bracket.upper_value
        );
    }
    let result = json!({ "provenance": seq.provenance, "bracket": bracket });
    Ok(Outcome::report(result, status)?.with_table(table))
}

fn logistic_table(verdicts: &[LogisticVerdict]) -> Table {
    let mut table = Table::new(vec!["lambda", "period", "h_pol"]);
    for v in verdicts {
        let period = v.attractor.period().map_or_else(|| "UNDETECTED".into(), |p| p.to_string());
        table.push(vec![v.lambda.to_string(), period, hpol_cell(&v.h_pol)]);
    }
    table
}

pub fn logistic(lambda: Option<f64>, grid: Option<&str>, cfg: &LogisticConfig) -> Result<Outcome> {
    match (lambda, grid) {
        (Some(l), None) => {
            let v = logistic_hpol(l, cfg)?;
            let status = hpol_status(&v.h_pol);
            let table = logistic_table(std::slice::from_ref(&v));
            Ok(Outcome::report(v, status)?.with_table(table))
        }
        (None, Some(s)) => {
            let verdicts = sweep(&parse_sweep(s)?, cfg)?;
            let result = json!({ "monotone": is_monotone(&verdicts), "verdicts": verdicts });
            Ok(Outcome::report(result, Status::Decided)?.with_table(logistic_table(&verdicts)))
        }
        _ => bail!("give exactly one of --lambda and --sweep"),
    }
}
