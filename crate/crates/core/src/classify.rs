//! Budgeted Sharkovskii-type classification and the end-to-end entropy algorithm.
//!
//! A map of type `2^n` is reduced to `g = f^(2^n)`, all of whose periodic
//! points are fixed; the polynomial entropy of `f` equals that of `g`, which is
//! the longest chain of essential intervals of `g`. A period that is not a
//! power of two forces infinite entropy.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::Rational;
use crate::fixstruct::{is_type1, max_chain, EssentialInterval, Type1Verdict};
use crate::plmap::PLMap;
use crate::{Error, Limits, Result};

/// Non-power-of-two periods probed by [`sharkovskii_type`].
pub const NON_POWER_PROBES: [u64; 4] = [3, 5, 6, 12];

pub const DEFAULT_TYPE_BUDGET: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SharkovskiiType {
    /// Largest period is `2^n`: period `2^n` present, `2^(n+1)` absent.
    PowerOfTwo { n: u32, witness: Rational },
    /// A period that is not a power of two exists.
    #[serde(rename = "AT_LEAST_2_INFINITY")]
    AtLeast2Infinity { period: u64, witness: Rational },
    /// Undecided: every tested power of two was present, or the budget ran out.
    Unknown { budget_used: u32, reason: String },
}

impl SharkovskiiType {
    /// `2^n` for decided power-of-two types.
    pub fn period(&self) -> Option<u64> {
        match self {
            SharkovskiiType::PowerOfTwo { n, .. } => Some(1u64 << n),
            _ => None,
        }
    }
}

/// Tests the periods in [`NON_POWER_PROBES`], then exact periods
/// `2^0 .. 2^(n_budget+1)`, stopping at the first absent one.
pub fn sharkovskii_type(f: &PLMap, n_budget: u32, limits: &Limits) -> SharkovskiiType {
    // a non-power period settles the question, so probe those first
    for p in NON_POWER_PROBES {
        match f.periodic_points(p, limits) {
            Ok(comps) => {
                if let Some(c) = comps.first() {
                    return SharkovskiiType::AtLeast2Infinity {
                        period: p,
                        witness: c.sample_point(),
                    };
                }
            }
            Err(err) => log::debug!("period {p} probe skipped: {err}"),
        }
    }
    let mut last_present: Option<(u32, Rational)> = None;
    let mut first_absent: Option<u32> = None;
    let mut budget_note: Option<String> = None;
    for e in 0..=n_budget + 1 {
        match f.periodic_points(1u64 << e, limits) {
            Ok(comps) => match comps.first() {
                Some(c) => last_present = Some((e, c.sample_point())),
                None => {
                    first_absent = Some(e);
                    break;
                }
            },
            Err(err) => {
                budget_note = Some(format!("period 2^{e}: {err}"));
                break;
            }
        }
    }
    match (first_absent, last_present) {
        (Some(_), Some((n, witness))) => SharkovskiiType::PowerOfTwo { n, witness },
        (_, last) => SharkovskiiType::Unknown {
            budget_used: last.map_or(0, |(e, _)| e),
            reason: budget_note.unwrap_or_else(|| {
                format!("all periods 2^0..2^{} present", n_budget + 1)
            }),
        },
    }
}

/// Polynomial entropy value: a nonnegative integer, infinite, or undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hpol {
    Finite(u64),
    Infinite,
    Unknown,
}

impl Hpol {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Hpol::Finite(h) => Some(*h),
            _ => None,
        }
    }
}

impl fmt::Display for Hpol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hpol::Finite(h) => write!(f, "{h}"),
            Hpol::Infinite => f.write_str("INFINITE"),
            Hpol::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

impl Serialize for Hpol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Hpol::Finite(h) => s.serialize_u64(*h),
            other => s.collect_str(other),
        }
    }
}

impl<'de> Deserialize<'de> for Hpol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Hpol::Finite)
                .ok_or_else(|| serde::de::Error::custom("h_pol must be a nonnegative integer")),
            serde_json::Value::String(s) if s == "INFINITE" => Ok(Hpol::Infinite),
            serde_json::Value::String(s) if s == "UNKNOWN" => Ok(Hpol::Unknown),
            other => Err(serde::de::Error::custom(format!("bad h_pol {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Longest chain of essential intervals of `f^iterate`.
    Chain {
        iterate: u64,
        chain: Vec<EssentialInterval>,
    },
    /// A point of a period that is not a power of two.
    Period { period: u64, witness: Rational },
    None { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub h_pol: Hpol,
    #[serde(rename = "type")]
    pub sharkovskii_type: SharkovskiiType,
    pub evidence: Evidence,
}

/// Decides the polynomial entropy of `f` within the given budgets.
pub fn polynomial_entropy(f: &PLMap, n_budget: u32, limits: &Limits) -> Result<EntropyReport> {
    let ty = sharkovskii_type(f, n_budget, limits);
    let unknown = |ty: SharkovskiiType, reason: String| EntropyReport {
        h_pol: Hpol::Unknown,
        sharkovskii_type: ty,
        evidence: Evidence::None { reason },
    };
    match &ty {
        SharkovskiiType::AtLeast2Infinity { period, witness } => Ok(EntropyReport {
            h_pol: Hpol::Infinite,
            evidence: Evidence::Period {
                period: *period,
                witness: witness.clone(),
            },
            sharkovskii_type: ty.clone(),
        }),
        SharkovskiiType::Unknown { reason, .. } => {
            let reason = reason.clone();
            Ok(unknown(ty, reason))
        }
        SharkovskiiType::PowerOfTwo { n, .. } => {
            let g = match f.iterate_pow2(*n, limits) {
                Ok(g) => g,
                Err(e) if e.is_budget() => return Ok(unknown(ty, e.to_string())),
                Err(e) => return Err(e),
            };
            match is_type1(&g, limits) {
                Type1Verdict::Yes => {}
                Type1Verdict::No { period, witness } => {
                    return Err(Error::InternalInvariantViolation(format!(
                        "f^{} has a point {witness} of period {period} despite type 2^{n}",
                        1u64 << n
                    )))
                }
                Type1Verdict::Unknown { reason } => return Ok(unknown(ty, reason)),
            }
            match max_chain(&g, limits) {
                Ok((len, chain)) => Ok(EntropyReport {
                    h_pol: Hpol::Finite(len as u64),
                    evidence: Evidence::Chain {
                        iterate: 1u64 << n,
                        chain,
                    },
                    sharkovskii_type: ty,
                }),
                Err(e) if e.is_budget() => Ok(unknown(ty, e.to_string())),
                Err(e) => Err(e),
            }
        }
    }
}

/// Zero-entropy test: the set of periodic points is connected.
///
/// Returns `None` when the budget runs out. A point of exact period 4 rules
/// out zero entropy; otherwise every periodic point is fixed by `f^2`.
pub fn zero_entropy_check(f: &PLMap, limits: &Limits) -> Option<bool> {
    match f.periodic_points(4, limits) {
        Ok(p4) if !p4.is_empty() => return Some(false),
        Ok(_) => {}
        Err(_) => return None,
    }
    let f2 = f.compose_within(f, limits.max_pieces).ok()?;
    Some(f2.fixed_set().len() == 1)
}

/// Entropy of a weakly monotone map: 0 if its periodic points form one
/// interval, 1 otherwise.
pub fn monotone_entropy(f: &PLMap) -> Result<u64> {
    if f.monotone_direction().is_none() {
        return Err(Error::NotMonotone);
    }
    let per = f.compose(f).fixed_set();
    Ok(if per.len() == 1 { 0 } else { 1 })
}
