//! Word complexity of one-sided subshifts and the dendrite counting bounds.
//!
//! A subshift is seen through a finite prefix. `ω(n)` counts the distinct
//! length-`n` factors that start in `[0, len − n_max]`, so every counted
//! factor extends to the right inside the prefix. That makes `ω`
//! nondecreasing with `ω(n+1) ≤ k·ω(n)` by construction.
//!
//! Regressions only use lengths up to the reliability horizon, the largest
//! `n` with `len ≥ 50·n`.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::seporacle::fit_loglog;
use crate::{Error, Result};

/// Prefix length per unit of word length below which counts are unreliable.
pub const RELIABILITY_FACTOR: usize = 50;
/// Slack allowed between the dendrite lower slope and the upper value.
pub const BRACKET_TOLERANCE: f64 = 0.3;
/// Log-log fit residual above which growth is flagged superpolynomial.
pub const SUPERPOLYNOMIAL_RESIDUAL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    File { source: String },
    /// Characteristic word of the continued fraction whose partial quotients
    /// repeat `directives` periodically.
    Sturmian { directives: Vec<u32> },
    Periodic { pattern: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSequence {
    pub symbols: Vec<u8>,
    pub alphabet: u32,
    pub provenance: Provenance,
}

fn alphabet_of(symbols: &[u8]) -> u32 {
    symbols.iter().copied().max().map_or(1, |m| u32::from(m) + 1)
}

impl SymbolSequence {
    /// Parses a string of decimal digit symbols, ignoring whitespace.
    pub fn from_text(text: &str, source: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            if c.is_whitespace() {
                continue;
            }
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("symbol {c:?} at offset {i} is not a digit")))?;
            symbols.push(d as u8);
        }
        if symbols.is_empty() {
            return Err(Error::Parse("empty symbol sequence".into()));
        }
        Ok(SymbolSequence {
            alphabet: alphabet_of(&symbols),
            symbols,
            provenance: Provenance::File { source: source.into() },
        })
    }

    pub fn periodic(pattern: &str, len: usize) -> Result<Self> {
        let unit = Self::from_text(pattern, "")?.symbols;
        if len == 0 {
            return Err(Error::Domain("sequence length must be positive".into()));
        }
        let symbols: Vec<u8> = unit.iter().copied().cycle().take(len).collect();
        Ok(SymbolSequence {
            alphabet: alphabet_of(&unit),
            symbols,
            provenance: Provenance::Periodic { pattern: pattern.into() },
        })
    }

    /// Builds `s_k = s_{k−1}^{a_k} s_{k−2}` from `s_{−1} = 1`, `s_0 = 0`,
    /// cycling through `directives` for the `a_k`. All ones gives the
    /// Fibonacci word.
    pub fn sturmian(directives: &[u32], len: usize) -> Result<Self> {
        if directives.is_empty() || directives.contains(&0) {
            return Err(Error::Domain("directives must be a nonempty list of positive integers".into()));
        }
        if len == 0 {
            return Err(Error::Domain("sequence length must be positive".into()));
        }
        let mut prev: Vec<u8> = vec![1];
        let mut cur: Vec<u8> = vec![0];
        let mut k = 0;
        while cur.len() < len {
            let a = directives[k % directives.len()] as usize;
            let mut next = Vec::with_capacity(cur.len() * a + prev.len());
            for _ in 0..a {
                next.extend_from_slice(&cur);
            }
            next.extend_from_slice(&prev);
            prev = cur;
            cur = next;
            k += 1;
        }
        cur.truncate(len);
        Ok(SymbolSequence {
            symbols: cur,
            alphabet: 2,
            provenance: Provenance::Sturmian {
                directives: directives.to_vec(),
            },
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    /// `omega[n]` for `n = 0..=n_max`.
    pub omega: Vec<u64>,
    pub alphabet: u32,
    pub prefix_len: usize,
    pub reliability_horizon: usize,
}

impl ComplexityProfile {
    pub fn n_max(&self) -> usize {
        self.omega.len() - 1
    }
}

pub fn reliability_horizon(prefix_len: usize, n_max: usize) -> usize {
    n_max.min(prefix_len / RELIABILITY_FACTOR)
}

pub fn complexity(seq: &SymbolSequence, n_max: usize) -> Result<ComplexityProfile> {
    let len = seq.len();
    if len < 2 * n_max.max(1) {
        return Err(Error::PrefixTooShort {
            len,
            needed: 2 * n_max.max(1),
        });
    }
    if len < RELIABILITY_FACTOR * n_max {
        log::warn!(
            "prefix of length {len} is short for n_max = {n_max}; counts beyond n = {} undercount the language",
            len / RELIABILITY_FACTOR
        );
    }
    let last_start = len - n_max;
    let s = &seq.symbols;
    let omega: Vec<u64> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return 1;
            }
            let set: HashSet<&[u8]> = (0..=last_start).map(|i| &s[i..i + n]).collect();
            set.len() as u64
        })
        .collect();
    Ok(ComplexityProfile {
        omega,
        alphabet: seq.alphabet,
        prefix_len: len,
        reliability_horizon: reliability_horizon(len, n_max),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubshiftEstimate {
    pub slope: f64,
    pub residual: f64,
    /// Inclusive range of word lengths used by the fit.
    pub window: (usize, usize),
    pub reliability_horizon: usize,
    pub superpolynomial: bool,
    pub note: String,
}

const TRUNCATION_NOTE: &str =
    "counts come from a finite prefix and undercount the subshift language; the fit stops at the reliability horizon";

/// Largest power of two `top` with `top ≤ limit`, and the window `[top/2, top]`.
fn dyadic_window(limit: usize) -> Option<(usize, usize)> {
    if limit < 2 {
        return None;
    }
    let top = 1usize << (usize::BITS - 1 - limit.leading_zeros());
    Some((top / 2, top))
}

fn fit_window(lo: usize, hi: usize, y: impl Fn(usize) -> f64, x: impl Fn(usize) -> f64) -> (f64, f64) {
    let xs: Vec<f64> = (lo..=hi).map(&x).collect();
    let ys: Vec<f64> = (lo..=hi).map(&y).collect();
    fit_loglog(&xs, &ys)
}

/// Log-log slope of `ω(n)` against `n` over the top dyadic window below the
/// reliability horizon.
pub fn subshift_hpol_estimate(profile: &ComplexityProfile) -> Result<SubshiftEstimate> {
    if profile.n_max() < 8 {
        return Err(Error::InsufficientData(format!(
            "profile reaches n = {}, need at least 8",
            profile.n_max()
        )));
    }
    let limit = profile.reliability_horizon.min(profile.n_max());
    let (lo, hi) = dyadic_window(limit)
        .filter(|&(lo, _)| lo >= 2)
        .ok_or_else(|| Error::InsufficientData(format!("reliability horizon {limit} is below 4")))?;
    let (slope, residual) = fit_window(lo, hi, |n| profile.omega[n] as f64, |n| n as f64);
    Ok(SubshiftEstimate {
        slope,
        residual,
        window: (lo, hi),
        reliability_horizon: profile.reliability_horizon,
        superpolynomial: residual > SUPERPOLYNOMIAL_RESIDUAL,
        note: TRUNCATION_NOTE.into(),
    })
}

/// `Σ_{i=0}^{2n} ω(i)`, the size of the branch-point separated set at time `2n`.
pub fn dendrite_sep_lower(profile: &ComplexityProfile, n: usize) -> Result<BigUint> {
    if 2 * n > profile.n_max() {
        return Err(Error::InsufficientData(format!(
            "need ω up to {}, profile stops at {}",
            2 * n,
            profile.n_max()
        )));
    }
    Ok(profile.omega[..=2 * n].iter().map(|&w| BigUint::from(w)).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DendriteBracket {
    pub lower_slope: f64,
    pub lower_residual: f64,
    pub upper_value: f64,
    /// Inclusive range of `n` used by the lower fit (times are `2n`).
    pub window: (usize, usize),
    pub consistent: bool,
    pub subshift: SubshiftEstimate,
}

/// Lower slope from the separated-set counts against `2n`, upper value from
/// the product bound `h_pol(σ|X) + 1`.
pub fn dendrite_hpol_bracket(profile: &ComplexityProfile) -> Result<DendriteBracket> {
    if profile.n_max() < 16 {
        return Err(Error::InsufficientData(format!(
            "profile reaches n = {}, need at least 16",
            profile.n_max()
        )));
    }
    let subshift = subshift_hpol_estimate(profile)?;
    let limit = profile.reliability_horizon.min(profile.n_max()) / 2;
    let (lo, hi) = dyadic_window(limit)
        .ok_or_else(|| Error::InsufficientData(format!("reliability horizon {} is below 4", 2 * limit)))?;
    let sums: Vec<f64> = (0..=hi)
        .map(|n| dendrite_sep_lower(profile, n).map(|s| s.to_f64().unwrap_or(f64::INFINITY)))
        .collect::<Result<_>>()?;
    let (lower_slope, lower_residual) = fit_window(lo, hi, |n| sums[n], |n| 2.0 * n as f64);
    let upper_value = subshift.slope + 1.0;
    let consistent = lower_slope <= upper_value + BRACKET_TOLERANCE;
    if !consistent {
        log::warn!("dendrite lower slope {lower_slope:.3} exceeds upper value {upper_value:.3}");
    }
    Ok(DendriteBracket {
        lower_slope,
        lower_residual,
        upper_value,
        window: (lo, hi),
        consistent,
        subshift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fibonacci word by iterating `0 → 01, 1 → 0`.
    fn fibonacci_by_substitution(len: usize) -> Vec<u8> {
        let mut w = vec![0u8];
        while w.len() < len {
            w = w.iter().flat_map(|&c| if c == 0 { vec![0, 1] } else { vec![0] }).collect();
        }
        w.truncate(len);
        w
    }

    #[test]
    fn all_ones_directives_give_fibonacci() {
        let s = SymbolSequence::sturmian(&[1], 5000).unwrap();
        assert_eq!(s.symbols, fibonacci_by_substitution(5000));
    }

    #[test]
    fn complexity_examples() {
        let p = SymbolSequence::periodic("01", 1000).unwrap();
        assert_eq!(complexity(&p, 5).unwrap().omega, vec![1, 2, 2, 2, 2, 2]);
        let fib = SymbolSequence::sturmian(&[1], 4000).unwrap();
        let w = complexity(&fib, 8).unwrap().omega;
        assert_eq!(w, (0..=8u64).map(|n| n + 1).collect::<Vec<_>>());
        let c = SymbolSequence::periodic("0", 1000).unwrap();
        assert!(complexity(&c, 10).unwrap().omega.iter().all(|&w| w == 1));
    }

    #[test]
    fn short_prefix_is_rejected() {
        let p = SymbolSequence::periodic("01", 9).unwrap();
        assert!(matches!(
            complexity(&p, 5),
            Err(Error::PrefixTooShort { len: 9, needed: 10 })
        ));
        assert!(complexity(&p, 4).is_ok());
    }

    #[test]
    fn dendrite_examples() {
        let prof = |s: SymbolSequence| complexity(&s, 16).unwrap();
        let c = prof(SymbolSequence::periodic("0", 2000).unwrap());
        assert_eq!(dendrite_sep_lower(&c, 3).unwrap(), BigUint::from(7u32));
        let f = prof(SymbolSequence::sturmian(&[1], 2000).unwrap());
        assert_eq!(dendrite_sep_lower(&f, 3).unwrap(), BigUint::from(28u32));
        let p = prof(SymbolSequence::periodic("01", 2000).unwrap());
        assert_eq!(dendrite_sep_lower(&p, 3).unwrap(), BigUint::from(13u32));
        assert!(matches!(dendrite_sep_lower(&p, 9), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn sturmian_estimates() {
        let s = SymbolSequence::sturmian(&[1], 1 << 14).unwrap();
        let prof = complexity(&s, 64).unwrap();
        assert_eq!(prof.reliability_horizon, 64);
        let est = subshift_hpol_estimate(&prof).unwrap();
        assert_eq!(est.window, (32, 64));
        assert!((est.slope - 1.0).abs() < 0.2, "{est:?}");
        assert!(!est.superpolynomial);
        let br = dendrite_hpol_bracket(&prof).unwrap();
        assert!((1.7..=2.3).contains(&br.lower_slope), "{br:?}");
        assert!((br.upper_value - 2.0).abs() < 0.2);
        assert!(br.consistent);
    }

    #[test]
    fn bounded_complexity_estimates() {
        for pat in ["0", "01", "0110"] {
            let s = SymbolSequence::periodic(pat, 1 << 14).unwrap();
            let prof = complexity(&s, 64).unwrap();
            let est = subshift_hpol_estimate(&prof).unwrap();
            assert!(est.slope.abs() < 0.05, "{pat}: {est:?}");
            let br = dendrite_hpol_bracket(&prof).unwrap();
            assert!((br.lower_slope - 1.0).abs() < 0.1, "{pat}: {br:?}");
            assert!((br.upper_value - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn full_shift_is_flagged() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let text: String = (0..1 << 14).map(|_| if rng.gen::<bool>() { '1' } else { '0' }).collect();
        let s = SymbolSequence::from_text(&text, "random").unwrap();
        let prof = complexity(&s, 16).unwrap();
        assert_eq!(prof.omega[8], 256);
        let est = subshift_hpol_estimate(&prof).unwrap();
        assert!(est.superpolynomial, "{est:?}");
    }

    #[test]
    fn text_parsing() {
        let s = SymbolSequence::from_text("0120\n", "f").unwrap();
        assert_eq!(s.symbols, vec![0, 1, 2, 0]);
        assert_eq!(s.alphabet, 3);
        assert!(matches!(SymbolSequence::from_text("01a", "f"), Err(Error::Parse(_))));
        assert!(matches!(SymbolSequence::from_text(" \n", "f"), Err(Error::Parse(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn omega_is_monotone_and_branching_bounded(
                syms in prop::collection::vec(0u8..3, 40..200),
                n_max in 1usize..20,
            ) {
                let text: String = syms.iter().map(|d| char::from(b'0' + d)).collect();
                let s = SymbolSequence::from_text(&text, "p").unwrap();
                let prof = complexity(&s, n_max).unwrap();
                prop_assert_eq!(prof.omega[0], 1);
                for n in 0..n_max {
                    prop_assert!(prof.omega[n] <= prof.omega[n + 1]);
                    prop_assert!(prof.omega[n + 1] <= u64::from(s.alphabet) * prof.omega[n]);
                }
            }

            #[test]
            fn sturmian_omega_is_n_plus_one_and_submultiplicative(
                directives in prop::collection::vec(1u32..4, 1..4),
            ) {
                let s = SymbolSequence::sturmian(&directives, 1 << 13).unwrap();
                let prof = complexity(&s, 24).unwrap();
                for n in 0..=24 {
                    prop_assert_eq!(prof.omega[n], n as u64 + 1);
                }
                for m in 0..=12 {
                    for n in 0..=12 {
                        prop_assert!(prof.omega[m + n] <= prof.omega[m] * prof.omega[n]);
                    }
                }
            }

            #[test]
            fn dendrite_sum_matches_naive(pat in "[01]{1,6}", n in 0usize..8) {
                let s = SymbolSequence::periodic(&pat, 500).unwrap();
                let prof = complexity(&s, 16).unwrap();
                let naive: u64 = (0..=2 * n).map(|i| prof.omega[i]).sum();
                prop_assert_eq!(dendrite_sep_lower(&prof, n).unwrap(), BigUint::from(naive));
                if n > 0 {
                    prop_assert!(dendrite_sep_lower(&prof, n).unwrap() > dendrite_sep_lower(&prof, n - 1).unwrap());
                }
            }
        }
    }
}
