//! One-way horseshoe certificates and the counting behind separated-set bounds.
//!
//! A certificate is a family of pairwise disjoint closed intervals
//! `A_1, ..., A_l`, an iterate `k` with `f^k(A_i) ⊇ A_j` whenever `i <= j`,
//! and a non-recurrent witness point in `A_l`. Certificates are produced from
//! essential-interval chains or from simple `2^n`-cycles and re-checked
//! exactly by [`verify_horseshoe`].

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::exactnum::{RInterval, Rational};
use crate::fixstruct::{is_type1, verify_chain, EssentialInterval, Orientation, Type1Verdict};
use crate::plmap::PLMap;
use crate::{Error, Limits, Result};

#[derive(Serialize, Deserialize)]
struct RawCertificate {
    iterate: u64,
    intervals: Vec<(Rational, Rational)>,
    witness: Rational,
}

impl TryFrom<RawCertificate> for HorseshoeCertificate {
    type Error = Error;
    fn try_from(raw: RawCertificate) -> Result<Self> {
        let intervals = raw
            .intervals
            .into_iter()
            .map(|(a, b)| {
                RInterval::new(a, b, true, true)
                    .map_err(|_| Error::Parse("certificate interval with lo > hi".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HorseshoeCertificate {
            iterate: raw.iterate,
            intervals,
            witness: raw.witness,
        })
    }
}

impl From<HorseshoeCertificate> for RawCertificate {
    fn from(c: HorseshoeCertificate) -> Self {
        RawCertificate {
            iterate: c.iterate,
            intervals: c.intervals.into_iter().map(|i| (i.lo, i.hi)).collect(),
            witness: c.witness,
        }
    }
}

/// JSON form: `{"iterate": k, "intervals": [["a","b"], ...], "witness": "p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCertificate", into = "RawCertificate")]
pub struct HorseshoeCertificate {
    pub iterate: u64,
    /// Closed intervals `A_1..A_l`.
    pub intervals: Vec<RInterval>,
    pub witness: Rational,
}

impl HorseshoeCertificate {
    pub fn order(&self) -> usize {
        self.intervals.len()
    }

    /// Keeps the intervals at the given (increasing) positions. When the last
    /// interval is dropped the witness must be re-chosen, so callers keeping
    /// a proper prefix should supply a new witness.
    pub fn subfamily(&self, keep: &[usize], witness: Rational) -> HorseshoeCertificate {
        HorseshoeCertificate {
            iterate: self.iterate,
            intervals: keep.iter().map(|&i| self.intervals[i].clone()).collect(),
            witness,
        }
    }

    pub fn with_iterate(&self, iterate: u64) -> HorseshoeCertificate {
        HorseshoeCertificate {
            iterate,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "failure")]
pub enum VerifyFailure {
    #[error("malformed certificate: {reason}")]
    Malformed { reason: String },
    #[error("intervals A_{i} and A_{j} are not disjoint")]
    DisjointnessFailure { i: usize, j: usize },
    #[error("f^{iterate}(A_{i}) does not contain A_{j}")]
    CoveringFailure { iterate: u64, i: usize, j: usize },
    #[error("witness rejected: {reason}")]
    WitnessFailure { reason: String },
    #[error("budget exhausted: {reason}")]
    Budget { reason: String },
}

/// Steps of the exact forward orbit examined for eventual periodicity.
pub const WITNESS_HORIZON: usize = 64;

fn check_covering(g: &PLMap, iterate: u64, cert: &HorseshoeCertificate) -> std::result::Result<(), VerifyFailure> {
    for (i, ai) in cert.intervals.iter().enumerate() {
        let img = g.image(ai).map_err(|e| VerifyFailure::Malformed {
            reason: e.to_string(),
        })?;
        for (j, aj) in cert.intervals.iter().enumerate().skip(i) {
            if !aj.subset_of(&img) {
                return Err(VerifyFailure::CoveringFailure {
                    iterate,
                    i: i + 1,
                    j: j + 1,
                });
            }
        }
    }
    Ok(())
}

/// Outcome of following the exact forward orbit of a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitFate {
    /// Returns to the start: periodic.
    Periodic,
    /// Lands on a cycle that does not contain the start.
    EventuallyPeriodic,
    /// Neither within the horizon.
    Undecided,
}

pub fn orbit_fate(g: &PLMap, x: &Rational, horizon: usize) -> OrbitFate {
    let mut seen = HashSet::new();
    seen.insert(x.clone());
    let mut y = x.clone();
    for _ in 0..horizon {
        y = g.eval(&y).expect("self-map keeps points in [0,1]");
        if &y == x {
            return OrbitFate::Periodic;
        }
        if !seen.insert(y.clone()) {
            return OrbitFate::EventuallyPeriodic;
        }
    }
    OrbitFate::Undecided
}

/// Exact re-check of a certificate: shape, disjointness, covering under
/// `f^k` and `f^(2k)`, and non-recurrence of the witness.
///
/// The witness is accepted when its exact `f^k`-orbit falls onto a cycle
/// avoiding it, or when `f^k` has only fixed periodic points and moves it.
pub fn verify_horseshoe(
    f: &PLMap,
    cert: &HorseshoeCertificate,
    limits: &Limits,
) -> std::result::Result<(), VerifyFailure> {
    let malformed = |reason: &str| VerifyFailure::Malformed {
        reason: reason.into(),
    };
    if cert.intervals.is_empty() {
        return Err(malformed("no intervals"));
    }
    if cert.iterate == 0 {
        return Err(malformed("iterate must be positive"));
    }
    let unit = RInterval::unit();
    if cert.intervals.iter().any(|a| !a.is_closed() || !a.subset_of(&unit)) {
        return Err(malformed("intervals must be closed subsets of [0,1]"));
    }
    for i in 0..cert.intervals.len() {
        for j in i + 1..cert.intervals.len() {
            if cert.intervals[i].intersect(&cert.intervals[j]).is_some() {
                return Err(VerifyFailure::DisjointnessFailure { i: i + 1, j: j + 1 });
            }
        }
    }
    let budget = |e: Error| VerifyFailure::Budget {
        reason: e.to_string(),
    };
    let g = f.iterate(cert.iterate, limits).map_err(budget)?;
    check_covering(&g, cert.iterate, cert)?;
    let g2 = g.compose_within(&g, limits.max_pieces).map_err(budget)?;
    check_covering(&g2, 2 * cert.iterate, cert)?;

    let last = cert.intervals.last().expect("nonempty");
    if !last.contains(&cert.witness) {
        return Err(VerifyFailure::WitnessFailure {
            reason: format!("witness {} not in the last interval", cert.witness),
        });
    }
    if g.eval(&cert.witness).map_err(budget)? == cert.witness {
        return Err(VerifyFailure::WitnessFailure {
            reason: format!("witness {} is fixed by f^{}", cert.witness, cert.iterate),
        });
    }
    match orbit_fate(&g, &cert.witness, WITNESS_HORIZON) {
        OrbitFate::EventuallyPeriodic => return Ok(()),
        OrbitFate::Periodic => {
            return Err(VerifyFailure::WitnessFailure {
                reason: format!("witness {} is periodic", cert.witness),
            })
        }
        OrbitFate::Undecided => {}
    }
    match is_type1(&g, limits) {
        Type1Verdict::Yes => Ok(()),
        Type1Verdict::No { period, .. } => Err(VerifyFailure::WitnessFailure {
            reason: format!(
                "orbit not eventually periodic and f^{} has period-{period} points",
                cert.iterate
            ),
        }),
        Type1Verdict::Unknown { reason } => Err(VerifyFailure::Budget { reason }),
    }
}

/// The closed interval from the source of `ei` to its midpoint.
fn source_half(ei: &EssentialInterval) -> RInterval {
    let m = ei.interval.midpoint();
    match ei.orientation {
        Orientation::Up => RInterval::closed(ei.source.clone(), m),
        Orientation::Down => RInterval::closed(m, ei.source.clone()),
    }
}

/// Horseshoe from a chain of essential intervals of a map whose periodic
/// points are all fixed. The iterate is the least power of two that works.
pub fn horseshoe_from_chain(
    f: &PLMap,
    chain: &[EssentialInterval],
    limits: &Limits,
) -> Result<HorseshoeCertificate> {
    if chain.is_empty() {
        return Err(Error::EmptyChain);
    }
    verify_chain(f, chain, limits)?;
    let intervals: Vec<RInterval> = chain.iter().map(source_half).collect();
    let witness = intervals.last().expect("nonempty").midpoint();
    let mut g = f.clone();
    let mut k = 1u64;
    for e in 0..=limits.max_iterate_exp {
        let cert = HorseshoeCertificate {
            iterate: k,
            intervals: intervals.clone(),
            witness: witness.clone(),
        };
        if check_covering(&g, k, &cert).is_ok() {
            verify_horseshoe(f, &cert, limits).map_err(|failure| {
                Error::InternalInvariantViolation(format!(
                    "chain certificate failed verification: {failure}"
                ))
            })?;
            return Ok(cert);
        }
        if e < limits.max_iterate_exp {
            g = g.compose_within(&g, limits.max_pieces)?;
            k *= 2;
        }
    }
    Err(Error::StepBudgetExceeded(format!(
        "no iterate up to 2^{} realizes the covering",
        limits.max_iterate_exp
    )))
}

fn eval_pow2(f: &PLMap, x: &Rational, e: u32) -> Rational {
    let mut y = x.clone();
    for _ in 0..(1u64 << e) {
        y = f.eval(&y).expect("self-map keeps points in [0,1]");
    }
    y
}

fn as_set(points: &[Rational]) -> HashSet<&Rational> {
    points.iter().collect()
}

/// `points` (sorted) is a simple cycle of `f^(2^e)`.
fn is_simple(f: &PLMap, points: &[Rational], e: u32) -> bool {
    if points.len() <= 2 {
        return true;
    }
    let (left, right) = points.split_at(points.len() / 2);
    let img_l: Vec<Rational> = left.iter().map(|x| eval_pow2(f, x, e)).collect();
    let img_r: Vec<Rational> = right.iter().map(|x| eval_pow2(f, x, e)).collect();
    as_set(&img_l) == as_set(right)
        && as_set(&img_r) == as_set(left)
        && is_simple(f, left, e + 1)
        && is_simple(f, right, e + 1)
}

fn cycle_of(f: &PLMap, x: &Rational, period: u64) -> Vec<Rational> {
    let mut pts = Vec::with_capacity(period as usize);
    let mut y = x.clone();
    for _ in 0..period {
        pts.push(y.clone());
        y = f.eval(&y).expect("self-map keeps points in [0,1]");
    }
    pts.sort();
    pts.dedup();
    pts
}

fn candidate_points(c: &RInterval) -> Vec<Rational> {
    let mut out = Vec::new();
    if c.lo_closed {
        out.push(c.lo.clone());
    }
    if c.hi_closed {
        out.push(c.hi.clone());
    }
    if !c.is_point() {
        let len = c.length();
        for q in [Rational::new(1, 2), Rational::new(1, 4), Rational::new(3, 4)] {
            out.push(&c.lo + &len * q);
        }
    }
    out
}

/// Finds a simple cycle of period `2^n` among sampled periodic points.
pub fn find_simple_cycle(f: &PLMap, n: u32, limits: &Limits) -> Result<Vec<Rational>> {
    let period = 1u64 << n;
    for comp in f.periodic_points(period, limits)? {
        for x in candidate_points(&comp) {
            let cycle = cycle_of(f, &x, period);
            if cycle.len() as u64 == period && is_simple(f, &cycle, 0) {
                return Ok(cycle);
            }
        }
    }
    Err(Error::NoSimpleCycleFound(n))
}

/// Order-`(n-1)` horseshoe for `f^(2^n)` built from the nested middle
/// intervals of a simple `2^n`-cycle.
pub fn horseshoe_from_simple_cycle(f: &PLMap, n: u32, limits: &Limits) -> Result<HorseshoeCertificate> {
    if n < 2 {
        return Err(Error::Domain("simple-cycle horseshoes need n >= 2".into()));
    }
    let mut cycle = find_simple_cycle(f, n, limits)?;
    let mut intervals = Vec::with_capacity(n as usize - 1);
    loop {
        let half = cycle.len() / 2;
        intervals.push(RInterval::closed(cycle[half - 1].clone(), cycle[half].clone()));
        if cycle.len() == 4 {
            break;
        }
        cycle = cycle.split_off(half);
    }
    let iterate = 1u64 << n;
    let g = f.iterate(iterate, limits)?;
    let middle = intervals.last().expect("n >= 2 gives one interval");
    let witness = g.leftmost_preimage(&cycle[0], middle).ok_or_else(|| {
        Error::PreimageSelectionFailure(format!("no preimage of {} in {middle}", cycle[0]))
    })?;
    let cert = HorseshoeCertificate {
        iterate,
        intervals,
        witness,
    };
    verify_horseshoe(f, &cert, limits).map_err(|failure| {
        Error::InternalInvariantViolation(format!("simple-cycle certificate failed: {failure}"))
    })?;
    Ok(cert)
}

/// An `(n, epsilon)`-separated set for `f^iterate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatedWitness {
    pub iterate: u64,
    pub n: usize,
    pub epsilon: Rational,
    pub points: Vec<Rational>,
}

/// All nondecreasing words over `1..=ell` of length `k`, in lexicographic order.
pub fn nondecreasing_words(k: usize, ell: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, ell: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in min..=ell {
            cur.push(s);
            rec(k, ell, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, ell, 1, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Whether every pair of `points` is pushed more than `eps` apart by some
/// `g^t`, `0 <= t < n`.
pub fn is_separated(g: &PLMap, points: &[Rational], n: usize, eps: &Rational) -> bool {
    let orbits: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut orb = Vec::with_capacity(n);
            let mut y = p.clone();
            for t in 0..n {
                if t > 0 {
                    y = g.eval(&y).expect("self-map keeps points in [0,1]");
                }
                orb.push(y.clone());
            }
            orb
        })
        .collect();
    for i in 0..orbits.len() {
        for j in i + 1..orbits.len() {
            if !(0..n).any(|t| (&orbits[i][t] - &orbits[j][t]).abs() > *eps) {
                return false;
            }
        }
    }
    true
}

fn gap(a: &RInterval, b: &RInterval) -> Rational {
    (&b.lo - &a.hi).max(&a.lo - &b.hi)
}

/// One point per nondecreasing word of length `< n`, built by leftmost
/// preimage selection backwards from the witness, then re-checked exactly.
pub fn separated_witness_from_horseshoe(
    f: &PLMap,
    cert: &HorseshoeCertificate,
    n: usize,
    limits: &Limits,
) -> Result<SeparatedWitness> {
    if n == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let g = f.iterate(cert.iterate, limits)?;
    let ell = cert.intervals.len();
    let mut gaps: Vec<Rational> = Vec::new();
    for i in 0..ell {
        for j in i + 1..ell {
            gaps.push(gap(&cert.intervals[i], &cert.intervals[j]));
        }
    }
    let mut y = cert.witness.clone();
    for _ in 1..n {
        y = g.eval(&y)?;
        gaps.push((&y - &cert.witness).abs());
    }
    let epsilon = match gaps.into_iter().min() {
        Some(m) if m.is_positive() => m * Rational::half(),
        Some(m) => {
            return Err(Error::Domain(format!(
                "certificate geometry gives no positive separation (min gap {m})"
            )))
        }
        None => Rational::one(),
    };
    let mut points = Vec::new();
    for k in 0..n {
        for word in nondecreasing_words(k, ell) {
            let mut target = cert.witness.clone();
            for &s in word.iter().rev() {
                let a = &cert.intervals[s - 1];
                target = g.leftmost_preimage(&target, a).ok_or_else(|| {
                    Error::PreimageSelectionFailure(format!("no preimage of {target} in {a}"))
                })?;
            }
            points.push(target);
        }
    }
    let distinct: HashSet<&Rational> = points.iter().collect();
    if distinct.len() != points.len() || !is_separated(&g, &points, n, &epsilon) {
        return Err(Error::InternalInvariantViolation(
            "constructed set is not separated".into(),
        ));
    }
    Ok(SeparatedWitness {
        iterate: cert.iterate,
        n,
        epsilon,
        points,
    })
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Number of nondecreasing words of length `k` over `ell` symbols.
pub fn ndw_count(k: u64, ell: u64) -> BigUint {
    if ell == 0 {
        return if k == 0 { big(1) } else { big(0) };
    }
    binomial(big(k + ell - 1), big(ell - 1))
}

/// Number of nondecreasing words of length `< n` over `ell` symbols,
/// in closed form; the defining sum is evaluated alongside as a check.
pub fn en_count(n: u64, ell: u64) -> BigUint {
    let closed = if ell == 0 {
        big(u64::from(n > 0))
    } else {
        binomial(big(n + ell - 1), big(ell))
    };
    let summed: BigUint = (0..n).map(|k| ndw_count(k, ell)).sum();
    assert_eq!(closed, summed, "closed form disagrees with the word sum");
    closed
}

/// Ordered `m`-tuples of integers `>= 2` summing to `s`.
pub fn p2(m: u64, s: u64) -> BigUint {
    if m == 0 {
        return big(u64::from(s == 0));
    }
    if s < 2 * m {
        return big(0);
    }
    binomial(big(s - m - 1), big(m - 1))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(big).product()
}

/// Count of length-`n` words over `alphabet` symbols in which each repeated
/// symbol occupies one contiguous block and at most `ell` symbols repeat.
pub fn allowable_word_bound(n: u64, alphabet: u64, ell: u64) -> Result<BigUint> {
    if n <= alphabet {
        return Err(Error::Domain(format!(
            "word length {n} must exceed the alphabet size {alphabet}"
        )));
    }
    let mut total = big(0);
    for i in 1..=alphabet {
        let mut inner = big(0);
        for m in 1..=i.min(ell) {
            inner += binomial(big(i), big(m)) * p2(m, n - (i - m));
        }
        total += binomial(big(alphabet), big(i)) * factorial(i) * inner;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{double, make, FamilySpec};
    use crate::fixstruct::max_chain;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    fn g(n: u32) -> PLMap {
        make(&FamilySpec::Gn { n })
    }

    fn chain_cert(f: &PLMap) -> HorseshoeCertificate {
        let (_, chain) = max_chain(f, &lim()).unwrap();
        horseshoe_from_chain(f, &chain, &lim()).unwrap()
    }

    #[test]
    fn g2_chain_certificate() {
        let cert = chain_cert(&g(2));
        assert_eq!(
            cert.intervals,
            vec![
                RInterval::closed(r("0"), r("1/4")),
                RInterval::closed(r("1/2"), r("3/4"))
            ]
        );
        assert_eq!(cert.iterate, 1);
        assert_eq!(verify_horseshoe(&g(2), &cert, &lim()), Ok(()));
    }

    #[test]
    fn g1_chain_certificate() {
        let cert = chain_cert(&g(1));
        assert_eq!(cert.intervals, vec![RInterval::closed(r("0"), r("1/2"))]);
        let img = g(1).image(&cert.intervals[0]).unwrap();
        assert!(cert.intervals[0].subset_of(&img));
    }

    #[test]
    fn empty_chain_is_rejected() {
        assert_eq!(horseshoe_from_chain(&g(2), &[], &lim()), Err(Error::EmptyChain));
    }

    #[test]
    fn tampered_certificates_fail() {
        let cert = chain_cert(&g(2));
        let mut overlap = cert.clone();
        overlap.intervals[0] = RInterval::closed(r("0"), r("5/8"));
        assert!(matches!(
            verify_horseshoe(&g(2), &overlap, &lim()),
            Err(VerifyFailure::DisjointnessFailure { i: 1, j: 2 })
        ));
        let mut fixed = cert.clone();
        fixed.intervals[1] = RInterval::closed(r("1/2"), r("3/4"));
        fixed.witness = r("1/2");
        assert!(matches!(
            verify_horseshoe(&g(2), &fixed, &lim()),
            Err(VerifyFailure::WitnessFailure { .. })
        ));
        let swapped = cert.subfamily(&[1, 0], r("1/8"));
        assert!(matches!(
            verify_horseshoe(&g(2), &swapped, &lim()),
            Err(VerifyFailure::CoveringFailure { .. })
        ));
    }

    #[test]
    fn certificate_json_shape() {
        let cert = chain_cert(&g(2));
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            json,
            r#"{"iterate":1,"intervals":[["0","1/4"],["1/2","3/4"]],"witness":"5/8"}"#
        );
        let back: HorseshoeCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        let bad = r#"{"iterate":1,"intervals":[["1/2","1/4"]],"witness":"5/8"}"#;
        assert!(serde_json::from_str::<HorseshoeCertificate>(bad).is_err());
    }

    #[test]
    fn simple_cycle_horseshoes() {
        let df0 = double(&make(&FamilySpec::F0));
        let cert = horseshoe_from_simple_cycle(&df0, 2, &lim()).unwrap();
        assert_eq!(cert.order(), 1);
        assert_eq!(cert.iterate, 4);
        assert_eq!(cert.intervals[0], RInterval::closed(r("1/3"), r("2/3")));

        let ddf0 = double(&df0);
        let cert = horseshoe_from_simple_cycle(&ddf0, 3, &lim()).unwrap();
        assert_eq!(cert.order(), 2);
        assert_eq!(verify_horseshoe(&ddf0, &cert, &lim()), Ok(()));

        assert_eq!(
            horseshoe_from_simple_cycle(&PLMap::identity(), 2, &lim()),
            Err(Error::NoSimpleCycleFound(2))
        );
    }

    #[test]
    fn separated_witness_examples() {
        let cert = chain_cert(&g(2));
        let sw = separated_witness_from_horseshoe(&g(2), &cert, 3, &lim()).unwrap();
        assert_eq!(sw.points.len(), 6);
        let c1 = chain_cert(&g(1));
        let sw = separated_witness_from_horseshoe(&g(1), &c1, 5, &lim()).unwrap();
        assert_eq!(sw.points.len(), 5);
        let sw = separated_witness_from_horseshoe(&g(2), &cert, 1, &lim()).unwrap();
        assert_eq!(sw.points, vec![cert.witness.clone()]);
    }

    #[test]
    fn counting_examples() {
        assert_eq!(ndw_count(7, 4), big(120));
        assert_eq!(ndw_count(0, 5), big(1));
        assert_eq!(ndw_count(9, 1), big(1));
        assert_eq!(en_count(3, 2), big(6));
        assert_eq!(en_count(7, 1), big(7));
        assert_eq!(en_count(1, 4), big(1));
        assert_eq!(p2(2, 6), big(3));
        assert_eq!(p2(3, 6), big(1));
        assert_eq!(p2(3, 5), big(0));
        assert!(matches!(allowable_word_bound(4, 4, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn nondecreasing_word_listing() {
        assert_eq!(nondecreasing_words(0, 3), vec![Vec::<usize>::new()]);
        assert_eq!(
            nondecreasing_words(2, 2),
            vec![vec![1, 1], vec![1, 2], vec![2, 2]]
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            #[test]
            fn certificates_survive_iteration(n in 1u32..=4, m in 2u64..=3) {
                let f = g(n);
                let cert = chain_cert(&f);
                let k = cert.iterate;
                prop_assert_eq!(verify_horseshoe(&f, &cert.with_iterate(m * k), &lim()), Ok(()));
            }

            #[test]
            fn prefix_subfamilies_verify(n in 2u32..=4, keep in 1usize..=4) {
                let f = g(n);
                let cert = chain_cert(&f);
                let keep = keep.min(cert.order());
                let idx: Vec<usize> = (0..keep).collect();
                let w = cert.intervals[keep - 1].midpoint();
                prop_assert_eq!(verify_horseshoe(&f, &cert.subfamily(&idx, w), &lim()), Ok(()));
            }

            #[test]
            fn separated_counts_match(n in 1usize..=8, ell in 1u32..=3) {
                let f = g(ell);
                let cert = chain_cert(&f);
                let sw = separated_witness_from_horseshoe(&f, &cert, n, &lim()).unwrap();
                prop_assert_eq!(big(sw.points.len() as u64), en_count(n as u64, u64::from(ell)));
                prop_assert!(is_separated(&f.iterate(sw.iterate, &lim()).unwrap(), &sw.points, n, &sw.epsilon));
            }
        }
    }
}
