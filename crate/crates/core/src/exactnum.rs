//! Exact rational scalars and rational intervals.
//!
//! Every coordinate handled by the exact pipeline is a [`Rational`]: a
//! canonical fraction over arbitrary-precision integers. Composition of
//! piecewise-linear maps roughly squares coordinate bit-lengths, so fixed-width
//! integers are not an option here.
//!
//! [`RInterval`] models real intervals with independently open or closed
//! endpoints, including degenerate point intervals `[a, a]` (the image of a
//! plateau is a point).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Exact fraction in canonical form (positive denominator, reduced).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`, reducing to canonical form.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, Error> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Rational::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Rational) -> Rational {
        (self + other) * Rational::half()
    }

    /// Nearest double.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Total bit length of numerator and denominator; a cheap size measure.
    pub fn bits(&self) -> u64 {
        self.0.numer().bits() + self.0.denom().bits()
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Exact three-way comparison.
pub fn rat_cmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer = BigInt::from_str(n).map_err(|_| bad())?;
        let denom = BigInt::from_str(d).map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Real interval with rational endpoints and per-endpoint openness.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl RInterval {
    /// Validating constructor: requires `lo < hi`, or `lo == hi` with both ends closed.
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self, Error> {
        let iv = RInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        if iv.is_valid() {
            Ok(iv)
        } else {
            Err(Error::Domain(format!("empty interval {iv:?}")))
        }
    }

    fn try_make(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        RInterval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    fn is_valid(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed && self.hi_closed,
            Ordering::Greater => false,
        }
    }

    /// `[lo, hi]`; panics unless `lo <= hi`.
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        RInterval::new(lo, hi, true, true).expect("closed interval needs lo <= hi")
    }

    /// `(lo, hi)`; panics unless `lo < hi`.
    pub fn open(lo: Rational, hi: Rational) -> Self {
        RInterval::new(lo, hi, false, false).expect("open interval needs lo < hi")
    }

    pub fn point(x: Rational) -> Self {
        RInterval {
            lo: x.clone(),
            hi: x,
            lo_closed: true,
            hi_closed: true,
        }
    }

    /// The unit interval `[0, 1]`.
    pub fn unit() -> Self {
        RInterval::closed(Rational::zero(), Rational::one())
    }

    /// Degenerate point interval.
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match self.lo.cmp(x) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// True iff every real in `self` lies in `other`.
    pub fn subset_of(&self, other: &RInterval) -> bool {
        let lo_ok = match other.lo.cmp(&self.lo) {
            Ordering::Less => true,
            Ordering::Equal => other.lo_closed || !self.lo_closed,
            Ordering::Greater => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            Ordering::Less => true,
            Ordering::Equal => other.hi_closed || !self.hi_closed,
            Ordering::Greater => false,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &RInterval) -> Option<RInterval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        RInterval::try_make(lo, hi, lo_closed, hi_closed)
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &RInterval) -> RInterval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (self.lo.clone(), self.lo_closed),
            Ordering::Greater => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed || other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (other.hi.clone(), other.hi_closed),
            Ordering::Greater => (self.hi.clone(), self.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed || other.hi_closed),
        };
        RInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    /// `self \ other` as zero, one or two intervals in left-to-right order.
    pub fn difference(&self, other: &RInterval) -> Vec<RInterval> {
        if self.intersect(other).is_none() {
            return vec![self.clone()];
        }
        let mut out = Vec::with_capacity(2);
        if let Some(left) = RInterval::try_make(
            self.lo.clone(),
            other.lo.clone(),
            self.lo_closed,
            !other.lo_closed,
        ) {
            if left.subset_of(self) {
                out.push(left);
            }
        }
        if let Some(right) = RInterval::try_make(
            other.hi.clone(),
            self.hi.clone(),
            !other.hi_closed,
            self.hi_closed,
        ) {
            if right.subset_of(self) {
                out.push(right);
            }
        }
        out
    }

    /// A rational point inside the interval, preferring closed endpoints.
    pub fn sample_point(&self) -> Rational {
        if self.lo_closed {
            self.lo.clone()
        } else if self.hi_closed {
            self.hi.clone()
        } else {
            self.midpoint()
        }
    }
}

impl fmt::Debug for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Display for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Merges closed intervals into maximal disjoint closed components, sorted.
pub fn merge_closed(mut parts: Vec<RInterval>) -> Vec<RInterval> {
    parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
    let mut out: Vec<RInterval> = Vec::with_capacity(parts.len());
    for p in parts {
        if let Some(last) = out.last_mut() {
            if p.lo <= last.hi {
                if p.hi > last.hi {
                    last.hi = p.hi;
                }
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Removes every interval of `remove` from every interval of `from`.
pub fn subtract_all(from: &[RInterval], remove: &[RInterval]) -> Vec<RInterval> {
    let mut current: Vec<RInterval> = from.to_vec();
    for r in remove {
        current = current.iter().flat_map(|c| c.difference(r)).collect();
    }
    current.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
    current
}
