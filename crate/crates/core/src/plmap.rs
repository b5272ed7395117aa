//! Continuous piecewise-linear self-maps of `[0, 1]` with rational breakpoints.
//!
//! A [`PLMap`] is stored canonically: x strictly increasing from 0 to 1 and no
//! three consecutive breakpoints collinear. Composition keeps that form, so two
//! maps are equal as functions iff their breakpoint lists are equal.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::exactnum::{merge_closed, subtract_all, RInterval, Rational};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Breakpoint {
    pub x: Rational,
    pub y: Rational,
}

#[derive(Deserialize)]
struct RawPLMap {
    breakpoints: Vec<Breakpoint>,
}

impl TryFrom<RawPLMap> for PLMap {
    type Error = Error;
    fn try_from(raw: RawPLMap) -> Result<Self> {
        PLMap::new(raw.breakpoints.into_iter().map(|b| (b.x, b.y)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPLMap")]
pub struct PLMap {
    breakpoints: Vec<Breakpoint>,
}

/// Lap numbers `c_1, c_2, ...` of successive iterates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LapProfile {
    pub laps: Vec<u64>,
}

fn collinear(a: &Breakpoint, b: &Breakpoint, c: &Breakpoint) -> bool {
    (&b.y - &a.y) * (&c.x - &b.x) == (&c.y - &b.y) * (&b.x - &a.x)
}

fn push_merged(out: &mut Vec<Breakpoint>, p: Breakpoint) {
    while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
        out.pop();
    }
    out.push(p);
}

impl PLMap {
    /// Validates and canonicalizes a breakpoint list.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parse("a map needs at least 2 breakpoints".into()));
        }
        if !points[0].0.is_zero() || points[points.len() - 1].0 != Rational::one() {
            return Err(Error::Parse("breakpoints must start at x=0 and end at x=1".into()));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Parse(format!(
                    "x-coordinates not strictly increasing at x={}",
                    w[1].0
                )));
            }
        }
        let unit = RInterval::unit();
        if let Some((x, y)) = points.iter().find(|(_, y)| !unit.contains(y)) {
            return Err(Error::Parse(format!("value {y} at x={x} outside [0,1]")));
        }
        let mut bps = Vec::with_capacity(points.len());
        for (x, y) in points {
            push_merged(&mut bps, Breakpoint { x, y });
        }
        Ok(PLMap { breakpoints: bps })
    }

    /// Convenience constructor from `"p/q"` string pairs.
    pub fn from_strs(points: &[(&str, &str)]) -> Result<Self> {
        let parsed = points
            .iter()
            .map(|(x, y)| Ok((x.parse()?, y.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        PLMap::new(parsed)
    }

    pub fn identity() -> Self {
        PLMap {
            breakpoints: vec![
                Breakpoint {
                    x: Rational::zero(),
                    y: Rational::zero(),
                },
                Breakpoint {
                    x: Rational::one(),
                    y: Rational::one(),
                },
            ],
        }
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Number of linear pieces.
    pub fn pieces(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_identity(&self) -> bool {
        *self == PLMap::identity()
    }

    /// Consecutive breakpoint pairs, one per linear piece.
    pub fn segments(&self) -> impl Iterator<Item = (&Breakpoint, &Breakpoint)> {
        self.breakpoints.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Slope of every piece, left to right.
    pub fn slopes(&self) -> Vec<Rational> {
        self.segments()
            .map(|(a, b)| (&b.y - &a.y) / (&b.x - &a.x))
            .collect()
    }

    /// Index `i` of a piece `[x_i, x_{i+1}]` containing `t` (t assumed in range).
    fn segment_index(&self, t: &Rational) -> usize {
        let k = self.breakpoints.partition_point(|b| &b.x <= t);
        k.saturating_sub(1).min(self.breakpoints.len() - 2)
    }

    fn eval_in_range(&self, t: &Rational) -> Rational {
        let i = self.segment_index(t);
        let a = &self.breakpoints[i];
        let b = &self.breakpoints[i + 1];
        if t == &a.x {
            return a.y.clone();
        }
        if t == &b.x {
            return b.y.clone();
        }
        &a.y + (t - &a.x) * (&b.y - &a.y) / (&b.x - &a.x)
    }

    /// Exact value at `t`; `t` must lie in `[0, 1]`.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if !RInterval::unit().contains(t) {
            return Err(Error::Domain(format!("{t} outside [0,1]")));
        }
        Ok(self.eval_in_range(t))
    }

    /// `self ∘ g`, aborting once the result exceeds `max_pieces` pieces.
    pub fn compose_within(&self, g: &PLMap, max_pieces: usize) -> Result<PLMap> {
        let f = self;
        let mut out: Vec<Breakpoint> = Vec::with_capacity(g.breakpoints.len() + f.breakpoints.len());
        let first = &g.breakpoints[0];
        out.push(Breakpoint {
            x: first.x.clone(),
            y: f.eval_in_range(&first.y),
        });
        for (a, b) in g.segments() {
            match a.y.cmp(&b.y) {
                Ordering::Less => {
                    let lo = f.breakpoints.partition_point(|p| p.x <= a.y);
                    let hi = f.breakpoints.partition_point(|p| p.x < b.y);
                    for p in &f.breakpoints[lo..hi] {
                        let t = &a.x + (&p.x - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
                        push_merged(&mut out, Breakpoint { x: t, y: p.y.clone() });
                    }
                }
                Ordering::Greater => {
                    let lo = f.breakpoints.partition_point(|p| p.x <= b.y);
                    let hi = f.breakpoints.partition_point(|p| p.x < a.y);
                    for p in f.breakpoints[lo..hi].iter().rev() {
                        let t = &a.x + (&p.x - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
                        push_merged(&mut out, Breakpoint { x: t, y: p.y.clone() });
                    }
                }
                Ordering::Equal => {}
            }
            push_merged(
                &mut out,
                Breakpoint {
                    x: b.x.clone(),
                    y: f.eval_in_range(&b.y),
                },
            );
            if out.len() - 1 > max_pieces {
                return Err(Error::BudgetExceeded {
                    pieces: out.len() - 1,
                    cap: max_pieces,
                });
            }
        }
        Ok(PLMap { breakpoints: out })
    }

    /// `self ∘ g` without a piece cap.
    pub fn compose(&self, g: &PLMap) -> PLMap {
        self.compose_within(g, usize::MAX)
            .expect("uncapped composition cannot exceed its budget")
    }

    /// `self^n` by binary exponentiation (`self^0` is the identity).
    pub fn iterate(&self, n: u64, limits: &Limits) -> Result<PLMap> {
        let mut result = PLMap::identity();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose_within(&base, limits.max_pieces)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose_within(&base, limits.max_pieces)?;
            }
        }
        Ok(result)
    }

    /// `self^(2^e)` by repeated squaring.
    pub fn iterate_pow2(&self, e: u32, limits: &Limits) -> Result<PLMap> {
        let mut g = self.clone();
        for _ in 0..e {
            g = g.compose_within(&g, limits.max_pieces)?;
        }
        Ok(g)
    }

    /// Exact image of `J ⊆ [0,1]`, with endpoint openness decided by attainment.
    pub fn image(&self, j: &RInterval) -> Result<RInterval> {
        if !j.subset_of(&RInterval::unit()) {
            return Err(Error::Domain(format!("{j} not inside [0,1]")));
        }
        // candidate points in increasing order, flagged by membership in J
        let mut cands: Vec<(Rational, bool)> = vec![(j.lo.clone(), j.lo_closed)];
        let lo = self.breakpoints.partition_point(|p| p.x <= j.lo);
        let hi = self.breakpoints.partition_point(|p| p.x < j.hi);
        if lo < hi {
            cands.extend(self.breakpoints[lo..hi].iter().map(|p| (p.x.clone(), true)));
        }
        if j.hi != j.lo {
            cands.push((j.hi.clone(), j.hi_closed));
        }
        let vals: Vec<Rational> = cands.iter().map(|(t, _)| self.eval_in_range(t)).collect();
        let min = vals.iter().min().expect("nonempty").clone();
        let max = vals.iter().max().expect("nonempty").clone();
        let attained = |m: &Rational| {
            cands.iter().zip(&vals).any(|((_, inside), v)| *inside && v == m)
                || vals.windows(2).any(|w| &w[0] == m && &w[1] == m)
        };
        if min == max {
            return Ok(RInterval::point(min));
        }
        let lo_closed = attained(&min);
        let hi_closed = attained(&max);
        RInterval::new(min, max, lo_closed, hi_closed)
    }

    /// Maximal components of `{t : f(t) = t}`, sorted, each closed.
    pub fn fixed_set(&self) -> Vec<RInterval> {
        let mut parts = Vec::new();
        for (a, b) in self.segments() {
            let h0 = &a.y - &a.x;
            let h1 = &b.y - &b.x;
            match (h0.signum(), h1.signum()) {
                (0, 0) => parts.push(RInterval::closed(a.x.clone(), b.x.clone())),
                (0, _) => parts.push(RInterval::point(a.x.clone())),
                (_, 0) => parts.push(RInterval::point(b.x.clone())),
                (s0, s1) if s0 != s1 => {
                    // h is linear on the piece: solve h(t) = 0
                    let t = &a.x + &h0 * (&b.x - &a.x) / (&h0 - &h1);
                    parts.push(RInterval::point(t));
                }
                _ => {}
            }
        }
        merge_closed(parts)
    }

    /// Components of the set of points of exact period `p`.
    pub fn periodic_points(&self, p: u64, limits: &Limits) -> Result<Vec<RInterval>> {
        if p == 0 {
            return Err(Error::Domain("period must be positive".into()));
        }
        let fix_p = self.iterate(p, limits)?.fixed_set();
        let mut remove = Vec::new();
        for r in prime_factors(p) {
            remove.extend(self.iterate(p / r, limits)?.fixed_set());
        }
        Ok(subtract_all(&fix_p, &remove))
    }

    /// Minimal number of weakly monotone laps (plateaus merged into neighbours).
    pub fn laps(&self) -> u64 {
        let mut laps = 1;
        let mut dir = 0i8;
        for s in self.slopes() {
            let d = s.signum();
            if d == 0 {
                continue;
            }
            if dir != 0 && d != dir {
                laps += 1;
            }
            dir = d;
        }
        laps
    }

    /// Lap numbers `c_1..c_{n_max}` of the iterates `f^1..f^{n_max}`.
    pub fn lap_numbers(&self, n_max: usize, limits: &Limits) -> Result<LapProfile> {
        if n_max == 0 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        let mut laps = Vec::with_capacity(n_max);
        let mut g = self.clone();
        laps.push(g.laps());
        for _ in 1..n_max {
            g = self.compose_within(&g, limits.max_pieces)?;
            laps.push(g.laps());
        }
        Ok(LapProfile { laps })
    }

    /// `Some(1)` if weakly increasing, `Some(-1)` if weakly decreasing,
    /// `Some(0)` if constant, `None` otherwise.
    pub fn monotone_direction(&self) -> Option<i8> {
        let signs: Vec<i8> = self.slopes().iter().map(Rational::signum).collect();
        let up = signs.iter().any(|&s| s > 0);
        let down = signs.iter().any(|&s| s < 0);
        match (up, down) {
            (false, false) => Some(0),
            (true, false) => Some(1),
            (false, true) => Some(-1),
            (true, true) => None,
        }
    }

    /// Conjugate by `x ↦ 1 − x`: the map `t ↦ 1 − f(1 − t)`.
    pub fn reflect(&self) -> PLMap {
        let one = Rational::one();
        let bps = self
            .breakpoints
            .iter()
            .rev()
            .map(|b| Breakpoint {
                x: &one - &b.x,
                y: &one - &b.y,
            })
            .collect();
        PLMap { breakpoints: bps }
    }

    /// Leftmost `t ∈ J` with `f(t) = y`, if any.
    pub fn leftmost_preimage(&self, y: &Rational, j: &RInterval) -> Option<Rational> {
        for (a, b) in self.segments() {
            if b.x < j.lo || a.x > j.hi {
                continue;
            }
            let seg = RInterval::closed(a.x.clone(), b.x.clone());
            let Some(part) = seg.intersect(j) else { continue };
            if a.y == b.y {
                if &a.y == y {
                    return Some(if part.lo_closed { part.lo.clone() } else { part.sample_point() });
                }
                continue;
            }
            let t = &a.x + (y - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
            if part.contains(&t) {
                return Some(t);
            }
        }
        None
    }

    /// Nearest-double lowering for the float oracle.
    pub fn to_float(&self) -> FloatMap {
        FloatMap {
            xs: self.breakpoints.iter().map(|b| b.x.to_f64()).collect(),
            ys: self.breakpoints.iter().map(|b| b.y.to_f64()).collect(),
        }
    }
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Float approximation of a [`PLMap`].
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMap {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl FloatMap {
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = self.xs.partition_point(|&x| x <= t);
        let i = k.saturating_sub(1).min(self.xs.len() - 2);
        let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]);
        let v = if x1 > x0 { y0 + (t - x0) * (y1 - y0) / (x1 - x0) } else { y0 };
        v.clamp(0.0, 1.0)
    }

    pub fn breakpoint_xs(&self) -> &[f64] {
        &self.xs
    }
}
