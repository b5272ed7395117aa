//! Essential-interval structure of maps whose periodic points are all fixed.
//!
//! For such a map every component of `[0,1] \ Fix(f)` is pushed consistently
//! in one direction. The components bounded by fixed points on both sides are
//! the essential intervals; their orbit closures define a covering DAG whose
//! longest path length is the polynomial entropy.

use serde::{Deserialize, Serialize};

use crate::exactnum::{RInterval, Rational};
use crate::plmap::PLMap;
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Orientation {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EssentialInterval {
    pub interval: RInterval,
    pub orientation: Orientation,
    pub source: Rational,
}

impl EssentialInterval {
    pub fn a(&self) -> &Rational {
        &self.interval.lo
    }

    pub fn b(&self) -> &Rational {
        &self.interval.hi
    }

    /// The endpoint orbits move towards inside the interval.
    pub fn sink(&self) -> &Rational {
        match self.orientation {
            Orientation::Up => self.b(),
            Orientation::Down => self.a(),
        }
    }

    fn reflected(&self) -> EssentialInterval {
        let one = Rational::one();
        EssentialInterval {
            interval: RInterval::open(&one - self.b(), &one - self.a()),
            orientation: match self.orientation {
                Orientation::Up => Orientation::Down,
                Orientation::Down => Orientation::Up,
            },
            source: &one - &self.source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClosure {
    pub base: EssentialInterval,
    pub far_end: Rational,
    pub attained: bool,
}

impl OrbitClosure {
    /// The orbit closure as an interval: `(source, far_end)` or `(source, far_end]`
    /// for up intervals, mirrored for down intervals.
    pub fn as_interval(&self) -> RInterval {
        let s = self.base.source.clone();
        let z = self.far_end.clone();
        match self.base.orientation {
            Orientation::Up => RInterval::new(s, z, false, self.attained),
            Orientation::Down => RInterval::new(z, s, self.attained, false),
        }
        .expect("orbit closure extends past its base interval")
    }

    /// Whether the orbit of the base interval contains the open interval `other`.
    pub fn covers(&self, other: &EssentialInterval) -> bool {
        match self.base.orientation {
            Orientation::Up => &self.base.source <= other.a() && other.b() <= &self.far_end,
            Orientation::Down => &self.far_end <= other.a() && other.b() <= &self.base.source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDag {
    pub nodes: Vec<EssentialInterval>,
    pub edges: Vec<(usize, usize)>,
}

/// Outcome of the budgeted "all periodic points are fixed" test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Type1Verdict {
    Yes,
    No { period: u64, witness: Rational },
    Unknown { reason: String },
}

/// Periods probed by [`is_type1`].
pub const TYPE1_PROBES: [u64; 4] = [2, 3, 4, 6];

/// Decides whether every periodic point is fixed, probing exact periods 2, 3, 4, 6.
pub fn is_type1(f: &PLMap, limits: &Limits) -> Type1Verdict {
    for p in TYPE1_PROBES {
        match f.periodic_points(p, limits) {
            Ok(comps) => {
                if let Some(c) = comps.first() {
                    return Type1Verdict::No {
                        period: p,
                        witness: c.sample_point(),
                    };
                }
            }
            Err(e) => {
                return Type1Verdict::Unknown {
                    reason: e.to_string(),
                }
            }
        }
    }
    Type1Verdict::Yes
}

fn require_type1(f: &PLMap, limits: &Limits) -> Result<()> {
    match is_type1(f, limits) {
        Type1Verdict::Yes => Ok(()),
        Type1Verdict::No { period, witness } => Err(Error::NotType1(format!(
            "point {witness} has exact period {period}"
        ))),
        Type1Verdict::Unknown { reason } => Err(Error::StepBudgetExceeded(format!(
            "type-1 check undecided: {reason}"
        ))),
    }
}

/// Components of `[0,1] \ Fix(f)`, split into essential intervals and the
/// boundary components that have a non-fixed endpoint at 0 or 1.
pub fn complement_components(f: &PLMap) -> (Vec<EssentialInterval>, Vec<RInterval>) {
    let fixed = f.fixed_set();
    let mut essential = Vec::new();
    let mut boundary = Vec::new();
    let zero = Rational::zero();
    let one = Rational::one();
    let first = fixed.first().expect("continuous self-maps of [0,1] have a fixed point");
    let last = fixed.last().expect("nonempty");
    if first.lo > zero {
        boundary.push(RInterval::new(zero, first.lo.clone(), true, false).expect("nonempty"));
    }
    for w in fixed.windows(2) {
        let iv = RInterval::open(w[0].hi.clone(), w[1].lo.clone());
        let m = iv.midpoint();
        let up = f.eval(&m).expect("inside unit interval") > m;
        let (orientation, source) = if up {
            (Orientation::Up, iv.lo.clone())
        } else {
            (Orientation::Down, iv.hi.clone())
        };
        essential.push(EssentialInterval {
            interval: iv,
            orientation,
            source,
        });
    }
    if last.hi < one {
        boundary.push(RInterval::new(last.hi.clone(), one, false, true).expect("nonempty"));
    }
    (essential, boundary)
}

/// Essential intervals in left-to-right order; the map must pass the type-1 check.
pub fn essential_intervals(f: &PLMap, limits: &Limits) -> Result<Vec<EssentialInterval>> {
    require_type1(f, limits)?;
    Ok(complement_components(f).0)
}

/// Maximum of `f` over `[lo, hi]` and whether it is hit at a breakpoint in `(lo, hi)`.
fn max_on(f: &PLMap, lo: &Rational, hi: &Rational) -> (Rational, bool, Rational) {
    let at_hi = f.eval(hi).expect("inside unit interval");
    let mut best = f.eval(lo).expect("inside unit interval").max(at_hi.clone());
    let inner: Vec<&Rational> = f
        .breakpoints()
        .iter()
        .filter(|b| &b.x > lo && &b.x < hi)
        .map(|b| &b.y)
        .collect();
    for y in &inner {
        if *y > &best {
            best = (*y).clone();
        }
    }
    let inner_hit = inner.contains(&&best);
    (best, inner_hit, at_hi)
}

fn orbit_closure_up(f: &PLMap, base: &EssentialInterval, limits: &Limits) -> Result<(Rational, bool)> {
    let x = base.source.clone();
    let fixed = f.fixed_set();
    let mut r = base.b().clone();
    let mut attained = false;
    for _ in 0..limits.max_hull_steps {
        // r strictly inside a fixed-point-free gap with the map pushing right:
        // the hull may creep towards the gap's right end without reaching it.
        if f.eval(&r)? > r {
            let p = fixed
                .iter()
                .find(|c| c.lo > r)
                .map(|c| c.lo.clone())
                .expect("a point pushed right has a fixed point to its right");
            let (m, inner_hit, _) = max_on(f, &x, &p);
            if m <= p {
                let hit = m == p && inner_hit;
                return Ok((p, hit));
            }
        }
        let (m, inner_hit, at_r) = max_on(f, &x, &r);
        let hit_m = inner_hit || (attained && at_r == m);
        let (next_r, next_attained) = match m.cmp(&r) {
            std::cmp::Ordering::Greater => (m, hit_m),
            std::cmp::Ordering::Equal => (r.clone(), attained || hit_m),
            std::cmp::Ordering::Less => (r.clone(), attained),
        };
        if next_r == r && next_attained == attained {
            return Ok((r, attained));
        }
        r = next_r;
        attained = next_attained;
    }
    Err(Error::StepBudgetExceeded(format!(
        "orbit closure of {:?} did not settle within {} steps",
        base.interval, limits.max_hull_steps
    )))
}

/// Exact far end of `Orb(I)` and whether it is attained.
///
/// The map is assumed to have passed the type-1 check; see [`essential_intervals`].
pub fn orbit_closure(f: &PLMap, base: &EssentialInterval, limits: &Limits) -> Result<OrbitClosure> {
    let (far_end, attained) = match base.orientation {
        Orientation::Up => orbit_closure_up(f, base, limits)?,
        Orientation::Down => {
            let (z, att) = orbit_closure_up(&f.reflect(), &base.reflected(), limits)?;
            (Rational::one() - z, att)
        }
    };
    Ok(OrbitClosure {
        base: base.clone(),
        far_end,
        attained,
    })
}

/// Orbit closures of all essential intervals, in the same order.
pub fn orbit_closures(
    f: &PLMap,
    nodes: &[EssentialInterval],
    limits: &Limits,
) -> Result<Vec<OrbitClosure>> {
    nodes.iter().map(|n| orbit_closure(f, n, limits)).collect()
}

fn dag_from_closures(closures: &[OrbitClosure]) -> Result<CoverDag> {
    let nodes: Vec<EssentialInterval> = closures.iter().map(|c| c.base.clone()).collect();
    let mut edges = Vec::new();
    for (i, ci) in closures.iter().enumerate() {
        for (j, nj) in nodes.iter().enumerate() {
            if i != j && ci.covers(nj) {
                edges.push((i, j));
            }
        }
    }
    let dag = CoverDag { nodes, edges };
    if topo_order(&dag).is_none() {
        return Err(Error::InternalInvariantViolation(
            "covering relation has a cycle".into(),
        ));
    }
    Ok(dag)
}

/// Kahn's algorithm; `None` if the graph has a cycle.
fn topo_order(dag: &CoverDag) -> Option<Vec<usize>> {
    let n = dag.nodes.len();
    let mut indeg = vec![0usize; n];
    for &(_, j) in &dag.edges {
        indeg[j] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).rev().collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        order.push(i);
        for &(a, b) in &dag.edges {
            if a == i {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Covering DAG: edge `i → j` iff `Orb(I_i) ⊇ I_j`.
pub fn cover_dag(f: &PLMap, limits: &Limits) -> Result<CoverDag> {
    let nodes = essential_intervals(f, limits)?;
    dag_from_closures(&orbit_closures(f, &nodes, limits)?)
}

/// Longest path (counted in nodes), lexicographically smallest among ties.
pub fn longest_path(dag: &CoverDag) -> Result<Vec<usize>> {
    let order = topo_order(dag).ok_or_else(|| {
        Error::InternalInvariantViolation("covering relation has a cycle".into())
    })?;
    let n = dag.nodes.len();
    let mut len = vec![1usize; n];
    let mut next: Vec<Option<usize>> = vec![None; n];
    for &i in order.iter().rev() {
        for &(a, b) in &dag.edges {
            if a != i {
                continue;
            }
            let cand = len[b] + 1;
            let better = cand > len[i] || (cand == len[i] && next[i].is_some_and(|c| b < c));
            if better {
                len[i] = cand;
                next[i] = Some(b);
            }
        }
    }
    let Some(start) = (0..n).max_by(|&a, &b| len[a].cmp(&len[b]).then(b.cmp(&a))) else {
        return Ok(Vec::new());
    };
    let mut path = vec![start];
    while let Some(j) = next[*path.last().expect("nonempty")] {
        path.push(j);
    }
    Ok(path)
}

/// Longest chain of essential intervals; its length is the polynomial entropy.
pub fn max_chain(f: &PLMap, limits: &Limits) -> Result<(usize, Vec<EssentialInterval>)> {
    let dag = cover_dag(f, limits)?;
    let path = longest_path(&dag)?;
    let chain: Vec<EssentialInterval> = path.iter().map(|&i| dag.nodes[i].clone()).collect();
    Ok((chain.len(), chain))
}

/// Re-checks that `chain` is a chain of distinct essential intervals of `f`
/// with each orbit closure covering the next interval.
pub fn verify_chain(f: &PLMap, chain: &[EssentialInterval], limits: &Limits) -> Result<()> {
    let nodes = essential_intervals(f, limits)?;
    for (k, c) in chain.iter().enumerate() {
        if !nodes.contains(c) {
            return Err(Error::Domain(format!(
                "chain element {k} {:?} is not an essential interval",
                c.interval
            )));
        }
        if chain[..k].contains(c) {
            return Err(Error::Domain(format!("chain element {k} repeats")));
        }
    }
    for w in chain.windows(2) {
        let oc = orbit_closure(f, &w[0], limits)?;
        if !oc.covers(&w[1]) {
            return Err(Error::Domain(format!(
                "orbit of {:?} does not cover {:?}",
                w[0].interval, w[1].interval
            )));
        }
    }
    Ok(())
}

/// Everything the structure report exposes for one map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub fixed: Vec<RInterval>,
    pub essential: Vec<EssentialInterval>,
    pub boundary: Vec<RInterval>,
    pub closures: Vec<OrbitClosure>,
    pub edges: Vec<(usize, usize)>,
    pub chain_length: usize,
    pub chain: Vec<usize>,
}

pub fn structure(f: &PLMap, limits: &Limits) -> Result<StructureReport> {
    require_type1(f, limits)?;
    let (essential, boundary) = complement_components(f);
    let closures = orbit_closures(f, &essential, limits)?;
    let dag = dag_from_closures(&closures)?;
    let chain = longest_path(&dag)?;
    Ok(StructureReport {
        fixed: f.fixed_set(),
        essential,
        boundary,
        closures,
        edges: dag.edges,
        chain_length: chain.len(),
        chain,
    })
}
