//! Floating-point estimator of polynomial entropy from greedy separated sets.
//!
//! For each `(eps, n)` cell of a lattice a maximal `(n, eps)`-separated set is
//! grown greedily over a candidate pool, and `log count` is regressed on
//! `log n` for every `eps`. The result is advisory: it never feeds into
//! exact verdicts.
//!
//! The pool is a uniform grid plus extra seeds, refined by bisecting every
//! pool interval whose halves are still separated at the largest horizon and
//! half the smallest `eps`. Cells are filled in order of decreasing `eps`
//! and increasing `n`; each cell starts from the larger of its two already
//! computed neighbours, so counts are monotone across the lattice.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Strictly decreasing.
    pub epsilons: Vec<f64>,
    /// Strictly increasing, each at least 2.
    pub horizons: Vec<usize>,
    pub grid_size: usize,
    pub seed: u64,
    /// Hard cap on the refined candidate pool.
    pub pool_cap: usize,
    /// Extra candidate points, e.g. breakpoints or interval midpoints.
    pub extra_seeds: Vec<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            epsilons: vec![0.05, 0.02, 0.01, 0.005],
            horizons: vec![8, 16, 32, 64],
            grid_size: 1000,
            seed: 0x5eed,
            pool_cap: 150_000,
            extra_seeds: Vec::new(),
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Domain(m.to_string()));
        if self.epsilons.is_empty() || self.epsilons.iter().any(|&e| e.is_nan() || e <= 0.0) {
            return bad("epsilons must be positive");
        }
        if self.epsilons.windows(2).any(|w| w[0] <= w[1]) {
            return bad("epsilons must be strictly decreasing");
        }
        if self.horizons.is_empty() || self.horizons[0] < 2 {
            return bad("horizons must be at least 2");
        }
        if self.horizons.windows(2).any(|w| w[0] >= w[1]) {
            return bad("horizons must be strictly increasing");
        }
        if self.grid_size < 2 {
            return bad("grid needs at least 2 points");
        }
        Ok(())
    }
}

/// One lattice cell of the count table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SepCount {
    pub epsilon: f64,
    pub n: usize,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSlope {
    pub epsilon: f64,
    pub slope: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub per_epsilon: Vec<EpsilonSlope>,
    /// Slope at the smallest epsilon.
    pub headline: f64,
    pub counts: Vec<SepCount>,
    pub pool_size: usize,
}

/// Least-squares line through `(ln x, ln y)`: returns `(slope, rms residual)`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let e = y - (my + slope * (x - mx));
            e * e
        })
        .sum();
    (slope, (rss / k).sqrt())
}

fn trajectory<F: Fn(f64) -> f64>(f: &F, x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut y = x;
    for t in 0..n {
        if t > 0 {
            y = f(y);
        }
        out.push(y);
    }
    out
}

fn separated(a: &[f64], b: &[f64], n: usize, eps: f64) -> bool {
    a[..n].iter().zip(&b[..n]).any(|(x, y)| (x - y).abs() > eps)
}

/// Grid plus seeds, refined breadth-first by bisection.
///
/// Every frontier interval is split at its midpoint and each half is kept
/// while its endpoints are still separated at `eps_min / 2`. Testing the
/// halves rather than the parent catches folds, where both endpoints of an
/// interval shadow each other but the interior does not.
fn build_pool<F: Fn(f64) -> f64 + Sync>(f: &F, cfg: &OracleConfig, n_max: usize, eps_min: f64) -> Vec<f64> {
    let g = cfg.grid_size;
    let mut pool: Vec<f64> = (0..g).map(|i| i as f64 / (g - 1) as f64).collect();
    pool.extend(cfg.extra_seeds.iter().copied().filter(|x| (0.0..=1.0).contains(x)));
    pool.sort_by(f64::total_cmp);
    pool.dedup();
    let tol = eps_min / 2.0;
    let mut frontier: Vec<(f64, f64)> = pool.windows(2).map(|w| (w[0], w[1])).collect();
    while !frontier.is_empty() && pool.len() < cfg.pool_cap {
        let verdicts: Vec<Option<(f64, bool, bool)>> = frontier
            .par_iter()
            .map(|&(a, b)| {
                let mid = a + (b - a) / 2.0;
                if mid <= a || mid >= b {
                    return None;
                }
                let ta = trajectory(f, a, n_max);
                let tm = trajectory(f, mid, n_max);
                let tb = trajectory(f, b, n_max);
                let left = separated(&ta, &tm, n_max, tol);
                let right = separated(&tm, &tb, n_max, tol);
                (left || right).then_some((mid, left, right))
            })
            .collect();
        let mut next = Vec::new();
        for (&(a, b), v) in frontier.iter().zip(verdicts) {
            if let Some((mid, left, right)) = v {
                if pool.len() >= cfg.pool_cap {
                    break;
                }
                pool.push(mid);
                if left {
                    next.push((a, mid));
                }
                if right {
                    next.push((mid, b));
                }
            }
        }
        frontier = next;
    }
    pool.sort_by(f64::total_cmp);
    pool.dedup();
    pool
}

/// Admitted points bucketed by value at each time step.
struct ConflictIndex {
    eps: f64,
    nbuckets: usize,
    /// `buckets[t * nbuckets + b]` lists admitted ids whose time-`t` value is in bucket `b`.
    buckets: Vec<Vec<u32>>,
    n: usize,
}

impl ConflictIndex {
    fn new(n: usize, eps: f64) -> Self {
        let nbuckets = (1.0 / eps).floor() as usize + 1;
        ConflictIndex {
            eps,
            nbuckets,
            buckets: vec![Vec::new(); n * nbuckets],
            n,
        }
    }

    fn bucket(&self, v: f64) -> usize {
        ((v / self.eps).floor().max(0.0) as usize).min(self.nbuckets - 1)
    }

    fn insert(&mut self, id: u32, traj: &[f64]) {
        for (t, &v) in traj.iter().enumerate().take(self.n) {
            let b = self.bucket(v);
            self.buckets[t * self.nbuckets + b].push(id);
        }
    }

    /// True if `traj` is separated from every admitted trajectory.
    fn admissible(&self, traj: &[f64], trajs: &[Vec<f64>]) -> bool {
        let mut best_t = 0;
        let mut best_load = usize::MAX;
        for (t, &v) in traj.iter().enumerate().take(self.n) {
            let b = self.bucket(v);
            let lo = b.saturating_sub(1);
            let hi = (b + 1).min(self.nbuckets - 1);
            let load: usize = (lo..=hi).map(|k| self.buckets[t * self.nbuckets + k].len()).sum();
            if load < best_load {
                best_load = load;
                best_t = t;
                if load == 0 {
                    return true;
                }
            }
        }
        let b = self.bucket(traj[best_t]);
        let lo = b.saturating_sub(1);
        let hi = (b + 1).min(self.nbuckets - 1);
        for k in lo..=hi {
            for &id in &self.buckets[best_t * self.nbuckets + k] {
                if !separated(traj, &trajs[id as usize], self.n, self.eps) {
                    return false;
                }
            }
        }
        true
    }
}

fn greedy_extend(seed_set: &[u32], order: &[u32], trajs: &[Vec<f64>], n: usize, eps: f64) -> Vec<u32> {
    let mut idx = ConflictIndex::new(n, eps);
    let mut admitted: Vec<u32> = Vec::with_capacity(seed_set.len() * 2);
    let mut taken = vec![false; trajs.len()];
    for &id in seed_set {
        idx.insert(id, &trajs[id as usize]);
        admitted.push(id);
        taken[id as usize] = true;
    }
    for &id in order {
        if taken[id as usize] {
            continue;
        }
        let tr = &trajs[id as usize];
        if idx.admissible(tr, trajs) {
            idx.insert(id, tr);
            admitted.push(id);
            taken[id as usize] = true;
        }
    }
    admitted
}

/// Greedy separated-set sizes on the whole `(eps, n)` lattice of `cfg`.
pub fn sep_counts<F: Fn(f64) -> f64 + Sync>(f: &F, cfg: &OracleConfig) -> Result<(Vec<SepCount>, usize)> {
    cfg.validate()?;
    let n_max = *cfg.horizons.last().expect("validated");
    let eps_min = *cfg.epsilons.last().expect("validated");
    let pool = build_pool(f, cfg, n_max, eps_min);
    let trajs: Vec<Vec<f64>> = pool.par_iter().map(|&x| trajectory(f, x, n_max)).collect();
    let mut order: Vec<u32> = (0..pool.len() as u32).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));

    let ne = cfg.epsilons.len();
    let nh = cfg.horizons.len();
    let mut sets: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); nh]; ne];
    let mut counts = Vec::with_capacity(ne * nh);
    for (i, &eps) in cfg.epsilons.iter().enumerate() {
        for (j, &n) in cfg.horizons.iter().enumerate() {
            let up = if i > 0 { sets[i - 1][j].as_slice() } else { &[] };
            let left = if j > 0 { sets[i][j - 1].as_slice() } else { &[] };
            let seed_set = if up.len() >= left.len() { up } else { left }.to_vec();
            let set = greedy_extend(&seed_set, &order, &trajs, n, eps);
            counts.push(SepCount {
                epsilon: eps,
                n,
                count: set.len(),
            });
            sets[i][j] = set;
        }
    }
    Ok((counts, pool.len()))
}

/// Greedy lower bound on `sep(n, eps, f)` for a single cell.
pub fn sep_count<F: Fn(f64) -> f64 + Sync>(f: &F, n: usize, eps: f64, cfg: &OracleConfig) -> Result<usize> {
    let single = OracleConfig {
        epsilons: vec![eps],
        horizons: vec![n],
        ..cfg.clone()
    };
    Ok(sep_counts(f, &single)?.0[0].count)
}

/// Log-log slope of the separated-set counts for every epsilon.
pub fn slope_estimate<F: Fn(f64) -> f64 + Sync>(f: &F, cfg: &OracleConfig) -> Result<SlopeEstimate> {
    if cfg.horizons.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "need at least 4 horizons, got {}",
            cfg.horizons.len()
        )));
    }
    let (counts, pool_size) = sep_counts(f, cfg)?;
    let xs: Vec<f64> = cfg.horizons.iter().map(|&n| n as f64).collect();
    let per_epsilon: Vec<EpsilonSlope> = cfg
        .epsilons
        .iter()
        .map(|&eps| {
            let ys: Vec<f64> = counts
                .iter()
                .filter(|c| c.epsilon == eps)
                .map(|c| c.count as f64)
                .collect();
            let (slope, residual) = fit_loglog(&xs, &ys);
            EpsilonSlope {
                epsilon: eps,
                slope,
                residual,
            }
        })
        .collect();
    let headline = per_epsilon.last().expect("validated nonempty").slope;
    Ok(SlopeEstimate {
        per_epsilon,
        headline,
        counts,
        pool_size,
    })
}
