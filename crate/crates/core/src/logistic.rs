//! The logistic family `f_λ(x) = λx(1−x)` along the period-doubling cascade.
//!
//! The attracting cycle is found by following the critical orbit of `1/2`
//! in floating point, then mapped to polynomial entropy: a fixed point at
//! zero gives 0, a 2^n-cycle gives `n+1`, and parameters at or beyond the
//! accumulation point `λ_∞` give infinity. Parameters too close to a
//! bifurcation converge too slowly to be detected and stay UNKNOWN.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{polynomial_entropy, EntropyReport, Hpol};
use crate::plmap::PLMap;
use crate::seporacle::fit_loglog;
use crate::{Error, Limits, Result};

/// Slack allowed in `h_pol ≤ 1 + lap slope`.
pub const LAP_BOUND_TOLERANCE: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    pub tol: f64,
    pub burn_in: u64,
    pub max_period_exp: u32,
    /// Accumulation point of the period-doubling cascade.
    pub lambda_inf: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            tol: 1e-9,
            burn_in: 1_000_000,
            max_period_exp: 10,
            lambda_inf: 3.5699456,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Attractor {
    FixedAtZero,
    Cycle { period: u64, orbit: Vec<f64> },
    Undetected,
}

impl Attractor {
    pub fn period(&self) -> Option<u64> {
        match self {
            Attractor::FixedAtZero => Some(1),
            Attractor::Cycle { period, .. } => Some(*period),
            Attractor::Undetected => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticVerdict {
    pub lambda: f64,
    pub attractor: Attractor,
    pub h_pol: Hpol,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=4.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda {lambda} is outside [0, 4]")));
    }
    Ok(())
}

/// Burns in the critical orbit, then returns the smallest `2^n` for which the
/// orbit repeats within `tol` over a verification window of `2·2^n + 64`
/// steps.
pub fn detect_attracting_cycle(lambda: f64, tol: f64, burn_in: u64, max_period_exp: u32) -> Result<Attractor> {
    check_lambda(lambda)?;
    let f = |x: f64| lambda * x * (1.0 - x);
    let mut x = 0.5;
    for _ in 0..burn_in {
        x = f(x);
    }
    let longest = 1usize << max_period_exp;
    let mut orbit = Vec::with_capacity(3 * longest + 64);
    orbit.push(x);
    for _ in 1..3 * longest + 64 {
        x = f(x);
        orbit.push(x);
    }
    for e in 0..=max_period_exp {
        let p = 1usize << e;
        let window = 2 * p + 64;
        if (0..window).all(|t| (orbit[t + p] - orbit[t]).abs() < tol) {
            if p == 1 && lambda <= 1.0 {
                return Ok(Attractor::FixedAtZero);
            }
            let mut cycle = orbit[..p].to_vec();
            cycle.sort_by(f64::total_cmp);
            return Ok(Attractor::Cycle {
                period: p as u64,
                orbit: cycle,
            });
        }
    }
    Ok(Attractor::Undetected)
}

pub fn logistic_hpol(lambda: f64, cfg: &LogisticConfig) -> Result<LogisticVerdict> {
    check_lambda(lambda)?;
    if lambda >= cfg.lambda_inf {
        return Ok(LogisticVerdict {
            lambda,
            attractor: Attractor::Undetected,
            h_pol: Hpol::Infinite,
        });
    }
    let attractor = detect_attracting_cycle(lambda, cfg.tol, cfg.burn_in, cfg.max_period_exp)?;
    let h_pol = match &attractor {
        Attractor::FixedAtZero => Hpol::Finite(0),
        Attractor::Cycle { period, .. } => Hpol::Finite(u64::from(period.trailing_zeros()) + 1),
        Attractor::Undetected => Hpol::Unknown,
    };
    Ok(LogisticVerdict {
        lambda,
        attractor,
        h_pol,
    })
}

/// Parses `a:b:step` into the inclusive grid `a, a+step, …` up to `b`.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("sweep {text:?}: {e}"))))
        .collect::<Result<_>>()?;
    let [a, b, step] = parts[..] else {
        return Err(Error::Parse(format!("sweep {text:?} is not of the form a:b:step")));
    };
    if step <= 0.0 || b < a {
        return Err(Error::Domain(format!("sweep {text:?} needs a ≤ b and a positive step")));
    }
    // round grid points to the decimals written in the input
    let decimals = text
        .split(':')
        .map(|s| s.trim().split_once('.').map_or(0, |(_, frac)| frac.len()))
        .max()
        .unwrap_or(0)
        .min(15) as i32;
    let scale = 10f64.powi(decimals);
    let count = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| ((a + i as f64 * step) * scale).round() / scale).collect())
}

pub fn sweep(lambdas: &[f64], cfg: &LogisticConfig) -> Result<Vec<LogisticVerdict>> {
    lambdas.par_iter().map(|&l| logistic_hpol(l, cfg)).collect()
}

fn rank(h: &Hpol) -> Option<u64> {
    match h {
        Hpol::Finite(n) => Some(*n),
        Hpol::Infinite => Some(u64::MAX),
        Hpol::Unknown => None,
    }
}

/// Whether the decided verdicts are nondecreasing in `λ`; UNKNOWN entries are skipped.
pub fn is_monotone(verdicts: &[LogisticVerdict]) -> bool {
    let mut sorted: Vec<&LogisticVerdict> = verdicts.iter().collect();
    sorted.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let ranks: Vec<u64> = sorted.iter().filter_map(|v| rank(&v.h_pol)).collect();
    ranks.windows(2).all(|w| w[0] <= w[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LapBoundCheck {
    pub laps: Vec<u64>,
    pub slope: f64,
    pub report: EntropyReport,
    pub ok: bool,
}

/// Checks `h_pol(f) ≤ 1 + slope` where the slope is fitted to `log c_n`
/// against `log n` for `n = 1..=n_max`.
pub fn lap_bound_check(f: &PLMap, n_max: usize, n_budget: u32, limits: &Limits) -> Result<LapBoundCheck> {
    let report = polynomial_entropy(f, n_budget, limits)?;
    let Hpol::Finite(h) = report.h_pol else {
        return Err(Error::Domain(format!(
            "the lap bound needs a finite decided entropy, got {:?}",
            report.h_pol
        )));
    };
    if n_max < 2 {
        return Err(Error::InsufficientData("need lap numbers for at least two iterates".into()));
    }
    let laps = f.lap_numbers(n_max, limits)?.laps;
    let xs: Vec<f64> = (1..=n_max).map(|n| n as f64).collect();
    let ys: Vec<f64> = laps.iter().map(|&c| c as f64).collect();
    let (slope, _) = fit_loglog(&xs, &ys);
    let ok = h as f64 <= 1.0 + slope + LAP_BOUND_TOLERANCE;
    Ok(LapBoundCheck { laps, slope, report, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make, FamilySpec};

    fn hpol(l: f64) -> Hpol {
        logistic_hpol(l, &LogisticConfig::default()).unwrap().h_pol
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(hpol(0.8), Hpol::Finite(0));
        assert_eq!(hpol(2.5), Hpol::Finite(1));
        assert_eq!(hpol(3.2), Hpol::Finite(2));
        assert_eq!(hpol(3.449), Hpol::Finite(2));
        assert_eq!(hpol(3.544), Hpol::Finite(3));
        assert_eq!(hpol(3.7), Hpol::Infinite);
    }

    #[test]
    fn fixed_point_matches_closed_form() {
        let a = detect_attracting_cycle(2.5, 1e-9, 100_000, 6).unwrap();
        let Attractor::Cycle { period: 1, orbit } = a else { panic!("{a:?}") };
        assert!((orbit[0] - (1.0 - 1.0 / 2.5)).abs() < 1e-8);
    }

    #[test]
    fn two_cycle_matches_closed_form() {
        // the 2-cycle solves λ²x² − λ(λ+1)x + (λ+1) = 0
        let l: f64 = 3.2;
        let disc = ((l + 1.0) * (l - 3.0)).sqrt();
        let lo = (l + 1.0 - disc) / (2.0 * l);
        let hi = (l + 1.0 + disc) / (2.0 * l);
        let Attractor::Cycle { period: 2, orbit } = detect_attracting_cycle(l, 1e-9, 100_000, 6).unwrap() else {
            panic!()
        };
        assert!((orbit[0] - lo).abs() < 1e-8 && (orbit[1] - hi).abs() < 1e-8);
    }

    #[test]
    fn four_cycle_at_figure_parameter() {
        let a = detect_attracting_cycle(3.544, 1e-9, 1_000_000, 10).unwrap();
        assert_eq!(a.period(), Some(4));
    }

    #[test]
    fn cascade_is_monotone() {
        let ladder = [0.8, 2.5, 3.2, 3.5, 3.55, 3.566, 3.5688];
        let v = sweep(&ladder, &LogisticConfig::default()).unwrap();
        assert!(is_monotone(&v), "{v:?}");
        assert_eq!(v[3].h_pol, Hpol::Finite(3));
        assert_eq!(v[4].h_pol, Hpol::Finite(4));
    }

    #[test]
    fn detection_is_stable_under_tol_halving() {
        let bifurcations = [1.0, 3.0, 3.449_489_742_8, 3.544_090_359_6, 3.564_407_266_1];
        for l in [0.5f64, 1.5, 2.9, 3.1, 3.3, 3.43, 3.46, 3.5, 3.534, 3.5542] {
            assert!(bifurcations.iter().all(|b| (l - b).abs() >= 0.01));
            let a = detect_attracting_cycle(l, 1e-9, 1_000_000, 10).unwrap();
            let b = detect_attracting_cycle(l, 5e-10, 1_000_000, 10).unwrap();
            assert_eq!(a.period(), b.period(), "lambda {l}");
            assert!(a.period().is_some(), "lambda {l}");
        }
    }

    #[test]
    fn sweep_parsing() {
        let g = parse_sweep("3.4:3.5:0.02").unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[1], 3.42);
        assert_eq!(g[5], 3.5);
        assert!(parse_sweep("3.4:3.5").is_err());
        assert!(parse_sweep("3.5:3.4:0.1").is_err());
        assert!(logistic_hpol(4.5, &LogisticConfig::default()).is_err());
    }

    #[test]
    fn lap_bound_examples() {
        let lim = Limits::default();
        let plateau = lap_bound_check(&make(&FamilySpec::Plateau), 8, 4, &lim).unwrap();
        assert!(plateau.laps.iter().all(|&c| c == 1));
        assert_eq!(plateau.slope, 0.0);
        assert_eq!(plateau.report.h_pol, Hpol::Finite(1));
        assert!(plateau.ok);

        let id = lap_bound_check(&PLMap::identity(), 8, 4, &lim).unwrap();
        assert_eq!((id.slope, id.report.h_pol, id.ok), (0.0, Hpol::Finite(0), true));

        let doubled = make(&FamilySpec::Doubled {
            base: Box::new(FamilySpec::F0),
            times: 1,
        });
        let d = lap_bound_check(&doubled, 10, 4, &lim).unwrap();
        assert_eq!(d.report.h_pol, Hpol::Finite(1));
        assert!(d.ok);
    }

    #[test]
    fn lap_bound_needs_finite_entropy() {
        let tent = make(&FamilySpec::Tent);
        assert!(matches!(
            lap_bound_check(&tent, 4, 2, &Limits::default()),
            Err(Error::Domain(_))
        ));
    }
}
