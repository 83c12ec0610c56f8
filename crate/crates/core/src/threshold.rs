//! Monte-Carlo threshold estimation for the memory.
//!
//! A scan runs trials of one of the two noise models over a grid of physical
//! error rates and lattice sizes, decodes each trial, and reports failure
//! rates with Wilson score intervals. Below the accuracy threshold the
//! failure rate falls with lattice size; above it, it grows. The threshold
//! estimate is the crossing point of the failure curves of adjacent sizes,
//! found by linear interpolation and bracketed by a parametric bootstrap.
//!
//! Every trial draws its own generator from `(seed, model, l, p, trial)`, so
//! results are independent of thread count and reproducible from the seed
//! alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::decoder::{decode_trial, Metric};
use crate::noise::{run_trial_circuit, run_trial_phenomenological, TrialRecord};
use crate::schedule::Array2d;

/// The two supported noise models.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorModel {
    /// Independent data flips and measurement flips, both at rate p.
    Phenomenological,
    /// Every preparation, Hadamard, CZ, and measurement of the period-6
    /// schedule fails at rate p.
    CircuitLevel,
}

impl ErrorModel {
    pub fn name(self) -> &'static str {
        match self {
            ErrorModel::Phenomenological => "phenomenological",
            ErrorModel::CircuitLevel => "circuit-level",
        }
    }
}

impl std::str::FromStr for ErrorModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phenomenological" => Ok(ErrorModel::Phenomenological),
            "circuit-level" | "circuit" => Ok(ErrorModel::CircuitLevel),
            other => Err(format!("unknown error model `{other}`")),
        }
    }
}

/// One point of a threshold scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanPoint {
    pub model: ErrorModel,
    pub l: usize,
    pub rounds: usize,
    pub p: f64,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// Standard-normal quantile for a two-sided confidence level.
pub fn normal_z(confidence: f64) -> f64 {
    assert!(confidence > 0.0 && confidence < 1.0);
    Normal::new(0.0, 1.0).unwrap().inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(failures: usize, trials: usize, z: f64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Generator seed for one trial, independent of execution order.
pub fn trial_seed(base: u64, model: ErrorModel, l: usize, p: f64, trial: u64) -> u64 {
    let tag = match model {
        ErrorModel::Phenomenological => 1,
        ErrorModel::CircuitLevel => 2,
    };
    let mut h = splitmix(base ^ tag);
    h = splitmix(h ^ l as u64);
    h = splitmix(h ^ p.to_bits());
    splitmix(h ^ trial)
}

/// Run one trial of the given model.
pub fn run_trial(
    model: ErrorModel,
    l: usize,
    rounds: usize,
    p: f64,
    rng: &mut impl Rng,
) -> TrialRecord {
    match model {
        ErrorModel::Phenomenological => run_trial_phenomenological(l, rounds, p, rng),
        ErrorModel::CircuitLevel => run_trial_circuit(&Array2d::new(l), rounds, p, rng),
    }
}

/// Run one scan point: `trials` seeded trials in parallel, decoded with the
/// default metric; a trial fails if either sector ends in a wrap class.
pub fn run_point(
    model: ErrorModel,
    l: usize,
    rounds: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> ScanPoint {
    let failures = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, model, l, p, trial));
            let record = run_trial(model, l, rounds, p, &mut rng);
            usize::from(decode_trial(&record, Metric::default()).failed())
        })
        .sum();
    let (ci_low, ci_high) = wilson_interval(failures, trials, normal_z(0.95));
    ScanPoint {
        model,
        l,
        rounds,
        p,
        trials,
        failures,
        rate: failures as f64 / trials as f64,
        ci_low,
        ci_high,
        seed,
    }
}

/// Scan a grid of sizes and error rates; `rounds` defaults to l when zero.
pub fn run_scan(
    model: ErrorModel,
    ls: &[usize],
    ps: &[f64],
    rounds: usize,
    trials: usize,
    seed: u64,
) -> Vec<ScanPoint> {
    let mut out = Vec::new();
    for &l in ls {
        let r = if rounds == 0 { l } else { rounds };
        for &p in ps {
            out.push(run_point(model, l, r, p, trials, seed));
        }
    }
    out
}

/// A threshold estimate with a bootstrap confidence interval.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CrossingEstimate {
    pub p: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Crossing of two failure curves sampled on a common p grid: the first
/// point where the larger lattice stops being better, located by linear
/// interpolation. Returns `None` without a sign change.
fn curve_crossing(ps: &[f64], small: &[f64], large: &[f64]) -> Option<f64> {
    let diff: Vec<f64> = small.iter().zip(large).map(|(s, l)| l - s).collect();
    for i in 1..diff.len() {
        let (d0, d1) = (diff[i - 1], diff[i]);
        if d0 <= 0.0 && d1 > 0.0 {
            if d1 == d0 {
                return Some(ps[i]);
            }
            return Some(ps[i - 1] + (ps[i] - ps[i - 1]) * (0.0 - d0) / (d1 - d0));
        }
    }
    None
}

/// Estimate the threshold from a scan over at least two lattice sizes on a
/// shared p grid. The point estimate averages the crossings of adjacent
/// sizes; the interval is a 95% percentile bootstrap that resamples every
/// point's failure count from its observed rate.
pub fn find_crossing(points: &[ScanPoint], resamples: usize, seed: u64) -> Option<CrossingEstimate> {
    let mut ls: Vec<usize> = points.iter().map(|pt| pt.l).collect();
    ls.sort_unstable();
    ls.dedup();
    if ls.len() < 2 {
        return None;
    }
    let mut ps: Vec<f64> = points.iter().map(|pt| pt.p).collect();
    ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ps.dedup();
    let rate_of = |l: usize, p: f64, rates: &dyn Fn(&ScanPoint) -> f64| -> Option<f64> {
        points
            .iter()
            .find(|pt| pt.l == l && pt.p == p)
            .map(rates)
    };
    let estimate = |rates: &dyn Fn(&ScanPoint) -> f64| -> Option<f64> {
        let mut crossings = Vec::new();
        for pair in ls.windows(2) {
            let small: Option<Vec<f64>> =
                ps.iter().map(|&p| rate_of(pair[0], p, rates)).collect();
            let large: Option<Vec<f64>> =
                ps.iter().map(|&p| rate_of(pair[1], p, rates)).collect();
            if let (Some(s), Some(l)) = (small, large) {
                if let Some(c) = curve_crossing(&ps, &s, &l) {
                    crossings.push(c);
                }
            }
        }
        if crossings.is_empty() {
            None
        } else {
            Some(crossings.iter().sum::<f64>() / crossings.len() as f64)
        }
    };
    let point = estimate(&|pt| pt.rate)?;
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ 0x0b007));
    let mut resampled = Vec::new();
    for _ in 0..resamples {
        let jiggled: Vec<(usize, f64, f64)> = points
            .iter()
            .map(|pt| {
                let mut k = 0usize;
                for _ in 0..pt.trials {
                    if rng.gen::<f64>() < pt.rate {
                        k += 1;
                    }
                }
                (pt.l, pt.p, k as f64 / pt.trials as f64)
            })
            .collect();
        let lookup = |pt: &ScanPoint| -> f64 {
            jiggled
                .iter()
                .find(|(l, p, _)| *l == pt.l && *p == pt.p)
                .map(|(_, _, r)| *r)
                .unwrap()
        };
        if let Some(c) = estimate(&lookup) {
            resampled.push(c);
        }
    }
    if resampled.len() < resamples / 2 {
        // The signal is too weak to bracket; report the grid edges.
        return Some(CrossingEstimate {
            p: point,
            ci_low: ps[0],
            ci_high: *ps.last().unwrap(),
        });
    }
    resampled.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pick = |q: f64| resampled[((resampled.len() - 1) as f64 * q).round() as usize];
    Some(CrossingEstimate {
        p: point,
        ci_low: pick(0.025),
        ci_high: pick(0.975),
    })
}
