//! Tail-probability estimates and the pond-versus-critical-cluster comparisons.
//!
//! Censored ponds (those still uncertified at the largest box) always count
//! as hits, so pond tails are upper brackets; `censored_count` records how
//! many hits came from censoring.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::invasion::{extract_first_pond, BoxPolicy, CRITICAL_P};
use crate::lattice::ORIGIN;
use crate::percolation::cluster::cluster_volume_capped;
use crate::percolation::connectivity::estimate_pi;
use crate::sampling::map_samples;
use crate::weights::{derive_seed, WeightField};

pub const CONFIDENCE: f64 = 0.95;

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(hits: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Config(
            "Wilson interval needs at least one trial".into(),
        ));
    }
    if hits > trials {
        return Err(Error::Domain(format!("{hits} hits out of {trials} trials")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence {confidence} outside (0, 1)"
        )));
    }
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if hits == 0 {
        0.0
    } else {
        (centre - half).clamp(0.0, phat)
    };
    let high = if hits == trials {
        1.0
    } else {
        (centre + half).clamp(phat, 1.0)
    };
    Ok((low, high))
}

/// One Monte Carlo probability estimate. Serialises to the estimator CSV
/// columns `quantity, n, m, p, trials, hits, estimate, ci_low, ci_high, seed, censored_count`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub quantity: String,
    pub n: u64,
    pub m: Option<u64>,
    pub p: Option<f64>,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub censored_count: u64,
}

impl TailEstimate {
    pub fn from_counts(
        quantity: &str,
        n: u64,
        trials: u64,
        hits: u64,
        censored: u64,
        seed: u64,
    ) -> Result<Self> {
        if censored > hits {
            return Err(Error::Domain(format!(
                "{censored} censored hits exceed {hits} hits"
            )));
        }
        let (ci_low, ci_high) = wilson_interval(hits, trials, CONFIDENCE)?;
        Ok(TailEstimate {
            quantity: quantity.to_owned(),
            n,
            m: None,
            p: None,
            trials,
            hits,
            estimate: hits as f64 / trials as f64,
            ci_low,
            ci_high,
            seed,
            censored_count: censored,
        })
    }

    pub fn with_m(mut self, m: u64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn std_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }

    pub fn uncensored_hits(&self) -> u64 {
        self.hits - self.censored_count
    }
}

/// Standard error of the difference of two independent estimates.
pub fn joint_sigma(a: &TailEstimate, b: &TailEstimate) -> f64 {
    (a.std_error().powi(2) + b.std_error().powi(2)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioInterval {
    pub ratio: f64,
    pub low: f64,
    pub high: f64,
}

/// Interval arithmetic for `a / b` with `a ∈ [a_lo, a_hi]`, `b ∈ [b_lo, b_hi]`,
/// all nonnegative. A zero lower bound on `b` gives an infinite upper bound.
pub fn ratio_bounds(a: (f64, f64, f64), b: (f64, f64, f64)) -> RatioInterval {
    let div = |x: f64, y: f64| {
        if y > 0.0 {
            x / y
        } else if x > 0.0 {
            f64::INFINITY
        } else {
            f64::NAN
        }
    };
    RatioInterval {
        ratio: div(a.0, b.0),
        low: if b.2 > 0.0 { a.1 / b.2 } else { 0.0 },
        high: div(a.2, b.1),
    }
}

pub fn ratio_interval(num: &TailEstimate, den: &TailEstimate) -> RatioInterval {
    ratio_bounds(
        (num.estimate, num.ci_low, num.ci_high),
        (den.estimate, den.ci_low, den.ci_high),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub std_error: f64,
    pub points: usize,
}

/// Least-squares slope of `ln estimate` against `ln n`.
pub fn slope_fit(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::Config(format!(
            "slope fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, y)) = points.iter().find(|(n, y)| !(*n > 0.0 && *y > 0.0)) {
        return Err(Error::NonPositive(if n > 0.0 { y } else { n }));
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, y)| y.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let std_error = (rss / (k - 2.0) / sxx).sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        std_error,
        points: points.len(),
    })
}

/// `s(n) = round(n^2 π̂(n))`.
pub fn volume_scale(n: u32, pi_hat: f64) -> u64 {
    ((n as f64).powi(2) * pi_hat).round() as u64
}

/// Summary of one first-pond sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PondSample {
    pub sample: u64,
    pub seed: u64,
    pub tau_hat: f64,
    pub outlet_id: u64,
    pub radius_l1: u32,
    pub radius_linf: u32,
    pub volume: u64,
    pub censored: bool,
    pub box_used: u32,
    /// Volume of the critical cluster of the origin on the same field,
    /// counted up to the cap passed to [`sample_pond`].
    pub critical_volume: u64,
    pub critical_touched: bool,
    pub ties: u64,
}

/// Extracts the first pond of the origin on the field of sample `index`.
pub fn sample_pond(
    master: u64,
    index: u64,
    policy: BoxPolicy,
    critical_cap: usize,
) -> Result<PondSample> {
    let seed = derive_seed(master, index);
    let field = WeightField::pseudorandom(seed);
    let pond = extract_first_pond(&field, ORIGIN, policy)?;
    let (critical_volume, critical_touched) = if critical_cap > 0 {
        cluster_volume_capped(&field, ORIGIN, CRITICAL_P, policy.max, critical_cap)?
    } else {
        (0, false)
    };
    Ok(PondSample {
        sample: index,
        seed,
        tau_hat: pond.level,
        outlet_id: pond.outlet.id().0,
        radius_l1: pond.radius_l1,
        radius_linf: pond.radius_linf,
        volume: pond.volume as u64,
        censored: pond.censored,
        box_used: pond.box_used,
        critical_volume: critical_volume as u64,
        critical_touched,
        ties: pond.ties,
    })
}

/// Samples `0..trials`, in index order.
pub fn sample_ponds(
    master: u64,
    trials: u64,
    policy: BoxPolicy,
    critical_cap: usize,
) -> Result<Vec<PondSample>> {
    policy.validate()?;
    map_samples(trials, |i| sample_pond(master, i, policy, critical_cap))
        .into_iter()
        .collect()
}

fn check_grid(grid: &[u32]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|&n| n == 0 || !n.is_power_of_two()) {
        return Err(Error::Config(format!(
            "grid {grid:?} must be nonempty powers of two"
        )));
    }
    Ok(())
}

/// Tail counts over shared samples; `hit` sees each uncensored sample,
/// censored samples always count.
fn tail_from_samples<F>(
    samples: &[PondSample],
    quantity: &str,
    n: u64,
    seed: u64,
    hit: F,
) -> Result<TailEstimate>
where
    F: Fn(&PondSample) -> bool,
{
    if samples.is_empty() {
        return Err(Error::Config("no samples".into()));
    }
    let censored = samples.iter().filter(|s| s.censored).count() as u64;
    let hits = samples.iter().filter(|s| s.censored || hit(s)).count() as u64;
    TailEstimate::from_counts(quantity, n, samples.len() as u64, hits, censored, seed)
}

/// `P̂(R̂ >= n)` for each `n` in the grid, from shared samples.
pub fn radius_tail(samples: &[PondSample], grid: &[u32], seed: u64) -> Result<Vec<TailEstimate>> {
    grid.iter()
        .map(|&n| {
            tail_from_samples(samples, "pond_radius_l1_ge", n as u64, seed, |s| {
                s.radius_l1 >= n
            })
        })
        .collect()
}

/// Samples ponds and estimates `P(R̂ >= n)` over the grid.
pub fn pond_radius_tail(
    grid: &[u32],
    trials: u64,
    seed: u64,
    policy: BoxPolicy,
) -> Result<Vec<TailEstimate>> {
    check_grid(grid)?;
    let samples = sample_ponds(seed, trials, policy, 0)?;
    radius_tail(&samples, grid, seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub n: u32,
    pub numerator: TailEstimate,
    pub denominator: TailEstimate,
    pub ratio: RatioInterval,
}

/// `P̂(R̂ >= n) / π̂(n)` over a grid.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusReport {
    pub comparator: &'static str,
    pub norms: &'static str,
    pub policy: BoxPolicy,
    pub pond_seed: u64,
    pub pi_seed: u64,
    pub rows: Vec<RatioRow>,
}

/// Seed of the π̂ estimates paired with a pond run; independent of the pond fields.
pub fn paired_pi_seed(seed: u64) -> u64 {
    derive_seed(seed, u64::MAX)
}

pub fn compare_radius(
    grid: &[u32],
    trials: u64,
    seed: u64,
    policy: BoxPolicy,
    pi_trials: u64,
    pi_seed: u64,
) -> Result<RadiusReport> {
    check_grid(grid)?;
    let samples = sample_ponds(seed, trials, policy, 0)?;
    radius_report_from_samples(&samples, grid, seed, policy, pi_trials, pi_seed)
}

pub fn radius_report_from_samples(
    samples: &[PondSample],
    grid: &[u32],
    seed: u64,
    policy: BoxPolicy,
    pi_trials: u64,
    pi_seed: u64,
) -> Result<RadiusReport> {
    let tails = radius_tail(samples, grid, seed)?;
    let rows = grid
        .iter()
        .zip(tails)
        .map(|(&n, numerator)| {
            let denominator = estimate_pi(n, pi_trials, pi_seed)?;
            let ratio = ratio_interval(&numerator, &denominator);
            Ok(RatioRow {
                n,
                numerator,
                denominator,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RadiusReport {
        comparator: "R_hat >= n",
        norms: "pond radius L1; box boundary dB(n) Linf",
        policy,
        pond_seed: seed,
        pi_seed,
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeRow {
    pub n: u32,
    /// π̂(n) from the pilot run that fixes `s(n)`.
    pub pi_pilot: TailEstimate,
    pub s_n: u64,
    /// `P̂(|V̂| > s(n))`.
    pub pond: TailEstimate,
    /// `P̂_cr(|C(0)| > s(n))` on the same fields; clusters touching the
    /// largest box count as hits and are reported as censored.
    pub critical: TailEstimate,
    /// `P̂(|V̂| > s(n)) / π̂(n)`.
    pub ratio: RatioInterval,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    pub comparator: &'static str,
    pub policy: BoxPolicy,
    pub pond_seed: u64,
    pub pilot_seed: u64,
    pub pilot_trials: u64,
    pub rows: Vec<VolumeRow>,
    /// Censored ponds whose certified part was not already larger than `s(n)`
    /// for the largest grid point: the width of the censoring bracket.
    pub bracket_width: u64,
}

pub fn pilot_scales(
    grid: &[u32],
    pilot_trials: u64,
    pilot_seed: u64,
) -> Result<Vec<(TailEstimate, u64)>> {
    grid.iter()
        .map(|&n| {
            let pi = estimate_pi(n, pilot_trials, pilot_seed)?;
            let s = volume_scale(n, pi.estimate);
            Ok((pi, s))
        })
        .collect()
}

/// Samples ponds and the matched critical clusters, and compares their
/// volume tails at `s(n)`.
pub fn pond_volume_tail(
    grid: &[u32],
    trials: u64,
    seed: u64,
    policy: BoxPolicy,
    pilot_trials: u64,
    pilot_seed: u64,
) -> Result<VolumeReport> {
    check_grid(grid)?;
    let scales = pilot_scales(grid, pilot_trials, pilot_seed)?;
    let cap = scales
        .iter()
        .map(|(_, s)| *s as usize + 1)
        .max()
        .unwrap_or(1);
    let samples = sample_ponds(seed, trials, policy, cap)?;
    volume_report_from_samples(
        &samples,
        grid,
        &scales,
        seed,
        policy,
        pilot_trials,
        pilot_seed,
    )
}

pub fn volume_report_from_samples(
    samples: &[PondSample],
    grid: &[u32],
    scales: &[(TailEstimate, u64)],
    seed: u64,
    policy: BoxPolicy,
    pilot_trials: u64,
    pilot_seed: u64,
) -> Result<VolumeReport> {
    let mut rows = Vec::with_capacity(grid.len());
    for (&n, (pi, s)) in grid.iter().zip(scales) {
        let s = *s;
        let pond = tail_from_samples(samples, "pond_volume_gt_s", n as u64, seed, |x| {
            x.volume > s
        })?;
        let touched = samples.iter().filter(|x| x.critical_touched).count() as u64;
        let critical_hits = samples
            .iter()
            .filter(|x| x.critical_touched || x.critical_volume > s)
            .count() as u64;
        let critical = TailEstimate::from_counts(
            "critical_volume_gt_s",
            n as u64,
            samples.len() as u64,
            critical_hits,
            touched,
            seed,
        )?
        .with_p(CRITICAL_P);
        let ratio = ratio_interval(&pond, pi);
        rows.push(VolumeRow {
            n,
            pi_pilot: pi.clone(),
            s_n: s,
            pond,
            critical,
            ratio,
        });
    }
    let s_max = scales.iter().map(|(_, s)| *s).max().unwrap_or(0);
    let bracket_width = samples
        .iter()
        .filter(|x| x.censored && x.volume <= s_max)
        .count() as u64;
    Ok(VolumeReport {
        comparator: "|V_hat| > s(n), |C(0)| > s(n)",
        policy,
        pond_seed: seed,
        pilot_seed,
        pilot_trials,
        rows,
        bracket_width,
    })
}
