use serde::Serialize;

use crate::error::{Error, Result};
use crate::invasion::CRITICAL_P;
use crate::lattice::ORIGIN;
use crate::percolation::cluster::{check_p, reaches_boundary};
use crate::percolation::crossing::{estimate_l, LConfig};
use crate::sampling::count_hits;
use crate::stats::TailEstimate;
use crate::weights::{derive_seed, WeightField};

/// `P_p(0 ↔ ∂B(n))`. Trial `t` uses the field seeded by
/// `derive_seed(seed, t)` for every `n` and `p`, so estimates on one seed
/// are monotone in both.
pub fn estimate_arm(n: u32, p: f64, trials: u64, seed: u64) -> Result<TailEstimate> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::DegenerateBox);
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let hits = count_hits(trials, |t| {
        let f = WeightField::pseudorandom(derive_seed(seed, t));
        reaches_boundary(&f, ORIGIN, p, n).expect("box validated")
    });
    Ok(TailEstimate::from_counts("arm", n as u64, trials, hits, 0, seed)?.with_p(p))
}

/// `π̂(n)`, the critical one-arm probability `P_{1/2}(0 ↔ ∂B(n))`.
pub fn estimate_pi(n: u32, trials: u64, seed: u64) -> Result<TailEstimate> {
    let mut est = estimate_arm(n, CRITICAL_P, trials, seed)?;
    est.quantity = "pi".into();
    Ok(est)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaEstimate {
    pub tail: TailEstimate,
    pub k: u32,
    pub l_hat: u32,
    /// `K * L̂(p)`, the box whose boundary the origin must reach.
    pub radius: u32,
}

/// Finite proxy `P_p(0 ↔ ∂B(K L̂(p)))` for `θ(p)`.
pub fn estimate_theta(
    p: f64,
    k: u32,
    trials: u64,
    seed: u64,
    l_cfg: &LConfig,
) -> Result<ThetaEstimate> {
    if !(p > CRITICAL_P && p <= 1.0) {
        return Err(Error::Domain(format!(
            "theta proxy needs p in (1/2, 1], got {p}"
        )));
    }
    if k < 2 {
        return Err(Error::Config(format!(
            "box factor K = {k} must be at least 2"
        )));
    }
    let row = estimate_l(p, l_cfg)?;
    let l_hat = row.l_hat.ok_or(Error::Saturated {
        p,
        target: 1.0 - l_cfg.eps,
        n_max: l_cfg.n_max,
    })?;
    let radius = k * l_hat;
    let mut tail = estimate_arm(radius, p, trials, seed)?;
    tail.quantity = "theta".into();
    Ok(ThetaEstimate {
        tail,
        k,
        l_hat,
        radius,
    })
}
