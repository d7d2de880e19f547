//! Rectangle crossings and the correlation length `L(p, ε)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invasion::CRITICAL_P;
use crate::lattice::{Edge, Orientation, Vertex};
use crate::percolation::cluster::check_p;
use crate::sampling::count_hits;
use crate::stats::TailEstimate;
use crate::weights::{derive_seed, WeightField};

/// Treatment of the horizontal bonds lying on the top and bottom sides of
/// the rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideBonds {
    /// Crossings may not use them; paths may still visit the side vertices.
    Excluded,
    Included,
}

/// Whether `[0, n] x [0, m]` has a left-to-right `p`-open crossing using
/// only edges with both endpoints in the rectangle.
pub fn has_horizontal_crossing(
    field: &WeightField,
    n: u32,
    m: u32,
    p: f64,
    sides: SideBonds,
) -> Result<bool> {
    if n == 0 || m == 0 {
        return Err(Error::Config(format!("degenerate rectangle {n} x {m}")));
    }
    let (w, h) = (n as usize + 1, m as usize + 1);
    let index = |v: Vertex| v.x as usize * h + v.y as usize;
    let inside = |v: Vertex| v.x >= 0 && v.y >= 0 && v.x <= n as i32 && v.y <= m as i32;
    let usable = |e: &Edge| {
        !(sides == SideBonds::Excluded
            && e.orientation() == Orientation::Horizontal
            && (e.low().y == 0 || e.low().y == m as i32))
    };
    let mut seen = vec![false; w * h];
    let mut stack: Vec<Vertex> = (0..=m as i32).map(|y| Vertex::new(0, y)).collect();
    for v in &stack {
        seen[index(*v)] = true;
    }
    while let Some(v) = stack.pop() {
        for dir in crate::lattice::Direction::ALL {
            let u = v.step(dir);
            if !inside(u) || seen[index(u)] {
                continue;
            }
            let e = Edge::incident(v, dir);
            if !usable(&e) || !field.is_p_open(&e, p)? {
                continue;
            }
            if u.x == n as i32 {
                return Ok(true);
            }
            seen[index(u)] = true;
            stack.push(u);
        }
    }
    Ok(false)
}

/// Field seed for trial `t` of an `n x m` crossing estimate. It does not
/// depend on `p`, so estimates at different `p` are monotonically coupled.
pub fn crossing_trial_seed(seed: u64, n: u32, m: u32, t: u64) -> u64 {
    derive_seed(derive_seed(seed, (n as u64) << 32 | m as u64), t)
}

pub fn estimate_crossing(
    n: u32,
    m: u32,
    p: f64,
    trials: u64,
    seed: u64,
    sides: SideBonds,
) -> Result<TailEstimate> {
    check_p(p)?;
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    // surface geometry errors before farming out
    has_horizontal_crossing(&WeightField::pseudorandom(0), n, m, p, sides)?;
    let hits = count_hits(trials, |t| {
        let f = WeightField::pseudorandom(crossing_trial_seed(seed, n, m, t));
        has_horizontal_crossing(&f, n, m, p, sides).expect("validated geometry")
    });
    let quantity = match sides {
        SideBonds::Excluded => "sigma",
        SideBonds::Included => "crossing_full_sides",
    };
    Ok(
        TailEstimate::from_counts(quantity, n as u64, trials, hits, 0, seed)?
            .with_m(m as u64)
            .with_p(p),
    )
}

/// Monte Carlo estimate of `σ(n, m, p)` with top and bottom bonds excluded.
pub fn estimate_sigma(n: u32, m: u32, p: f64, trials: u64, seed: u64) -> Result<TailEstimate> {
    estimate_crossing(n, m, p, trials, seed, SideBonds::Excluded)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LConfig {
    pub eps: f64,
    pub trials_per_size: u64,
    pub n_max: u32,
    pub seed: u64,
}

impl Default for LConfig {
    fn default() -> Self {
        LConfig {
            eps: 0.05,
            trials_per_size: 400,
            n_max: 1024,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub p: f64,
    pub eps: f64,
    /// Smallest `n` with `σ̂(n, n, p) >= 1 - ε`; `None` when saturated at `n_max`.
    pub l_hat: Option<u32>,
    pub sigma_at_l: Option<f64>,
    pub trials_per_size: u64,
    pub n_max: u32,
    /// Every size probed, with its crossing estimate.
    pub probes: Vec<(u32, f64)>,
}

impl CorrelationRow {
    pub fn saturated(&self) -> bool {
        self.l_hat.is_none()
    }
}

/// Doubling search followed by bisection for `L̂(p, ε)`.
pub fn estimate_l(p: f64, cfg: &LConfig) -> Result<CorrelationRow> {
    if !(p > CRITICAL_P && p <= 1.0) {
        return Err(Error::Domain(format!(
            "correlation length needs p in (1/2, 1], got {p}"
        )));
    }
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(Error::Domain(format!("eps = {} outside (0, 1)", cfg.eps)));
    }
    if cfg.n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    let target = 1.0 - cfg.eps;
    let mut probes = BTreeMap::new();
    let mut probe = |n: u32| -> Result<bool> {
        let est = estimate_sigma(n, n, p, cfg.trials_per_size, cfg.seed)?.estimate;
        probes.insert(n, est);
        Ok(est >= target)
    };
    let mut lo = 0u32;
    let mut hi = 1u32;
    let found = loop {
        if probe(hi)? {
            break true;
        }
        if hi >= cfg.n_max {
            break false;
        }
        lo = hi;
        hi = (2 * hi).min(cfg.n_max);
    };
    if found {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if probe(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Ok(CorrelationRow {
        p,
        eps: cfg.eps,
        l_hat: found.then_some(hi),
        sigma_at_l: found.then(|| probes[&hi]),
        trials_per_size: cfg.trials_per_size,
        n_max: cfg.n_max,
        probes: probes.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationTable {
    pub eps: f64,
    pub rows: Vec<CorrelationRow>,
    /// Nonincreasing fit of the unsaturated `L̂` values, aligned with `rows`.
    pub smoothed: Vec<Option<f64>>,
}

impl CorrelationTable {
    pub fn new(eps: f64, mut rows: Vec<CorrelationRow>) -> Self {
        rows.sort_by(|a, b| a.p.total_cmp(&b.p));
        let raw: Vec<(usize, f64)> = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.l_hat.map(|l| (i, l as f64)))
            .collect();
        let fitted = antitonic_fit(&raw.iter().map(|&(_, l)| l).collect::<Vec<_>>());
        let mut smoothed = vec![None; rows.len()];
        for ((i, _), v) in raw.iter().zip(fitted) {
            smoothed[*i] = Some(v);
        }
        CorrelationTable {
            eps,
            rows,
            smoothed,
        }
    }

    pub fn build(ps: &[f64], cfg: &LConfig) -> Result<Self> {
        let rows = ps
            .iter()
            .map(|&p| estimate_l(p, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(cfg.eps, rows))
    }
}

/// Least-squares nonincreasing fit (pool adjacent violators).
pub fn antitonic_fit(values: &[f64]) -> Vec<f64> {
    // blocks of (mean, weight)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (m2, w2) = blocks[blocks.len() - 1];
            let (m1, w1) = blocks[blocks.len() - 2];
            if m1 >= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push((
                (m1 * w1 as f64 + m2 * w2 as f64) / (w1 + w2) as f64,
                w1 + w2,
            ));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, w)| std::iter::repeat_n(m, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeBox;

    #[test]
    fn full_and_empty_occupancy() {
        assert_eq!(estimate_sigma(5, 5, 1.0, 50, 1).unwrap().estimate, 1.0);
        assert_eq!(estimate_sigma(5, 5, 0.0, 50, 1).unwrap().estimate, 0.0);
        assert!(estimate_sigma(0, 5, 0.5, 10, 1).is_err());
        assert!(estimate_sigma(5, 0, 0.5, 10, 1).is_err());
    }

    /// Exact σ(n, m, p) by enumerating all open/closed patterns of the
    /// rectangle's edges.
    fn exhaustive_sigma(n: u32, m: u32, p: f64) -> f64 {
        let edges: Vec<Edge> = LatticeBox::new(n.max(m))
            .unwrap()
            .edges()
            .filter(|e| {
                let (a, b) = e.endpoints();
                [a, b]
                    .iter()
                    .all(|v| v.x >= 0 && v.y >= 0 && v.x <= n as i32 && v.y <= m as i32)
            })
            .collect();
        assert!(edges.len() <= 20);
        let mut total = 0.0;
        for mask in 0u32..(1 << edges.len()) {
            let open = mask.count_ones() as i32;
            let prob = p.powi(open) * (1.0 - p).powi(edges.len() as i32 - open);
            let f = WeightField::explicit(
                edges
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (*e, if mask >> i & 1 == 1 { 0.0 } else { 0.99 })),
            )
            .unwrap();
            if has_horizontal_crossing(&f, n, m, 0.5, SideBonds::Excluded).unwrap() {
                total += prob;
            }
        }
        total
    }

    #[test]
    fn sigma_matches_enumeration() {
        let exact = exhaustive_sigma(2, 2, 0.5);
        assert!((exact - 0.25).abs() < 1e-12, "{exact}");
        let trials = 100_000;
        let est = estimate_sigma(2, 2, 0.5, trials, 3).unwrap();
        let sd = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!(
            (est.estimate - exact).abs() < 3.0 * sd,
            "{} vs {exact}",
            est.estimate
        );
        // σ(1, 1, p) = 0: the only horizontal bonds lie on the excluded sides
        assert_eq!(exhaustive_sigma(1, 1, 0.99), 0.0);
        let exact32 = exhaustive_sigma(3, 2, 0.6);
        assert!((exact32 - 0.6f64.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn l_domain_errors() {
        assert!(matches!(
            estimate_l(0.5, &LConfig::default()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            estimate_l(
                0.6,
                &LConfig {
                    eps: 0.0,
                    ..Default::default()
                }
            ),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn l_near_one() {
        // σ(1,1,p) = 0 and σ(2,2,p) = p^2 = 0.9801 >= 0.95
        let cfg = LConfig {
            eps: 0.05,
            trials_per_size: 100_000,
            n_max: 64,
            seed: 9,
        };
        let row = estimate_l(0.99, &cfg).unwrap();
        assert_eq!(row.probes[0], (1, 0.0));
        assert_eq!(row.l_hat, Some(2));
    }

    #[test]
    fn l_is_monotone_on_matched_seeds() {
        let cfg = LConfig {
            eps: 0.05,
            trials_per_size: 200,
            n_max: 256,
            seed: 5,
        };
        let a = estimate_l(0.55, &cfg).unwrap().l_hat.unwrap();
        let b = estimate_l(0.60, &cfg).unwrap().l_hat.unwrap();
        assert!(a >= b, "{a} < {b}");
    }

    #[test]
    fn saturates_just_above_criticality() {
        let cfg = LConfig {
            eps: 0.05,
            trials_per_size: 100,
            n_max: 256,
            seed: 5,
        };
        let row = estimate_l(0.501, &cfg).unwrap();
        assert!(row.saturated());
        assert!(row.probes.last().unwrap().1 < 0.95);
    }

    #[test]
    fn antitonic_fit_pools_violators() {
        assert_eq!(
            antitonic_fit(&[5.0, 3.0, 4.0, 1.0]),
            vec![5.0, 3.5, 3.5, 1.0]
        );
        assert_eq!(antitonic_fit(&[1.0, 2.0, 3.0]), vec![2.0, 2.0, 2.0]);
        assert!(antitonic_fit(&[]).is_empty());
    }
}
