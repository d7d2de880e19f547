use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde::Serialize;
use serde_json::json;

use invasion_ponds::invasion::{pond_partition, BoxPolicy};
use invasion_ponds::lattice::{l1_radius, Edge, EdgeId, ORIGIN};
use invasion_ponds::percolation::{
    check_anp, estimate_crossing, estimate_pi, estimate_theta, minimax_pond, reaches_boundary,
    CorrelationTable, LConfig, SideBonds,
};
use invasion_ponds::sampling::map_samples;
use invasion_ponds::stats::{
    compare_radius, paired_pi_seed, pond_volume_tail, sample_ponds, TailEstimate,
};
use invasion_ponds::weights::{derive_seed, WeightField};

use crate::config::{
    check_positive, check_powers_of_two, pick, pick_opt, resolve_seed, usage, FileConfig,
};
use crate::output::{write_csv, write_json, Provenance};

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct Common {
    /// Master seed [default: $POND_MASTER_SEED, else 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON config file; flags take precedence over its keys
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (results do not depend on it)
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV output path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub struct Ctx {
    pub file: FileConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl Ctx {
    pub fn new(common: &Common) -> Result<Self> {
        let file = match &common.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let seed = resolve_seed(common.seed, file.seed)?;
        let out = pick_opt(&common.out, &file.out);
        let json = pick_opt(&common.json, &file.json);
        Ok(Ctx {
            file,
            seed,
            out,
            json,
        })
    }

    fn emit<S: Serialize, R: Serialize>(
        &self,
        prov: &Provenance,
        rows: &[S],
        report: &R,
        append: bool,
    ) -> Result<()> {
        write_csv(self.out.as_deref(), prov, rows, append)?;
        if let Some(path) = &self.json {
            write_json(path, prov, report)?;
        }
        Ok(())
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct PolicyArgs {
    /// Initial box half-width M0 [default: 4 * min n, at least 8]
    #[arg(long)]
    pub m0: Option<u32>,
    /// Largest box half-width [default: 2 * max n, at least M0]
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Acceptance margin: the pond must fit in B(M / margin - 1)
    #[arg(long)]
    pub margin: Option<u32>,
}

impl PolicyArgs {
    fn resolve(&self, file: &FileConfig, grid: &[u32]) -> Result<BoxPolicy> {
        let lo = grid.iter().copied().min().unwrap_or(2);
        let hi = grid.iter().copied().max().unwrap_or(2);
        let m0 = pick(&self.m0, &file.m0, (4 * lo).max(8).next_power_of_two());
        let m_max = pick(
            &self.m_max,
            &file.m_max,
            (2 * hi).max(m0).next_power_of_two(),
        );
        let margin = pick(&self.margin, &file.margin, 2);
        let policy = BoxPolicy {
            initial: m0,
            max: m_max,
            margin,
        };
        policy.validate()?;
        Ok(policy)
    }
}

fn policy_json(p: &BoxPolicy) -> serde_json::Value {
    json!({ "m0": p.initial, "m_max": p.max, "margin": p.margin })
}

fn need_trials(t: u64) -> Result<u64> {
    if t == 0 {
        usage!("--trials must be at least 1");
    }
    Ok(t)
}

#[derive(Args, Clone, Debug)]
pub struct SimulatePonds {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub trials: Option<u64>,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Serialize)]
struct PondRow {
    sample: u64,
    seed: u64,
    tau_hat: f64,
    outlet_id: u64,
    radius_l1: u32,
    radius_linf: u32,
    volume: u64,
    censored: bool,
    #[serde(rename = "box")]
    box_used: u32,
    ties: u64,
}

#[derive(Serialize)]
struct PondDump {
    tau_hat: f64,
    outlet: Edge,
    radius_l1: u32,
    volume: u64,
    censored: bool,
    #[serde(rename = "box")]
    box_used: u32,
    seed: u64,
    sample: u64,
}

pub fn simulate_ponds(a: &SimulatePonds) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let trials = need_trials(pick(&a.trials, &ctx.file.trials, 1000))?;
    let policy = a.policy.resolve(&ctx.file, &[16])?;
    let samples = sample_ponds(ctx.seed, trials, policy, 0)?;
    let rows: Vec<PondRow> = samples
        .iter()
        .map(|s| PondRow {
            sample: s.sample,
            seed: s.seed,
            tau_hat: s.tau_hat,
            outlet_id: s.outlet_id,
            radius_l1: s.radius_l1,
            radius_linf: s.radius_linf,
            volume: s.volume,
            censored: s.censored,
            box_used: s.box_used,
            ties: s.ties,
        })
        .collect();
    let dumps: Vec<PondDump> = samples
        .iter()
        .map(|s| PondDump {
            tau_hat: s.tau_hat,
            outlet: Edge::from_id(EdgeId(s.outlet_id)),
            radius_l1: s.radius_l1,
            volume: s.volume,
            censored: s.censored,
            box_used: s.box_used,
            seed: s.seed,
            sample: s.sample,
        })
        .collect();
    let mut prov = Provenance::new(
        "simulate-ponds",
        json!({ "seed": ctx.seed, "trials": trials, "policy": policy_json(&policy) }),
    )
    .convention("sample i uses the field seeded by derive_seed(seed, i)")
    .convention("pond = vertices invaded strictly before the outlet; radius L1, boxes Linf");
    prov.note(format!(
        "censored: {}",
        samples.iter().filter(|s| s.censored).count()
    ));
    ctx.emit(&prov, &rows, &dumps, false)
}

#[derive(Args, Clone, Debug)]
pub struct EstimatePi {
    #[command(flatten)]
    pub common: Common,
    /// Box half-widths, comma separated
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    #[arg(long)]
    pub trials: Option<u64>,
}

pub fn estimate_pi_cmd(a: &EstimatePi) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let grid = pick(&a.n, &ctx.file.n, vec![8, 16, 32, 64]);
    check_positive("n", &grid)?;
    let trials = need_trials(pick(&a.trials, &ctx.file.trials, 10_000))?;
    let rows = grid
        .iter()
        .map(|&n| estimate_pi(n, trials, ctx.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let prov = Provenance::new(
        "estimate-pi",
        json!({ "seed": ctx.seed, "n": grid, "trials": trials }),
    )
    .convention("pi(n) = P_1/2(0 <-> dB(n)), B(n) the Linf ball")
    .convention("trial t uses derive_seed(seed, t) for every n");
    ctx.emit(&prov, &rows, &rows, true)
}

#[derive(Args, Clone, Debug)]
pub struct EstimateSigma {
    #[command(flatten)]
    pub common: Common,
    /// Rectangle widths, comma separated
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Rectangle height [default: n]
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Horizontal bonds on the top and bottom sides: excluded or included
    #[arg(long)]
    pub sides: Option<String>,
}

fn parse_sides(s: &str) -> Result<SideBonds> {
    match s {
        "excluded" => Ok(SideBonds::Excluded),
        "included" => Ok(SideBonds::Included),
        other => usage!("--sides must be excluded or included, got {other}"),
    }
}

pub fn estimate_sigma_cmd(a: &EstimateSigma) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let grid = pick(&a.n, &ctx.file.n, vec![8, 16, 32]);
    check_positive("n", &grid)?;
    let m = pick_opt(&a.m, &ctx.file.m);
    let ps = pick(&a.p, &ctx.file.p, vec![0.5]);
    let trials = need_trials(pick(&a.trials, &ctx.file.trials, 10_000))?;
    let sides_name = pick(&a.sides, &ctx.file.sides, "excluded".to_string());
    let sides = parse_sides(&sides_name)?;
    let mut rows = Vec::new();
    for &p in &ps {
        for &n in &grid {
            rows.push(estimate_crossing(
                n,
                m.unwrap_or(n),
                p,
                trials,
                ctx.seed,
                sides,
            )?);
        }
    }
    let prov = Provenance::new(
        "estimate-sigma",
        json!({ "seed": ctx.seed, "n": grid, "m": m, "p": ps, "trials": trials, "sides": sides_name }),
    )
    .convention("left-to-right crossing of [0,n] x [0,m] using edges inside the rectangle")
    .convention(match sides {
        SideBonds::Excluded => "horizontal bonds on y = 0 and y = m excluded; their vertices usable",
        SideBonds::Included => "horizontal bonds on y = 0 and y = m included",
    });
    ctx.emit(&prov, &rows, &rows, true)
}

#[derive(Args, Clone, Debug, Default)]
pub struct LArgs {
    #[arg(long)]
    pub eps: Option<f64>,
    /// Crossing trials at each probed size
    #[arg(long)]
    pub trials_per_size: Option<u64>,
    /// Largest size probed before declaring saturation
    #[arg(long)]
    pub n_max: Option<u32>,
}

impl LArgs {
    fn resolve(&self, file: &FileConfig, seed: u64) -> LConfig {
        let d = LConfig::default();
        LConfig {
            eps: pick(&self.eps, &file.eps, d.eps),
            trials_per_size: pick(
                &self.trials_per_size,
                &file.trials_per_size,
                d.trials_per_size,
            ),
            n_max: pick(&self.n_max, &file.n_max, d.n_max),
            seed,
        }
    }
}

fn l_json(c: &LConfig) -> serde_json::Value {
    json!({ "eps": c.eps, "trials_per_size": c.trials_per_size, "n_max": c.n_max })
}

#[derive(Args, Clone, Debug)]
pub struct EstimateL {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[command(flatten)]
    pub l: LArgs,
}

#[derive(Serialize)]
struct LRow {
    p: f64,
    eps: f64,
    l_hat: Option<u32>,
    l_smoothed: Option<f64>,
    sigma_at_l: Option<f64>,
    trials_per_size: u64,
    n_max: u32,
    seed: u64,
    saturated: bool,
}

pub fn estimate_l_cmd(a: &EstimateL) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let ps = pick(&a.p, &ctx.file.p, vec![0.52, 0.54, 0.56, 0.58, 0.6]);
    let cfg = a.l.resolve(&ctx.file, ctx.seed);
    let table = CorrelationTable::build(&ps, &cfg)?;
    let rows: Vec<LRow> = table
        .rows
        .iter()
        .zip(&table.smoothed)
        .map(|(r, s)| LRow {
            p: r.p,
            eps: r.eps,
            l_hat: r.l_hat,
            l_smoothed: *s,
            sigma_at_l: r.sigma_at_l,
            trials_per_size: r.trials_per_size,
            n_max: r.n_max,
            seed: ctx.seed,
            saturated: r.saturated(),
        })
        .collect();
    let prov = Provenance::new(
        "estimate-L",
        json!({ "seed": ctx.seed, "p": ps, "l": l_json(&cfg) }),
    )
    .convention("L(p, eps) = min n with sigma(n, n, p) >= 1 - eps, doubling then bisection")
    .convention("crossings exclude horizontal bonds on the top and bottom sides")
    .convention("l_smoothed is a nonincreasing least-squares fit of the raw values");
    ctx.emit(&prov, &rows, &table, false)
}

#[derive(Args, Clone, Debug)]
pub struct EstimateTheta {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Box factor K: the origin must reach dB(K * L(p))
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Trials for pi(L(p)) [default: trials]
    #[arg(long)]
    pub pi_trials: Option<u64>,
    #[command(flatten)]
    pub l: LArgs,
}

pub fn estimate_theta_cmd(a: &EstimateTheta) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let ps = pick(&a.p, &ctx.file.p, vec![0.52, 0.54, 0.56, 0.58, 0.6]);
    let k = pick(&a.k, &ctx.file.k, 4);
    let trials = need_trials(pick(&a.trials, &ctx.file.trials, 1000))?;
    let pi_trials = need_trials(pick(&a.pi_trials, &ctx.file.pi_trials, trials))?;
    let cfg = a.l.resolve(&ctx.file, ctx.seed);
    let pi_seed = paired_pi_seed(ctx.seed);
    let mut rows: Vec<TailEstimate> = Vec::new();
    let mut report = Vec::new();
    let mut prov = Provenance::new(
        "estimate-theta",
        json!({ "seed": ctx.seed, "p": ps, "k": k, "trials": trials, "pi_trials": pi_trials, "l": l_json(&cfg) }),
    )
    .convention("theta(p) proxy: P_p(0 <-> dB(K * L(p)))")
    .convention("pi rows: P_1/2(0 <-> dB(L(p))) on seed derive_seed(seed, 2^64 - 1)");
    for &p in &ps {
        let theta = estimate_theta(p, k, trials, ctx.seed, &cfg)?;
        let pi = estimate_pi(theta.l_hat, pi_trials, pi_seed)?.with_p(p);
        prov.note(format!(
            "p={p} l_hat={} radius={}",
            theta.l_hat, theta.radius
        ));
        rows.push(theta.tail.clone());
        rows.push(pi.clone());
        report.push(
            json!({ "theta": theta, "pi_at_l": pi, "ratio": theta.tail.estimate / pi.estimate }),
        );
    }
    ctx.emit(&prov, &rows, &report, true)
}

#[derive(Args, Clone, Debug)]
pub struct PondPartition {
    #[command(flatten)]
    pub common: Common,
    /// Half-width of the labelled box
    #[arg(long)]
    pub n: Option<u32>,
    /// Outer box half-width, at least 2n [default: 2n]
    #[arg(long)]
    pub outer: Option<u32>,
}

#[derive(Serialize)]
struct PartitionRow {
    x: i32,
    y: i32,
    label: u32,
    level: f64,
}

pub fn pond_partition_cmd(a: &PondPartition) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let n = pick(
        &a.n,
        &ctx.file.n.as_ref().and_then(|g| g.first().copied()),
        8,
    );
    let outer = pick(&a.outer, &ctx.file.outer, 2 * n);
    let field = WeightField::pseudorandom(ctx.seed);
    let part = pond_partition(&field, n, outer)?;
    let rows: Vec<PartitionRow> = part
        .inner()
        .vertices()
        .map(|v| PartitionRow {
            x: v.x,
            y: v.y,
            label: part.label(v).expect("inside"),
            level: part.vertex_level(v).expect("inside"),
        })
        .collect();
    let levels: Vec<f64> = (0..part.class_count() as u32)
        .map(|l| part.class_level(l))
        .collect();
    let prov = Provenance::new(
        "pond-partition",
        json!({ "seed": ctx.seed, "n": n, "outer": outer }),
    )
    .convention("level of v = minimax weight of paths from v to dB(outer)")
    .convention("classes = connected sets of B(n) sharing a level");
    let report = json!({ "n": n, "outer": outer, "classes": part.class_count(), "levels": levels });
    ctx.emit(&prov, &rows, &report, false)
}

#[derive(Args, Clone, Debug)]
pub struct CompareRadius {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Pond samples
    #[arg(long)]
    pub trials: Option<u64>,
    /// pi(n) samples [default: trials]
    #[arg(long)]
    pub pi_trials: Option<u64>,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Serialize)]
struct RadiusRow {
    n: u32,
    trials: u64,
    hits: u64,
    censored_count: u64,
    estimate: f64,
    ci_low: f64,
    ci_high: f64,
    pi_trials: u64,
    pi_hits: u64,
    pi_estimate: f64,
    pi_ci_low: f64,
    pi_ci_high: f64,
    ratio: f64,
    ratio_low: f64,
    ratio_high: f64,
}

pub fn compare_radius_cmd(a: &CompareRadius) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let grid = pick(&a.n, &ctx.file.n, vec![8, 16, 32, 64]);
    check_powers_of_two("n", &grid)?;
    let trials = need_trials(pick(&a.trials, &ctx.file.trials, 10_000))?;
    let pi_trials = need_trials(pick(&a.pi_trials, &ctx.file.pi_trials, trials))?;
    let policy = a.policy.resolve(&ctx.file, &grid)?;
    let pi_seed = paired_pi_seed(ctx.seed);
    let report = compare_radius(&grid, trials, ctx.seed, policy, pi_trials, pi_seed)?;
    let rows: Vec<RadiusRow> = report
        .rows
        .iter()
        .map(|r| RadiusRow {
            n: r.n,
            trials: r.numerator.trials,
            hits: r.numerator.hits,
            censored_count: r.numerator.censored_count,
            estimate: r.numerator.estimate,
            ci_low: r.numerator.ci_low,
            ci_high: r.numerator.ci_high,
            pi_trials: r.denominator.trials,
            pi_hits: r.denominator.hits,
            pi_estimate: r.denominator.estimate,
            pi_ci_low: r.denominator.ci_low,
            pi_ci_high: r.denominator.ci_high,
            ratio: r.ratio.ratio,
            ratio_low: r.ratio.low,
            ratio_high: r.ratio.high,
        })
        .collect();
    let mut prov = Provenance::new(
        "compare-radius",
        json!({ "seed": ctx.seed, "n": grid, "trials": trials, "pi_trials": pi_trials, "pi_seed": pi_seed,
                "policy": policy_json(&policy) }),
    )
    .convention("comparator: R_hat >= n, R_hat the L1 radius of the first pond")
    .convention("censored ponds counted as hits; exact for n <= m_max / margin")
    .convention("ratio interval: [lo_num / hi_den, hi_num / lo_den]");
    if let Some(r) = rows.first() {
        prov.note(format!("censored: {}", r.censored_count));
    }
    ctx.emit(&prov, &rows, &report, false)
}

#[derive(Args, Clone, Debug)]
pub struct CompareVolume {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Trials of the pi(n) pilot fixing s(n)
    #[arg(long)]
    pub pilot_trials: Option<u64>,
    #[arg(long)]
    pub pilot_seed: Option<u64>,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Serialize)]
struct VolumeCsvRow {
    n: u32,
    s_n: u64,
    pi_pilot: f64,
    pilot_trials: u64,
    trials: u64,
    pond_hits: u64,
    pond_censored: u64,
    pond_estimate: f64,
    pond_ci_low: f64,
    pond_ci_high: f64,
    critical_hits: u64,
    critical_censored: u64,
    critical_estimate: f64,
    critical_ci_low: f64,
    critical_ci_high: f64,
    ratio: f64,
    ratio_low: f64,
    ratio_high: f64,
}

pub fn compare_volume_cmd(a: &CompareVolume) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let grid = pick(&a.n, &ctx.file.n, vec![8, 16, 32]);
    check_powers_of_two("n", &grid)?;
    let trials = need_trials(pick(&a.trials, &ctx.file.trials, 10_000))?;
    let pilot_trials = need_trials(pick(&a.pilot_trials, &ctx.file.pilot_trials, 100_000))?;
    let pilot_seed = pick(
        &a.pilot_seed,
        &ctx.file.pilot_seed,
        paired_pi_seed(ctx.seed),
    );
    let policy = a.policy.resolve(&ctx.file, &grid)?;
    let report = pond_volume_tail(&grid, trials, ctx.seed, policy, pilot_trials, pilot_seed)?;
    let rows: Vec<VolumeCsvRow> = report
        .rows
        .iter()
        .map(|r| VolumeCsvRow {
            n: r.n,
            s_n: r.s_n,
            pi_pilot: r.pi_pilot.estimate,
            pilot_trials,
            trials: r.pond.trials,
            pond_hits: r.pond.hits,
            pond_censored: r.pond.censored_count,
            pond_estimate: r.pond.estimate,
            pond_ci_low: r.pond.ci_low,
            pond_ci_high: r.pond.ci_high,
            critical_hits: r.critical.hits,
            critical_censored: r.critical.censored_count,
            critical_estimate: r.critical.estimate,
            critical_ci_low: r.critical.ci_low,
            critical_ci_high: r.critical.ci_high,
            ratio: r.ratio.ratio,
            ratio_low: r.ratio.low,
            ratio_high: r.ratio.high,
        })
        .collect();
    let mut prov = Provenance::new(
        "compare-volume",
        json!({ "seed": ctx.seed, "n": grid, "trials": trials, "pilot_trials": pilot_trials,
                "pilot_seed": pilot_seed, "policy": policy_json(&policy) }),
    )
    .convention("s(n) = round(n^2 * pi_hat(n)) from the pilot")
    .convention("comparators: |V_hat| > s(n) and |C(0)| > s(n), C(0) the 1/2-open cluster on the same field")
    .convention("censored ponds and boundary-touching clusters counted as hits")
    .convention("ratio = P(|V_hat| > s(n)) / pi_hat(n), pi_hat from the pilot");
    prov.note(format!("censoring bracket width: {}", report.bracket_width));
    ctx.emit(&prov, &rows, &report, false)
}

#[derive(Args, Clone, Debug)]
pub struct CheckDualities {
    #[command(flatten)]
    pub common: Common,
    /// Number of fields
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Diameter thresholds for the circuit implication
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Box half-width M
    #[arg(long = "box")]
    pub box_size: Option<u32>,
}

#[derive(Serialize)]
pub struct DualityRow {
    pub check: String,
    pub p: String,
    pub n: Option<u32>,
    pub fields: u64,
    pub applicable: u64,
    pub holds: u64,
    pub violations: u64,
}

pub fn check_dualities_cmd(a: &CheckDualities) -> Result<()> {
    let ctx = Ctx::new(&a.common)?;
    let trials = need_trials(pick(&a.trials, &ctx.file.trials, 1000))?;
    let ps = pick(&a.p, &ctx.file.p, vec![0.5, 0.55]);
    let ns = pick(&a.n, &ctx.file.n, vec![4, 8]);
    check_positive("n", &ns)?;
    let m = pick(&a.box_size, &ctx.file.box_size, 32);
    if let Some(bad) = ns.iter().find(|&&n| n > m) {
        usage!("--n {bad} exceeds --box {m}");
    }
    let rows = duality_rows(ctx.seed, trials, &ps, &ns, m)?;
    let prov = Provenance::new(
        "check-dualities",
        json!({ "seed": ctx.seed, "trials": trials, "p": ps, "n": ns, "box": m }),
    )
    .convention("minimax_duality: O <-> dB(M) by p-open edges iff minimax level to dB(M) < p")
    .convention("circuit_implication: level > p and pond L1 radius >= n imply a p-closed dual circuit of L1 diameter >= n")
    .convention("circuits: nested territory boundaries only, a one-sided witness");
    ctx.emit(&prov, &rows, &rows, false)
}

/// Minimax-duality outcomes, then (premise, holds) of each circuit implication.
type FieldChecks = (Vec<bool>, Vec<(bool, bool)>);

/// Runs both duality checks on fields `derive_seed(seed, i)`, `i < trials`.
pub fn duality_rows(
    seed: u64,
    trials: u64,
    ps: &[f64],
    ns: &[u32],
    m: u32,
) -> Result<Vec<DualityRow>> {
    const NUDGE: f64 = 1e-9;
    // per field: duality outcomes for each p then level -/+ nudge; implication (premise, holds) per (p, n)
    let per_field = map_samples(trials, |i| -> invasion_ponds::Result<FieldChecks> {
        let field = WeightField::pseudorandom(derive_seed(seed, i));
        let sweep = minimax_pond(&field, ORIGIN, m)?;
        let mut a = Vec::with_capacity(ps.len() + 2);
        for p in ps
            .iter()
            .copied()
            .chain([sweep.level - NUDGE, sweep.level + NUDGE])
        {
            let p = p.clamp(0.0, 1.0);
            a.push(reaches_boundary(&field, ORIGIN, p, m)? == (sweep.level < p));
        }
        let radius = l1_radius(&sweep.pond)?;
        let mut b = Vec::with_capacity(ps.len() * ns.len());
        for &p in ps {
            for &n in ns {
                let premise = sweep.level > p && radius >= n;
                let holds = !premise || check_anp(&field, p, n, m)?.exists;
                b.push((premise, holds));
            }
        }
        Ok((a, b))
    })
    .into_iter()
    .collect::<invasion_ponds::Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let labels: Vec<String> = ps
        .iter()
        .map(|p| p.to_string())
        .chain(["level-1e-9".into(), "level+1e-9".into()])
        .collect();
    for (j, label) in labels.into_iter().enumerate() {
        let holds = per_field.iter().filter(|(a, _)| a[j]).count() as u64;
        rows.push(DualityRow {
            check: "minimax_duality".into(),
            p: label,
            n: None,
            fields: trials,
            applicable: trials,
            holds,
            violations: trials - holds,
        });
    }
    for (pi, p) in ps.iter().enumerate() {
        for (ni, &n) in ns.iter().enumerate() {
            let j = pi * ns.len() + ni;
            let applicable = per_field.iter().filter(|(_, b)| b[j].0).count() as u64;
            let violations = per_field.iter().filter(|(_, b)| !b[j].1).count() as u64;
            rows.push(DualityRow {
                check: "circuit_implication".into(),
                p: p.to_string(),
                n: Some(n),
                fields: trials,
                applicable,
                holds: applicable - violations,
                violations,
            });
        }
    }
    Ok(rows)
}
