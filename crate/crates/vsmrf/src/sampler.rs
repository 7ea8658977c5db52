//! Synthetic ground-truth model generation and Gibbs sampling.
//!
//! `random_model` draws a sparse pairwise model: each unordered pair becomes
//! an edge independently, surviving entries are uniform on `+-[0.5, 1] *
//! weight_scale`, and biases sit at each family's feasible point. Because
//! arbitrary signed weights can push a neighbor's conditional natural
//! parameter out of its feasible region (a gamma node's rate must stay
//! positive no matter what its neighbors do), the generator validates every
//! conditional coordinate by interval arithmetic over truncated statistic
//! ranges and repairs offending entries by sign flips (when one direction is
//! harmless) or zeroing. The same truncation ranges are enforced during
//! Gibbs sampling by rejection, so generated models stay proper along the
//! whole chain.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::expfam::Family;
use crate::model::{GraphSchema, JointModel};
use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Gibbs chain configuration. Defaults: burn-in 2000 scans, thinning 10.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    #[serde(default)]
    pub truncation: TruncationBounds,
}

impl SamplerConfig {
    pub fn new(seed: u64) -> SamplerConfig {
        SamplerConfig {
            burn_in: 2000,
            thin: 10,
            seed,
            truncation: TruncationBounds::default(),
        }
    }
}

/// Edge- and parameter-level sparsity of a synthetic model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SparsityProfile {
    /// Probability that an unordered pair is *not* an edge.
    pub edge_sparsity: f64,
    /// Probability that an individual entry inside an edge block is zero.
    pub param_sparsity: f64,
}

impl SparsityProfile {
    pub fn new(edge_sparsity: f64, param_sparsity: f64) -> Result<SparsityProfile> {
        for v in [edge_sparsity, param_sparsity] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "sparsity fractions must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(SparsityProfile {
            edge_sparsity,
            param_sparsity,
        })
    }

    /// High-sparsity scenario: 90% edge sparsity, 50% intra-edge sparsity.
    pub fn high() -> SparsityProfile {
        SparsityProfile {
            edge_sparsity: 0.9,
            param_sparsity: 0.5,
        }
    }

    /// Low-sparsity scenario: 50% edge sparsity, 10% intra-edge sparsity.
    pub fn low() -> SparsityProfile {
        SparsityProfile {
            edge_sparsity: 0.5,
            param_sparsity: 0.1,
        }
    }
}

/// Value ranges enforced at sampling time for families with unbounded
/// domains. These double as the statistic ranges behind the generator's
/// interval-arithmetic feasibility validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationBounds {
    pub gaussian: (f64, f64),
    pub gamma: (f64, f64),
    /// Minimum simplex coordinate for Dirichlet nodes.
    pub dirichlet_floor: f64,
}

impl Default for TruncationBounds {
    fn default() -> TruncationBounds {
        TruncationBounds {
            gaussian: (-6.0, 6.0),
            gamma: (0.02, 12.0),
            dirichlet_floor: 0.01,
        }
    }
}

impl TruncationBounds {
    /// Whether a raw value lies inside the truncated domain.
    pub fn contains(&self, family: &Family, value: &[f64]) -> bool {
        match family {
            Family::Bernoulli | Family::Categorical { .. } => true,
            Family::Gaussian => value[0] >= self.gaussian.0 && value[0] <= self.gaussian.1,
            Family::Gamma => value[0] >= self.gamma.0 && value[0] <= self.gamma.1,
            Family::Dirichlet(_) => value.iter().all(|&v| v >= self.dirichlet_floor),
            Family::Inflated { base, points } => {
                points.iter().any(|p| p.value == value[0]) || self.contains(base, value)
            }
        }
    }

    /// Per-coordinate interval of each sufficient statistic over the
    /// truncated domain.
    pub fn statistic_intervals(&self, family: &Family) -> Vec<(f64, f64)> {
        match family {
            Family::Bernoulli => vec![(0.0, 1.0)],
            Family::Categorical { k, overcomplete } => {
                let dim = if *overcomplete { *k } else { *k - 1 };
                vec![(0.0, 1.0); dim]
            }
            Family::Gaussian => {
                let (lo, hi) = self.gaussian;
                let sq = lo.abs().max(hi.abs()).powi(2);
                let sq_lo = if lo <= 0.0 && hi >= 0.0 {
                    0.0
                } else {
                    lo.abs().min(hi.abs()).powi(2)
                };
                vec![(lo, hi), (sq_lo, sq)]
            }
            Family::Gamma => {
                let (lo, hi) = self.gamma;
                vec![(lo.ln(), hi.ln()), (lo, hi)]
            }
            Family::Dirichlet(k) => {
                let lo = self.dirichlet_floor.ln();
                let hi = (1.0 - (*k as f64 - 1.0) * self.dirichlet_floor).ln();
                vec![(lo, hi); *k]
            }
            Family::Inflated { base, points } => {
                let mut out = vec![(0.0, 1.0); points.len()];
                let base_ranges = self.statistic_intervals(base);
                // base statistics are zero at out-of-domain atoms, and take
                // their literal values at in-domain ones
                for (i, (mut lo, mut hi)) in base_ranges.into_iter().enumerate() {
                    for p in points {
                        let v = if p.in_base_domain {
                            base.sufficient_statistics(&[p.value])
                                .map(|b| b[i])
                                .unwrap_or(0.0)
                        } else {
                            0.0
                        };
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                    out.push((lo, hi));
                }
                out
            }
        }
    }
}

/// Interval of conditional natural parameters the generator keeps each
/// coordinate inside (bias included). Tighter than the raw feasible region
/// so that sampled values rarely escape the truncation ranges.
fn conditional_budget(family: &Family) -> Vec<(f64, f64)> {
    match family {
        Family::Bernoulli => vec![(-3.5, 3.5)],
        Family::Categorical { k, overcomplete } => {
            let dim = if *overcomplete { *k } else { *k - 1 };
            vec![(-3.5, 3.5); dim]
        }
        Family::Gaussian => vec![(-1.5, 1.5), (-3.0, -0.35)],
        Family::Gamma => vec![(-0.3, 1.0), (-2.5, -0.5)],
        Family::Dirichlet(k) => vec![(-0.6, 2.5); *k],
        Family::Inflated { base, points } => {
            let mut out = vec![(-3.0, 3.0); points.len()];
            out.extend(conditional_budget(base));
            out
        }
    }
}

/// Retry policy for the generator.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorConfig {
    pub truncation: TruncationBounds,
    pub model_retries: usize,
    pub block_retries: usize,
}

impl Default for GeneratorConfig {
    fn default() -> GeneratorConfig {
        GeneratorConfig {
            truncation: TruncationBounds::default(),
            model_retries: 50,
            block_retries: 8,
        }
    }
}

/// Draws a random ground-truth model under the default generator policy.
pub fn random_model<R: Rng + ?Sized>(
    schema: &GraphSchema,
    profile: SparsityProfile,
    weight_scale: f64,
    rng: &mut R,
) -> Result<JointModel> {
    random_model_with(schema, profile, weight_scale, &GeneratorConfig::default(), rng)
}

pub fn random_model_with<R: Rng + ?Sized>(
    schema: &GraphSchema,
    profile: SparsityProfile,
    weight_scale: f64,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<JointModel> {
    if weight_scale <= 0.0 {
        return Err(Error::InvalidArgument("weight_scale must be positive".into()));
    }
    for _ in 0..cfg.model_retries.max(1) {
        if let Some(model) = try_draw_model(schema, profile, weight_scale, cfg, rng)? {
            return Ok(model);
        }
    }
    Err(Error::Validation(format!(
        "no feasible model after {} retries; weight_scale {} is likely too large for this schema",
        cfg.model_retries, weight_scale
    )))
}

fn try_draw_model<R: Rng + ?Sized>(
    schema: &GraphSchema,
    profile: SparsityProfile,
    weight_scale: f64,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<Option<JointModel>> {
    let p = schema.p();
    let bias: Vec<Array1<f64>> = (0..p).map(|r| schema.family(r).feasible_point()).collect();

    // declare edges
    let mut blocks: Vec<((usize, usize), Array2<f64>)> = Vec::new();
    for r in 0..p {
        for t in (r + 1)..p {
            if rng.random::<f64>() < 1.0 - profile.edge_sparsity {
                let block = draw_block(schema, r, t, profile, weight_scale, rng);
                blocks.push(((r, t), block));
            }
        }
    }

    let stat_ranges: Vec<Vec<(f64, f64)>> = (0..p)
        .map(|r| cfg.truncation.statistic_intervals(schema.family(r)))
        .collect();
    let budgets: Vec<Vec<(f64, f64)>> =
        (0..p).map(|r| conditional_budget(schema.family(r))).collect();

    repair(&bias, &mut blocks, &stat_ranges, &budgets);

    // re-draw any block the repair emptied
    for _ in 0..cfg.block_retries {
        let empty: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(_, (_, b))| b.iter().all(|&v| v == 0.0))
            .map(|(i, _)| i)
            .collect();
        if empty.is_empty() {
            break;
        }
        for i in empty {
            let (r, t) = blocks[i].0;
            blocks[i].1 = draw_block(schema, r, t, profile, weight_scale, rng);
        }
        repair(&bias, &mut blocks, &stat_ranges, &budgets);
    }
    if blocks.iter().any(|(_, b)| b.iter().all(|&v| v == 0.0)) {
        return Ok(None);
    }

    let mut model = JointModel::new(schema.clone(), bias)?;
    for ((r, t), block) in blocks {
        model.set_edge(r, t, block)?;
    }
    validate_intervals(&model, &cfg.truncation)?;
    Ok(Some(model))
}

/// Draws one edge block: entries zero with probability `param_sparsity`,
/// otherwise uniform on `+-[0.5, 1] * weight_scale`; redraws until at least
/// one entry is nonzero.
fn draw_block<R: Rng + ?Sized>(
    schema: &GraphSchema,
    r: usize,
    t: usize,
    profile: SparsityProfile,
    weight_scale: f64,
    rng: &mut R,
) -> Array2<f64> {
    let (m_r, m_t) = (schema.stat_dim(r), schema.stat_dim(t));
    loop {
        let mut block = Array2::zeros((m_r, m_t));
        for v in block.iter_mut() {
            if rng.random::<f64>() >= profile.param_sparsity {
                let mag = (0.5 + 0.5 * rng.random::<f64>()) * weight_scale;
                let sign = if rng.random::<f64>() < 0.5 { -1.0 } else { 1.0 };
                *v = sign * mag;
            }
        }
        if block.iter().any(|&v| v != 0.0) {
            return block;
        }
    }
}

fn contribution(theta: f64, range: (f64, f64)) -> (f64, f64) {
    let a = theta * range.0;
    let b = theta * range.1;
    (a.min(b), a.max(b))
}

/// Interval of each conditional natural-parameter coordinate implied by the
/// current blocks, per node. One block entry moves two coordinates: eta_r[a]
/// through B_t[b] and eta_t[b] through B_r[a].
fn coordinate_intervals(
    bias: &[Array1<f64>],
    blocks: &[((usize, usize), Array2<f64>)],
    stat_ranges: &[Vec<(f64, f64)>],
) -> Vec<Vec<(f64, f64)>> {
    let mut intervals: Vec<Vec<(f64, f64)>> = bias
        .iter()
        .map(|b| b.iter().map(|&v| (v, v)).collect())
        .collect();
    for ((r, t), block) in blocks {
        for a in 0..block.nrows() {
            for b in 0..block.ncols() {
                let w = block[[a, b]];
                if w == 0.0 {
                    continue;
                }
                let (lo, hi) = contribution(w, stat_ranges[*t][b]);
                intervals[*r][a].0 += lo;
                intervals[*r][a].1 += hi;
                let (lo, hi) = contribution(w, stat_ranges[*r][a]);
                intervals[*t][b].0 += lo;
                intervals[*t][b].1 += hi;
            }
        }
    }
    intervals
}

fn total_excess(intervals: &[Vec<(f64, f64)>], budgets: &[Vec<(f64, f64)>]) -> f64 {
    let mut v = 0.0;
    for (iv, bv) in intervals.iter().zip(budgets) {
        for ((lo, hi), (blo, bhi)) in iv.iter().zip(bv) {
            v += (blo - lo).max(0.0) + (hi - bhi).max(0.0);
        }
    }
    v
}

/// Flips or zeroes entries until every conditional coordinate interval fits
/// its budget. Each entry is flipped at most once; zeroing strictly shrinks
/// intervals, so the loop terminates.
fn repair(
    bias: &[Array1<f64>],
    blocks: &mut [((usize, usize), Array2<f64>)],
    stat_ranges: &[Vec<(f64, f64)>],
    budgets: &[Vec<(f64, f64)>],
) {
    let mut flipped: Vec<Vec<bool>> = blocks.iter().map(|(_, b)| vec![false; b.len()]).collect();
    loop {
        let intervals = coordinate_intervals(bias, blocks, stat_ranges);
        let excess = total_excess(&intervals, budgets);
        if excess <= 0.0 {
            return;
        }
        // worst violated coordinate
        let mut worst = (0usize, 0usize, 0.0f64, false);
        for (r, iv) in intervals.iter().enumerate() {
            for (a, &(lo, hi)) in iv.iter().enumerate() {
                let (blo, bhi) = budgets[r][a];
                let under = (blo - lo).max(0.0);
                let over = (hi - bhi).max(0.0);
                if under.max(over) > worst.2 {
                    worst = (r, a, under.max(over), over >= under);
                }
            }
        }
        let (vr, va, _, over_side) = worst;

        // entry contributing most to the violated side
        let mut pick: Option<(usize, usize, usize, f64)> = None;
        for (bi, ((r, t), block)) in blocks.iter().enumerate() {
            for a in 0..block.nrows() {
                for b in 0..block.ncols() {
                    let w = block[[a, b]];
                    if w == 0.0 {
                        continue;
                    }
                    let c = if *r == vr && a == va {
                        contribution(w, stat_ranges[*t][b])
                    } else if *t == vr && b == va {
                        contribution(w, stat_ranges[*r][a])
                    } else {
                        continue;
                    };
                    let severity = if over_side { c.1 } else { -c.0 };
                    if severity > 0.0 && pick.map(|p| severity > p.3).unwrap_or(true) {
                        pick = Some((bi, a, b, severity));
                    }
                }
            }
        }
        let Some((bi, a, b, _)) = pick else {
            // violation comes from the bias alone; nothing left to remove
            return;
        };
        let flat = a * blocks[bi].1.ncols() + b;
        if !flipped[bi][flat] {
            flipped[bi][flat] = true;
            blocks[bi].1[[a, b]] = -blocks[bi].1[[a, b]];
            let new_excess =
                total_excess(&coordinate_intervals(bias, blocks, stat_ranges), budgets);
            if new_excess < excess {
                continue;
            }
            blocks[bi].1[[a, b]] = -blocks[bi].1[[a, b]];
        }
        blocks[bi].1[[a, b]] = 0.0;
    }
}

/// Re-checks a finished model against the interval budgets.
fn validate_intervals(model: &JointModel, trunc: &TruncationBounds) -> Result<()> {
    let schema = model.schema();
    let p = schema.p();
    let bias: Vec<Array1<f64>> = (0..p).map(|r| model.bias(r).clone()).collect();
    let blocks: Vec<((usize, usize), Array2<f64>)> =
        model.edges().map(|(r, t, b)| ((r, t), b.clone())).collect();
    let stat_ranges: Vec<Vec<(f64, f64)>> = (0..p)
        .map(|r| trunc.statistic_intervals(schema.family(r)))
        .collect();
    let budgets: Vec<Vec<(f64, f64)>> =
        (0..p).map(|r| conditional_budget(schema.family(r))).collect();
    let intervals = coordinate_intervals(&bias, &blocks, &stat_ranges);
    for r in 0..p {
        for a in 0..intervals[r].len() {
            let (lo, hi) = intervals[r][a];
            let (blo, bhi) = budgets[r][a];
            if lo < blo - 1e-9 || hi > bhi + 1e-9 {
                return Err(Error::Validation(format!(
                    "conditional eta[{a}] of node {r} ranges over [{lo:.3}, {hi:.3}], budget [{blo:.3}, {bhi:.3}]"
                )));
            }
        }
    }
    Ok(())
}

/// A finished Gibbs run with scan accounting.
pub struct GibbsRun {
    pub dataset: Dataset,
    /// Full systematic scans executed: `burn_in + n * thin`.
    pub scans: usize,
}

/// Systematic-scan Gibbs sampling: repeatedly resamples nodes `0..p` in
/// order, discards `burn_in` full scans, then keeps every `thin`-th scan
/// until `n` samples are collected. Deterministic under the config seed.
pub fn gibbs_sample(model: &JointModel, n: usize, cfg: &SamplerConfig) -> Result<Dataset> {
    gibbs_run(model, n, cfg).map(|run| run.dataset)
}

pub fn gibbs_run(model: &JointModel, n: usize, cfg: &SamplerConfig) -> Result<GibbsRun> {
    if cfg.thin == 0 {
        return Err(Error::InvalidArgument("thin must be positive".into()));
    }
    let schema = model.schema();
    let p = schema.p();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // initial state: every node sampled at its bias parameters
    let mut state: Vec<Vec<f64>> = Vec::with_capacity(p);
    for r in 0..p {
        let fam = schema.family(r);
        let eta = model.bias(r).clone();
        let mut value = vec![0.0; fam.raw_dim()];
        sample_truncated(fam, eta.as_slice().unwrap(), &cfg.truncation, &mut rng, &mut value)?;
        state.push(value);
    }
    let mut stats: Vec<Array1<f64>> = (0..p)
        .map(|r| schema.family(r).sufficient_statistics(&state[r]))
        .collect::<Result<_>>()?;

    let total_scans = cfg.burn_in + n * cfg.thin;
    let mut rows = Array2::zeros((n, schema.total_raw_dim()));
    let mut emitted = 0usize;
    for scan in 1..=total_scans {
        for r in 0..p {
            let fam = schema.family(r);
            let eta = model.conditional_from_stats(r, &stats);
            fam.check_params(eta.as_slice().unwrap())
                .map_err(|e| Error::InfeasibleConditional {
                    sample: Some(emitted),
                    reason: format!("node {r} during scan {scan}: {e}"),
                })?;
            sample_truncated(
                fam,
                eta.as_slice().unwrap(),
                &cfg.truncation,
                &mut rng,
                &mut state[r],
            )?;
            stats[r] = fam.sufficient_statistics(&state[r])?;
        }
        if scan > cfg.burn_in && (scan - cfg.burn_in) % cfg.thin == 0 {
            for r in 0..p {
                let off = schema.raw_offset(r);
                for (j, &v) in state[r].iter().enumerate() {
                    rows[[emitted, off + j]] = v;
                }
            }
            emitted += 1;
        }
    }
    debug_assert_eq!(emitted, n);
    Ok(GibbsRun {
        dataset: Dataset::from_raw(schema.clone(), rows)?,
        scans: total_scans,
    })
}

/// Draws from the family, rejecting values outside the truncation range.
/// After 64 rejections the draw is clamped into range; with the generator's
/// budgets this fallback is effectively unreachable.
fn sample_truncated<R: Rng + ?Sized>(
    family: &Family,
    eta: &[f64],
    trunc: &TruncationBounds,
    rng: &mut R,
    out: &mut [f64],
) -> Result<()> {
    for _ in 0..64 {
        family.sample_into(eta, rng, out)?;
        if trunc.contains(family, out) {
            return Ok(());
        }
    }
    clamp_into_range(family, trunc, out);
    Ok(())
}

fn clamp_into_range(family: &Family, trunc: &TruncationBounds, value: &mut [f64]) {
    match family {
        Family::Gaussian => value[0] = value[0].clamp(trunc.gaussian.0, trunc.gaussian.1),
        Family::Gamma => value[0] = value[0].clamp(trunc.gamma.0, trunc.gamma.1),
        Family::Dirichlet(_) => {
            let mut sum = 0.0;
            for v in value.iter_mut() {
                *v = v.max(trunc.dirichlet_floor);
                sum += *v;
            }
            for v in value.iter_mut() {
                *v /= sum;
            }
        }
        Family::Inflated { base, points } => {
            if !points.iter().any(|p| p.value == value[0]) {
                clamp_into_range(base, trunc, value);
            }
        }
        _ => {}
    }
}
