//! Universal coresets. Points are bucketed by their nearest bicriteria
//! center, by a geometric ring of cost around it, and by equivalence class;
//! each bucket is uniformly subsampled with integer weights that add back to
//! the bucket's mass.

use std::collections::BTreeMap;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::model::{Dataset, Objective, WeightedPoint, WeightedSet};
use crate::rng::{self, tag, Rng};
use crate::seeding::{bicriteria_seed_weighted, BicriteriaConfig, BicriteriaSolution};

/// Sample-size regime: general metrics or `ℝ^d`, where the log term grows
/// with the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Metric,
    Euclidean,
}

/// Tunables of the coreset builder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoresetConfig {
    pub c_med: f64,
    pub c_mean: f64,
    pub bicriteria: BicriteriaConfig,
    /// Divide ε by `k ln n` for means before sizing the sample.
    pub strict_kmeans_rescale: bool,
    /// Failure probability; replaces `ln n` by `ln max(n, 1/δ)`.
    pub delta: Option<f64>,
    /// Fixed per-cell sample size, bypassing the formula.
    pub sample_size_override: Option<usize>,
}

impl Default for CoresetConfig {
    fn default() -> Self {
        CoresetConfig {
            c_med: 4.0,
            c_mean: 4.0,
            bicriteria: BicriteriaConfig::default(),
            strict_kmeans_rescale: false,
            delta: None,
            sample_size_override: None,
        }
    }
}

/// Per-cell sample size and the parameters it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingPlan {
    pub s: usize,
    pub objective: Objective,
    pub regime: Regime,
    pub c_med: f64,
    pub c_mean: f64,
    /// The log term used: `ln n`, or `ln n + d ln(1/ε)` in `ℝ^d`.
    pub log_term: f64,
}

/// Per-cell sample size: `c·k·L/ε³` for median and `c·k·L/ε⁵` for means,
/// where `L = ln n`, plus `d·ln(1/ε)` in the Euclidean regime.
pub fn sample_size(
    n: u64,
    k: usize,
    epsilon: f64,
    objective: Objective,
    regime: Regime,
    d: usize,
    config: &CoresetConfig,
) -> SamplingPlan {
    let ln_n = match config.delta {
        Some(delta) if delta > 0.0 => (n.max(1) as f64).max(1.0 / delta).ln(),
        _ => (n.max(1) as f64).ln(),
    };
    let mut eps = epsilon;
    if config.strict_kmeans_rescale && objective == Objective::Means && ln_n > 0.0 {
        eps /= k as f64 * ln_n;
    }
    let log_term = match regime {
        Regime::Metric => ln_n,
        Regime::Euclidean => ln_n + d as f64 * (1.0 / eps).ln(),
    };
    let raw = match objective {
        Objective::Median => config.c_med * k as f64 * log_term / eps.powi(3),
        Objective::Means => config.c_mean * k as f64 * log_term / eps.powi(5),
    };
    let s = match config.sample_size_override {
        Some(s) => s.max(1),
        None => (raw.ceil() as usize).max(1),
    };
    SamplingPlan {
        s,
        objective,
        regime,
        c_med: config.c_med,
        c_mean: config.c_mean,
        log_term,
    }
}

/// Ring of an item at cost `r` from its bicriteria center: 0 for
/// `r ≤ μ`, otherwise the `j ≥ 1` with `2^{j-1}μ < r ≤ 2^j μ`.
pub fn ring_index(r: f64, mu: f64) -> usize {
    if r <= mu {
        return 0;
    }
    if mu <= 0.0 {
        return usize::MAX;
    }
    let mut j = ((r / mu).log2().ceil()).max(1.0) as usize;
    // Repair float error at the ring boundaries.
    while j > 1 && r <= mu * 2f64.powi(j as i32 - 1) {
        j -= 1;
    }
    while r > mu * 2f64.powi(j as i32) {
        j += 1;
    }
    j
}

/// Bicriteria solution plus the (center, ring) cell of every seeded item.
#[derive(Clone, Debug, PartialEq)]
pub struct RingDecomposition {
    pub bicriteria: BicriteriaSolution,
    pub mu: f64,
    /// Largest admissible ring index, `⌈log₂(νn)⌉`.
    pub max_ring: usize,
    pub ring_of: Vec<(usize, usize)>,
}

/// Assigns every item of the seeded set to its ring. Ring radii are in
/// objective units, so squared distances for means. `n` is the total weight.
pub fn ring_decompose(bic: &BicriteriaSolution, objective: Objective, n: u64) -> RingDecomposition {
    let scale = bic.nu * n.max(1) as f64;
    let mu = bic.cost / scale;
    let max_ring = scale.log2().ceil().max(0.0) as usize;
    let ring_of = bic
        .nearest
        .iter()
        .map(|&(i, d)| (i, ring_index(objective.cost(d), mu)))
        .collect();
    RingDecomposition {
        bicriteria: bic.clone(),
        mu,
        max_ring,
        ring_of,
    }
}

/// Uniform sample without replacement of `s` out of `pts`, each kept point
/// weighted `⌈|pts|/s⌉` or `⌊|pts|/s⌋` (the larger weights go to the first
/// draws) so the weights sum to `|pts|`. Returns `(point, weight)` pairs in
/// draw order; with `|pts| ≤ s` every point is kept with weight 1.
pub fn sample_ring_class(pts: &[usize], s: usize, rng: &mut Rng) -> Vec<(usize, u64)> {
    if pts.len() <= s {
        return pts.iter().map(|&p| (p, 1)).collect();
    }
    split_sample(pts.len() as u64, s, rng)
        .into_iter()
        .map(|(i, w)| (pts[i as usize], w))
        .collect()
}

/// Draws `s < m` distinct unit indices out of `m` and splits `m` among them.
fn split_sample(m: u64, s: usize, rng: &mut Rng) -> Vec<(u64, u64)> {
    let draws = index::sample(rng, m as usize, s);
    let base = m / s as u64;
    let extra = (m % s as u64) as usize;
    draws
        .iter()
        .enumerate()
        .map(|(r, u)| (u as u64, base + u64::from(r < extra)))
        .collect()
}

/// Coreset together with how it was built.
#[derive(Clone, Debug, PartialEq)]
pub struct Coreset {
    pub set: WeightedSet,
    /// `(bicriteria center, ring, class)` of every item of `set`.
    pub cells: Vec<(usize, usize, usize)>,
    pub plan: SamplingPlan,
    /// `None` when the input was returned unchanged or the seeding cost was 0.
    pub rings: Option<RingDecomposition>,
}

impl Coreset {
    fn identity(set: &WeightedSet, plan: SamplingPlan) -> Self {
        Coreset {
            set: set.clone(),
            cells: set.iter().map(|it| (0, 0, it.class)).collect(),
            plan,
            rings: None,
        }
    }
}

/// Builds a universal coreset of a weighted subset of `ds`. Items of weight
/// `w` count as `w` unit copies; sampled copies are folded back into their
/// items.
#[allow(clippy::too_many_arguments)]
pub fn build_coreset(
    ds: &Dataset,
    set: &WeightedSet,
    k: usize,
    epsilon: f64,
    objective: Objective,
    regime: Regime,
    config: &CoresetConfig,
    seed: u64,
) -> Result<Coreset> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid("epsilon must lie in (0, 1]"));
    }
    if regime == Regime::Euclidean && !ds.metric().is_euclidean() {
        return Err(Error::invalid("the Euclidean regime needs coordinates"));
    }
    let n = set.total_weight();
    let d = ds.metric().dim().unwrap_or(0);
    let plan = sample_size(n, k, epsilon, objective, regime, d, config);
    if set.len() <= k {
        return Ok(Coreset::identity(set, plan));
    }
    let bic = bicriteria_seed_weighted(ds, set, k, objective, &config.bicriteria, seed)?;

    if bic.cost == 0.0 {
        // Every item sits on a bicriteria center.
        let mut merged: BTreeMap<(usize, usize), WeightedPoint> = BTreeMap::new();
        for (it, &(i, _)) in set.iter().zip(&bic.nearest) {
            merged
                .entry((i, it.class))
                .and_modify(|rep| rep.weight += it.weight)
                .or_insert(*it);
        }
        let cells = merged.keys().map(|&(i, t)| (i, 0, t)).collect();
        return Ok(Coreset {
            set: merged.into_values().collect(),
            cells,
            plan,
            rings: None,
        });
    }

    let rings = ring_decompose(&bic, objective, n);
    let mut buckets: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
    for (idx, (it, &(i, j))) in set.iter().zip(&rings.ring_of).enumerate() {
        buckets.entry((i, j, it.class)).or_default().push(idx);
    }
    let mut items = Vec::new();
    let mut cells = Vec::new();
    for (&(i, j, t), members) in &buckets {
        let mass: u64 = members.iter().map(|&m| set.items[m].weight).sum();
        let kept: Vec<(usize, u64)> = if mass <= plan.s as u64 {
            members.iter().map(|&m| (m, set.items[m].weight)).collect()
        } else {
            let mut rng = rng::rng(seed, &[tag::CELL, i as u64, j as u64, t as u64]);
            let mut prefix = Vec::with_capacity(members.len());
            let mut acc = 0u64;
            for &m in members {
                acc += set.items[m].weight;
                prefix.push(acc);
            }
            let mut folded: BTreeMap<usize, u64> = BTreeMap::new();
            for (unit, w) in split_sample(mass, plan.s, &mut rng) {
                let pos = prefix.partition_point(|&end| end <= unit);
                *folded.entry(members[pos]).or_default() += w;
            }
            folded.into_iter().collect()
        };
        for (m, w) in kept {
            items.push(WeightedPoint {
                weight: w,
                ..set.items[m]
            });
            cells.push((i, j, t));
        }
    }
    Ok(Coreset {
        set: WeightedSet::new(items),
        cells,
        plan,
        rings: Some(rings),
    })
}

/// Universal coreset of all points of `ds` with default constants.
pub fn build_universal_coreset(
    ds: &Dataset,
    k: usize,
    epsilon: f64,
    objective: Objective,
    regime: Regime,
    seed: u64,
) -> Result<WeightedSet> {
    let c = build_coreset(
        ds,
        &ds.unit_weights(),
        k,
        epsilon,
        objective,
        regime,
        &CoresetConfig::default(),
        seed,
    )?;
    Ok(c.set)
}
