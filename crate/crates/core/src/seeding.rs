//! Initial solutions: bicriteria seeding that anchors the coreset rings,
//! farthest-first k-center traversal, the cost upper bound used for
//! aspect-ratio reduction, and candidate center lists for the Euclidean
//! pipeline.

use rand::seq::index;
use rand::Rng as _;

use crate::coreset::{build_coreset, CoresetConfig, Regime};
use crate::error::{Error, Result};
use crate::milp::fair_assign_exact;
use crate::model::{Center, Dataset, FairnessSpec, Objective, WeightedSet};
use crate::rng::{self, tag, Rng};

/// Tunables of [`bicriteria_seed`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BicriteriaConfig {
    /// Number of centers is `⌈beta_factor · k⌉`.
    pub beta_factor: f64,
    /// Independent runs; the cheapest is kept.
    pub repetitions: usize,
    /// Approximation constant used to derive the ring unit `Π/(ν n)`.
    pub nu: f64,
}

impl Default for BicriteriaConfig {
    fn default() -> Self {
        BicriteriaConfig {
            beta_factor: 2.0,
            repetitions: 3,
            nu: 32.0,
        }
    }
}

/// `O(k)`-center solution with its cost and per-item nearest center.
#[derive(Clone, Debug, PartialEq)]
pub struct BicriteriaSolution {
    /// Point ids of the chosen centers.
    pub centers: Vec<usize>,
    /// `Σ w · cost(d(p, C*))` over the seeded items.
    pub cost: f64,
    pub nu: f64,
    /// For every input item (same order): index into `centers` and distance.
    pub nearest: Vec<(usize, f64)>,
}

/// Samples one item index with probability proportional to `mass`, or
/// uniformly among `fallback` when all mass is zero.
fn sample_by_mass(rng: &mut Rng, mass: &[f64], fallback: &[usize]) -> Option<usize> {
    let total: f64 = mass.iter().sum();
    if total > 0.0 && total.is_finite() {
        let mut x = rng.gen::<f64>() * total;
        let mut last = None;
        for (i, &m) in mass.iter().enumerate() {
            if m <= 0.0 {
                continue;
            }
            last = Some(i);
            if x < m {
                return Some(i);
            }
            x -= m;
        }
        return last;
    }
    if fallback.is_empty() {
        None
    } else {
        Some(fallback[rng.gen_range(0..fallback.len())])
    }
}

fn seed_once(
    ds: &Dataset,
    set: &WeightedSet,
    count: usize,
    objective: Objective,
    rng: &mut Rng,
) -> BicriteriaSolution {
    let items = &set.items;
    let mut chosen = vec![false; items.len()];
    let mut centers = Vec::with_capacity(count);
    let mut nearest: Vec<(usize, f64)> = vec![(0, f64::INFINITY); items.len()];
    let weights: Vec<f64> = items.iter().map(|it| it.weight as f64).collect();
    let all: Vec<usize> = (0..items.len()).collect();
    let first = sample_by_mass(rng, &weights, &all).expect("non-empty set");
    let mut pick = first;
    loop {
        chosen[pick] = true;
        let c = items[pick].point;
        let ci = centers.len();
        centers.push(c);
        for (i, it) in items.iter().enumerate() {
            let d = ds.dist(it.point, c);
            if d < nearest[i].1 {
                nearest[i] = (ci, d);
            }
        }
        if centers.len() == count {
            break;
        }
        let mass: Vec<f64> = items
            .iter()
            .enumerate()
            .map(|(i, it)| {
                if chosen[i] {
                    0.0
                } else {
                    it.weight as f64 * objective.cost(nearest[i].1)
                }
            })
            .collect();
        let open: Vec<usize> = (0..items.len()).filter(|&i| !chosen[i]).collect();
        match sample_by_mass(rng, &mass, &open) {
            Some(i) => pick = i,
            None => break,
        }
    }
    let cost = items
        .iter()
        .zip(&nearest)
        .map(|(it, &(_, d))| it.weight as f64 * objective.cost(d))
        .sum();
    BicriteriaSolution {
        centers,
        cost,
        nu: 0.0,
        nearest,
    }
}

/// Bicriteria seeding over a weighted set by `D^p`-sampling of
/// `⌈beta_factor · k⌉` centers (`p` = 1 for median, 2 for means), repeated
/// and keeping the cheapest run.
pub fn bicriteria_seed_weighted(
    ds: &Dataset,
    set: &WeightedSet,
    k: usize,
    objective: Objective,
    config: &BicriteriaConfig,
    seed: u64,
) -> Result<BicriteriaSolution> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if set.len() < k {
        return Err(Error::invalid(format!("{} points cannot seed {k} centers", set.len())));
    }
    if config.beta_factor < 1.0 {
        return Err(Error::invalid("beta_factor must be at least 1"));
    }
    let count = ((config.beta_factor * k as f64).ceil() as usize).min(set.len());
    let mut best: Option<BicriteriaSolution> = None;
    for rep in 0..config.repetitions.max(1) {
        let mut rng = rng::rng(seed, &[tag::BICRITERIA, rep as u64]);
        let sol = seed_once(ds, set, count, objective, &mut rng);
        if best.as_ref().is_none_or(|b| sol.cost < b.cost) {
            best = Some(sol);
        }
    }
    let mut best = best.expect("at least one repetition");
    best.nu = config.nu;
    Ok(best)
}

/// Bicriteria seeding of every point of `ds` with default repetitions and ν.
pub fn bicriteria_seed(
    ds: &Dataset,
    k: usize,
    objective: Objective,
    beta_factor: f64,
    seed: u64,
) -> Result<BicriteriaSolution> {
    let config = BicriteriaConfig {
        beta_factor,
        ..BicriteriaConfig::default()
    };
    bicriteria_seed_weighted(ds, &ds.unit_weights(), k, objective, &config, seed)
}

/// Farthest-first traversal starting from point 0; ties go to the lowest
/// index. Squaring distances for means does not change the order.
pub fn gonzalez_kcenter(ds: &Dataset, k: usize, objective: Objective) -> Vec<usize> {
    let n = ds.len();
    if n == 0 || k == 0 {
        return Vec::new();
    }
    let mut centers = vec![0usize];
    let mut dist: Vec<f64> = (0..n).map(|p| objective.cost(ds.dist(p, 0))).collect();
    let mut taken = vec![false; n];
    taken[0] = true;
    while centers.len() < k.min(n) {
        let mut far = None;
        for p in 0..n {
            if taken[p] {
                continue;
            }
            if far.is_none_or(|f: usize| dist[p] > dist[f]) {
                far = Some(p);
            }
        }
        let Some(f) = far else { break };
        taken[f] = true;
        centers.push(f);
        for p in 0..n {
            dist[p] = dist[p].min(objective.cost(ds.dist(p, f)));
        }
    }
    centers
}

/// Largest center-to-point distance of a k-center solution.
pub fn kcenter_radius(ds: &Dataset, centers: &[usize]) -> f64 {
    (0..ds.len())
        .map(|p| {
            centers
                .iter()
                .map(|&c| ds.dist(p, c))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Error parameter of the coarse coreset used by [`cost_upper_bound`].
pub const UPPER_BOUND_EPSILON: f64 = 0.5;

/// Polynomial-factor estimate of the optimal fair cost: the optimal fair
/// assignment, on a coarse coreset, to the farthest-first centers.
pub fn cost_upper_bound(
    ds: &Dataset,
    k: usize,
    spec: &FairnessSpec,
    objective: Objective,
    seed: u64,
) -> Result<f64> {
    let centers: Vec<Center> = gonzalez_kcenter(ds, k, objective)
        .into_iter()
        .map(Center::Point)
        .collect();
    let coreset = build_coreset(
        ds,
        &ds.unit_weights(),
        k,
        UPPER_BOUND_EPSILON,
        objective,
        Regime::Metric,
        &CoresetConfig::default(),
        seed,
    )?;
    let res = fair_assign_exact(ds, &coreset.set, &centers, spec, objective)?;
    Ok(res.cost)
}

/// Tunables of [`candidate_centers`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateConfig {
    /// Independent repetitions of the growth procedure.
    pub trials: usize,
    /// Pool size is `⌈c_pool / ε⌉`.
    pub c_pool: f64,
    /// Maximum number of centroid subsets taken from one pool.
    pub subset_cap: usize,
    /// Maximum number of emitted candidate sets over all trials.
    pub max_candidates: usize,
}

impl Default for CandidateConfig {
    fn default() -> Self {
        CandidateConfig {
            trials: 32,
            c_pool: 2.0,
            subset_cap: 16,
            max_candidates: 20_000,
        }
    }
}

/// Candidate `k`-center sets in `ℝ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateList {
    pub sets: Vec<Vec<Vec<f64>>>,
    pub trials: usize,
    /// Whether any trial hit the size cap and was subsampled.
    pub truncated: bool,
}

fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if c[i] < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn centroid(points: &[&[f64]]) -> Vec<f64> {
    let d = points[0].len();
    let mut c = vec![0.0; d];
    for p in points {
        for (acc, x) in c.iter_mut().zip(p.iter()) {
            *acc += x;
        }
    }
    let n = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= n);
    c
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Grows candidate center sets over `k` rounds. Each round draws a pool of
/// `⌈c_pool/ε⌉` items by `D^p`-sampling against the partial set (uniform in
/// the first round) and extends the partial set by every pooled point and,
/// for means, by centroids of pooled subsets of size `⌈1/ε⌉`.
pub fn candidate_centers(
    ds: &Dataset,
    set: &WeightedSet,
    k: usize,
    epsilon: f64,
    objective: Objective,
    config: &CandidateConfig,
    seed: u64,
) -> Result<CandidateList> {
    if !ds.metric().is_euclidean() {
        return Err(Error::invalid("candidate centers need a Euclidean metric"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid("epsilon must lie in (0, 1]"));
    }
    if set.is_empty() {
        return Err(Error::invalid("empty point set"));
    }
    let trials = config.trials.max(1);
    let per_trial = (config.max_candidates / trials).max(1);
    let pool_size = (config.c_pool / epsilon).ceil().max(1.0) as usize;
    let subset_size = (1.0 / epsilon).ceil() as usize;
    let coords: Vec<&[f64]> = set
        .iter()
        .map(|it| ds.metric().coords(it.point).expect("Euclidean"))
        .collect();
    let weights: Vec<f64> = set.iter().map(|it| it.weight as f64).collect();
    let all: Vec<usize> = (0..set.len()).collect();

    let mut out = Vec::new();
    let mut truncated = false;
    for trial in 0..trials {
        let mut rng = rng::rng(seed, &[tag::CANDIDATES, trial as u64]);
        let mut partial: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
        for _round in 0..k {
            let mut next = Vec::new();
            for current in &partial {
                let mass: Vec<f64> = if current.is_empty() {
                    weights.clone()
                } else {
                    coords
                        .iter()
                        .zip(&weights)
                        .map(|(p, w)| {
                            let d2 = current
                                .iter()
                                .map(|c| dist_sq(p, c))
                                .fold(f64::INFINITY, f64::min);
                            let d = match objective {
                                Objective::Median => d2.sqrt(),
                                Objective::Means => d2,
                            };
                            w * d
                        })
                        .collect()
                };
                let pool: Vec<usize> = (0..pool_size)
                    .filter_map(|_| sample_by_mass(&mut rng, &mass, &all))
                    .collect();
                let mut extensions: Vec<Vec<f64>> = Vec::new();
                for &i in &pool {
                    let p = coords[i].to_vec();
                    if !extensions.contains(&p) {
                        extensions.push(p);
                    }
                }
                if objective == Objective::Means && !pool.is_empty() {
                    let r = subset_size.min(pool.len());
                    if binomial(pool.len(), r) <= config.subset_cap as f64 {
                        let mut comb: Vec<usize> = (0..r).collect();
                        loop {
                            let pts: Vec<&[f64]> = comb.iter().map(|&c| coords[pool[c]]).collect();
                            extensions.push(centroid(&pts));
                            if !next_combination(&mut comb, pool.len()) {
                                break;
                            }
                        }
                    } else {
                        for _ in 0..config.subset_cap {
                            let pick = index::sample(&mut rng, pool.len(), r);
                            let pts: Vec<&[f64]> = pick.iter().map(|c| coords[pool[c]]).collect();
                            extensions.push(centroid(&pts));
                        }
                    }
                }
                for e in extensions {
                    let mut s = current.clone();
                    s.push(e);
                    next.push(s);
                }
            }
            if next.len() > per_trial {
                truncated = true;
                let keep = index::sample(&mut rng, next.len(), per_trial).into_vec();
                let mut keep_sorted = keep;
                keep_sorted.sort_unstable();
                next = keep_sorted.into_iter().map(|i| next[i].clone()).collect();
            }
            partial = next;
        }
        out.extend(partial.into_iter().filter(|s| s.len() == k));
    }
    if truncated {
        log::warn!(
            "candidate list capped at {per_trial} sets per trial ({} total)",
            out.len()
        );
    }
    Ok(CandidateList {
        sets: out,
        trials,
        truncated,
    })
}
