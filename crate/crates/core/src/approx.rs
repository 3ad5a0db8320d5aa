//! End-to-end clustering: guess-and-assign for general metrics, candidate
//! enumeration for `ℝ^d`, aspect-ratio preprocessing and the same skeletons
//! with the assignment step swapped for other constraints.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::coreset::{build_coreset, CoresetConfig, Regime};
use crate::error::{Error, Result};
use crate::flow::{
    capacitated_assign, chromatic_assign, lower_bounded_assign, nearest_assignment, Transport,
};
use crate::milp::{
    fair_assign_approx_with, fair_assign_exact_with, restore_assignment_with, split_epsilon,
    ApproxConfig, ExactConfig, FairAssignResult,
};
use crate::model::{
    clustering_cost, Assignment, Center, ConstraintMatrix, Dataset, FairnessSpec, Metric,
    Objective, WeightedSet,
};
use crate::rng::{self, tag};
use crate::seeding::{candidate_centers, cost_upper_bound, gonzalez_kcenter, CandidateConfig};

/// Default shift constant of [`reduce_aspect_ratio`].
pub const ALPHA_C: f64 = 0.01;

/// Guesses evaluated in parallel between incumbent updates.
const CHUNK: usize = 64;

/// Clips distances at `2n¹⁰D` and adds `α_c·D/n³` to every distance
/// between distinct points. `d` is in distance units; `d = 0` leaves the
/// metric unchanged.
pub fn reduce_aspect_ratio(metric: &Metric, d: f64, n: usize, alpha_c: f64) -> Metric {
    if d <= 0.0 {
        return metric.clone();
    }
    let n = n.max(1) as f64;
    Metric::Adjusted {
        base: Box::new(metric.clone()),
        clip: 2.0 * n.powi(10) * d,
        shift: alpha_c * d / n.powi(3),
    }
}

/// Converts a cost into distance units: the square root for means.
pub fn distance_scale(objective: Objective, cost: f64) -> f64 {
    match objective {
        Objective::Median => cost,
        Objective::Means => cost.sqrt(),
    }
}

/// How a solution was found.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionMeta {
    pub algorithm: &'static str,
    pub seed: u64,
    pub epsilon: f64,
    pub coreset_size: usize,
    /// Size of the raw leader/radius guess space or of the candidate list.
    pub guess_space: f64,
    /// Distinct center sets that were actually scored.
    pub center_sets: usize,
    /// Whether every distinct center set was scored.
    pub exhaustive: bool,
    /// Number of radii in the guessing grid (0 for candidate lists).
    pub grid_size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub centers: Vec<Center>,
    pub assignment: Assignment,
    pub cost: f64,
    pub meta: SolutionMeta,
}

/// Tunables of the clustering pipelines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterConfig {
    /// Distinct center sets scored before switching to uniform sampling.
    pub guess_budget: u64,
    pub alpha_c: f64,
    pub coreset: CoresetConfig,
    pub exact: ExactConfig,
    pub candidates: CandidateConfig,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            guess_budget: 1_000_000,
            alpha_c: ALPHA_C,
            coreset: CoresetConfig::default(),
            exact: ExactConfig::default(),
            candidates: CandidateConfig::default(),
        }
    }
}

/// Assignment constraint handled by [`constrained_cluster`].
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    Fair(FairnessSpec),
    LowerBound(u64),
    Capacity(u64),
    /// No group may exceed a `1/ℓ` share of any cluster.
    Diversity(usize),
    /// No cluster holds two points of the same color.
    Chromatic,
}

fn check_common(ds: &Dataset, k: usize, epsilon: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if ds.len() < k {
        return Err(Error::invalid(format!("{} points cannot form {k} clusters", ds.len())));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid("epsilon must lie in (0, 1]"));
    }
    Ok(())
}

fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Distinct centers reachable by some (leader, radius) guess: for every
/// leader and every annulus `[m(1+ε₀)^t, m(1+ε₀)^{t+1})` the lowest-index
/// candidate inside it, plus the leader itself when it is a candidate.
/// Returns the pool and the number of radii in the grid.
fn guess_pool(ds: &Dataset, leaders: &[usize], eps0: f64) -> (Vec<usize>, usize) {
    let cands = ds.candidate_centers();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &l in leaders {
        for &c in cands {
            let d = ds.dist(l, c);
            if d > 0.0 {
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
    }
    let base = (1.0 + eps0).ln();
    let grid = if lo.is_finite() {
        ((hi / lo).ln() / base).floor() as usize + 1
    } else {
        0
    };
    let mut firsts: BTreeMap<(usize, Option<usize>), usize> = BTreeMap::new();
    for &l in leaders {
        for &c in cands {
            let d = ds.dist(l, c);
            let slot = if d > 0.0 {
                Some(((d / lo).ln() / base).floor().max(0.0) as usize)
            } else {
                None
            };
            firsts
                .entry((l, slot))
                .and_modify(|best| *best = (*best).min(c))
                .or_insert(c);
        }
    }
    let pool: BTreeSet<usize> = firsts.into_values().collect();
    (pool.into_iter().collect(), grid)
}

/// k-subsets of `pool` (padded from the remaining candidates when the pool
/// is small), all of them or a uniform sample of `budget` when there are
/// more. Returns the sets and whether the enumeration was complete.
fn center_subsets(
    ds: &Dataset,
    pool: &[usize],
    k: usize,
    budget: u64,
    seed: u64,
) -> (Vec<Vec<usize>>, bool) {
    if pool.len() <= k {
        let mut set = pool.to_vec();
        for &c in ds.candidate_centers() {
            if set.len() >= k {
                break;
            }
            if !set.contains(&c) {
                set.push(c);
            }
        }
        set.sort_unstable();
        return (vec![set], true);
    }
    let total = binomial(pool.len(), k);
    if total <= budget as f64 {
        let mut out = Vec::with_capacity(total as usize);
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            out.push(comb.iter().map(|&i| pool[i]).collect());
            let mut i = k;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if comb[i] < pool.len() - k + i {
                    comb[i] += 1;
                    for j in i + 1..k {
                        comb[j] = comb[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        return (out, true);
    }
    let mut rng = rng::rng(seed, &[tag::GUESS]);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    while (out.len() as u64) < budget {
        let pick = rand::seq::index::sample(&mut rng, pool.len(), k);
        let mut set: Vec<usize> = pick.iter().map(|i| pool[i]).collect();
        set.sort_unstable();
        if seen.insert(set.clone()) {
            out.push(set);
        }
    }
    out.sort();
    (out, false)
}

fn lex_less(a: &[Center], b: &[Center]) -> bool {
    fn key(c: &Center) -> (u8, usize, &[f64]) {
        match c {
            Center::Point(p) => (0, *p, &[]),
            Center::Coords(x) => (1, 0, x.as_slice()),
        }
    }
    for (x, y) in a.iter().zip(b) {
        let (kx, ky) = (key(x), key(y));
        let ord = kx.0.cmp(&ky.0).then(kx.1.cmp(&ky.1)).then_with(|| {
            kx.2.iter()
                .zip(ky.2)
                .map(|(u, v)| u.total_cmp(v))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        if ord.is_ne() {
            return ord.is_lt();
        }
    }
    a.len() < b.len()
}

/// Scores center sets in chunks, skipping any set whose unconstrained cost
/// already exceeds the incumbent. The winner is the cheapest set, ties going
/// to the lexicographically smallest, independent of thread count.
fn best_of<T, F>(
    ds: &Dataset,
    set: &WeightedSet,
    sets: &[Vec<Center>],
    objective: Objective,
    eval: F,
) -> Result<Option<(f64, Vec<Center>, T)>>
where
    T: Send,
    F: Fn(&[Center]) -> Result<Option<(f64, T)>> + Sync,
{
    let mut best: Option<(f64, Vec<Center>, T)> = None;
    for chunk in sets.chunks(CHUNK) {
        let incumbent = best.as_ref().map_or(f64::INFINITY, |b| b.0);
        let results: Vec<Result<Option<(f64, T)>>> = chunk
            .par_iter()
            .map(|centers| {
                let lb = nearest_assignment(ds, set, centers, objective).cost;
                if lb > incumbent + 1e-9 * incumbent.abs().max(1.0) {
                    return Ok(None);
                }
                eval(centers)
            })
            .collect();
        for (centers, r) in chunk.iter().zip(results) {
            if let Some((cost, extra)) = r? {
                let better = match &best {
                    None => true,
                    Some((b, bc, _)) => cost < *b || (cost == *b && lex_less(centers, bc)),
                };
                if better {
                    best = Some((cost, centers.clone(), extra));
                }
            }
        }
    }
    Ok(best)
}

/// Scores fair assignment on a weighted set, treating infeasible center
/// sets as unusable.
fn fair_eval<'a>(
    ds: &'a Dataset,
    set: &'a WeightedSet,
    spec: &'a FairnessSpec,
    objective: Objective,
    exact: &'a ExactConfig,
) -> impl Fn(&[Center]) -> Result<Option<(f64, FairAssignResult)>> + Sync + 'a {
    move |centers| match fair_assign_exact_with(ds, set, centers, spec, objective, exact) {
        Ok(r) => Ok(Some((r.cost, r))),
        Err(Error::Infeasible(_)) => Ok(None),
        Err(Error::BudgetExceeded(msg)) => {
            log::warn!("skipping a center set: {msg}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Everything the metric guessing pipeline needs besides the assignment
/// oracle: the evaluation dataset, the coreset and the center sets.
struct MetricSearch {
    eval_ds: Dataset,
    set: WeightedSet,
    sets: Vec<Vec<Center>>,
    meta: SolutionMeta,
}

fn metric_search(
    ds: &Dataset,
    k: usize,
    epsilon: f64,
    objective: Objective,
    upper: Option<f64>,
    compress: bool,
    config: &ClusterConfig,
    seed: u64,
    algorithm: &'static str,
) -> Result<MetricSearch> {
    let eps0 = epsilon / 8.0;
    let eval_ds = match upper {
        Some(d) => ds.with_metric(reduce_aspect_ratio(
            ds.metric(),
            distance_scale(objective, d),
            ds.len(),
            config.alpha_c,
        ))?,
        None => ds.clone(),
    };
    let set = if compress {
        build_coreset(
            &eval_ds,
            &ds.unit_weights(),
            k,
            eps0,
            objective,
            Regime::Metric,
            &config.coreset,
            seed,
        )?
        .set
    } else {
        ds.unit_weights()
    };
    let leaders: Vec<usize> = set.iter().map(|it| it.point).collect();
    let (pool, grid) = guess_pool(&eval_ds, &leaders, eps0);
    let (subsets, exhaustive) = center_subsets(ds, &pool, k, config.guess_budget, seed);
    let guess_space = ((leaders.len() * (grid + 1)) as f64).powi(k as i32);
    if !exhaustive {
        log::warn!(
            "{} of {} distinct center sets sampled",
            subsets.len(),
            binomial(pool.len(), k)
        );
    }
    let sets: Vec<Vec<Center>> = subsets
        .into_iter()
        .map(|s| s.into_iter().map(Center::Point).collect())
        .collect();
    let meta = SolutionMeta {
        algorithm,
        seed,
        epsilon,
        coreset_size: set.len(),
        guess_space,
        center_sets: sets.len(),
        exhaustive,
        grid_size: grid,
    };
    Ok(MetricSearch {
        eval_ds,
        set,
        sets,
        meta,
    })
}

/// Fair clustering in a general metric: estimate the optimum, bound the
/// aspect ratio, compress to a coreset, try every distinct center set that a
/// (leader, radius) guess can produce, solve fair assignment exactly on the
/// coreset, and restore the best count matrix onto all points.
pub fn fair_cluster_metric(
    ds: &Dataset,
    k: usize,
    spec: &FairnessSpec,
    epsilon: f64,
    objective: Objective,
    seed: u64,
) -> Result<Solution> {
    fair_cluster_metric_with(ds, k, spec, epsilon, objective, &ClusterConfig::default(), seed)
}

pub fn fair_cluster_metric_with(
    ds: &Dataset,
    k: usize,
    spec: &FairnessSpec,
    epsilon: f64,
    objective: Objective,
    config: &ClusterConfig,
    seed: u64,
) -> Result<Solution> {
    check_common(ds, k, epsilon)?;
    let upper = cost_upper_bound(ds, k, spec, objective, seed)?;
    let search = metric_search(
        ds,
        k,
        epsilon,
        objective,
        Some(upper),
        true,
        config,
        seed,
        "fair-metric",
    )?;
    let eval = fair_eval(&search.eval_ds, &search.set, spec, objective, &config.exact);
    let best = best_of(&search.eval_ds, &search.set, &search.sets, objective, eval)?
        .ok_or_else(|| Error::infeasible("no candidate center set admits a fair assignment"))?;
    finish_fair(ds, best.1, spec, epsilon, objective, config, search.meta)
}

/// Final fair assignment of all points to the chosen centers, shared with
/// the fixed-center entry points so both report the same cost.
fn finish_fair(
    ds: &Dataset,
    centers: Vec<Center>,
    spec: &FairnessSpec,
    epsilon: f64,
    objective: Objective,
    config: &ClusterConfig,
    meta: SolutionMeta,
) -> Result<Solution> {
    let approx = ApproxConfig {
        coreset: config.coreset,
        exact: config.exact,
    };
    let r = fair_assign_approx_with(ds, &centers, spec, epsilon, objective, &approx, meta.seed)?;
    Ok(Solution {
        centers,
        cost: r.cost,
        assignment: r.assignment,
        meta,
    })
}

fn canonical_sets(list: Vec<Vec<Vec<f64>>>) -> Vec<Vec<Center>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mut set in list {
        set.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let key: Vec<Vec<u64>> = set.iter().map(|c| c.iter().map(|x| x.to_bits()).collect()).collect();
        if seen.insert(key) {
            out.push(set.into_iter().map(Center::Coords).collect());
        }
    }
    out
}

/// Coreset and candidate center sets for the Euclidean pipelines.
fn euclidean_search(
    ds: &Dataset,
    k: usize,
    epsilon: f64,
    objective: Objective,
    compress: bool,
    config: &ClusterConfig,
    seed: u64,
    algorithm: &'static str,
) -> Result<(WeightedSet, Vec<Vec<Center>>, SolutionMeta)> {
    if !ds.metric().is_euclidean() {
        return Err(Error::invalid("the Euclidean pipeline needs coordinates"));
    }
    let eps0 = split_epsilon(epsilon);
    let set = if compress {
        build_coreset(
            ds,
            &ds.unit_weights(),
            k,
            eps0,
            objective,
            Regime::Euclidean,
            &config.coreset,
            seed,
        )?
        .set
    } else {
        ds.unit_weights()
    };
    let list = candidate_centers(ds, &set, k, epsilon, objective, &config.candidates, seed)?;
    let raw = list.sets.len();
    let sets = canonical_sets(list.sets);
    let meta = SolutionMeta {
        algorithm,
        seed,
        epsilon,
        coreset_size: set.len(),
        guess_space: raw as f64,
        center_sets: sets.len(),
        exhaustive: !list.truncated,
        grid_size: 0,
    };
    Ok((set, sets, meta))
}

/// Fair clustering in `ℝ^d`: candidate center sets grown on a coreset, exact
/// fair assignment of the coreset to each, and the best set's count matrix
/// restored onto all points.
pub fn fair_cluster_euclidean(
    ds: &Dataset,
    k: usize,
    spec: &FairnessSpec,
    epsilon: f64,
    objective: Objective,
    seed: u64,
) -> Result<Solution> {
    fair_cluster_euclidean_with(ds, k, spec, epsilon, objective, &ClusterConfig::default(), seed)
}

pub fn fair_cluster_euclidean_with(
    ds: &Dataset,
    k: usize,
    spec: &FairnessSpec,
    epsilon: f64,
    objective: Objective,
    config: &ClusterConfig,
    seed: u64,
) -> Result<Solution> {
    check_common(ds, k, epsilon)?;
    spec.check_groups(ds)?;
    let (set, sets, meta) =
        euclidean_search(ds, k, epsilon, objective, true, config, seed, "fair-euclidean")?;
    let eval = fair_eval(ds, &set, spec, objective, &config.exact);
    let (_, centers, _) = best_of(ds, &set, &sets, objective, eval)?
        .ok_or_else(|| Error::infeasible("no candidate center set admits a fair assignment"))?;
    finish_fair(ds, centers, spec, epsilon, objective, config, meta)
}

/// A coreset of `ds` sized so that lifting a solution back costs at most a
/// `1+ε` factor, together with the lifting step.
#[derive(Clone, Debug)]
pub struct ReducedInstance<'a> {
    ds: &'a Dataset,
    pub set: WeightedSet,
    pub epsilon0: f64,
    pub objective: Objective,
}

impl ReducedInstance<'_> {
    /// Routes all points of the original instance with the class-to-center
    /// masses `g` of a solution on the reduced set.
    pub fn lift(&self, g: &ConstraintMatrix, centers: &[Center]) -> Result<Transport> {
        restore_assignment_with(
            self.ds,
            &self.ds.unit_weights(),
            g,
            centers,
            3.0 * self.epsilon0,
            self.objective,
            None,
        )
    }
}

/// Compresses a Euclidean instance for `k` centers; see [`ReducedInstance`].
pub fn reduce_instance<'a>(
    ds: &'a Dataset,
    k: usize,
    epsilon: f64,
    objective: Objective,
    config: &CoresetConfig,
    seed: u64,
) -> Result<ReducedInstance<'a>> {
    if !ds.metric().is_euclidean() {
        return Err(Error::invalid("instance reduction needs coordinates"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid("epsilon must lie in (0, 1]"));
    }
    let epsilon0 = split_epsilon(epsilon);
    let c = build_coreset(
        ds,
        &ds.unit_weights(),
        k,
        epsilon0,
        objective,
        Regime::Euclidean,
        config,
        seed,
    )?;
    Ok(ReducedInstance {
        ds,
        set: c.set,
        epsilon0,
        objective,
    })
}

/// Assignment oracle of a flow-shaped constraint.
fn variant_assign(
    ds: &Dataset,
    set: &WeightedSet,
    centers: &[Center],
    constraint: &Constraint,
    objective: Objective,
) -> Result<Transport> {
    match constraint {
        Constraint::LowerBound(l) => lower_bounded_assign(ds, set, centers, *l, objective),
        Constraint::Capacity(u) => capacitated_assign(ds, set, centers, *u, objective),
        Constraint::Chromatic => chromatic_assign(ds, set, centers, objective),
        Constraint::Fair(_) | Constraint::Diversity(_) => {
            unreachable!("fairness constraints use the exact assignment solver")
        }
    }
}

fn variant_eval<'a>(
    ds: &'a Dataset,
    set: &'a WeightedSet,
    constraint: &'a Constraint,
    objective: Objective,
) -> impl Fn(&[Center]) -> Result<Option<(f64, ())>> + Sync + 'a {
    move |centers| match variant_assign(ds, set, centers, constraint, objective) {
        Ok(t) => Ok(Some((t.cost, ()))),
        Err(Error::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn variant_feasible(ds: &Dataset, k: usize, constraint: &Constraint) -> Result<()> {
    let n = ds.len() as u64;
    let k64 = k as u64;
    match constraint {
        Constraint::LowerBound(l) if n < k64 * l => Err(Error::infeasible(format!(
            "{n} points cannot fill {k} clusters of at least {l}"
        ))),
        Constraint::Capacity(u) if n > k64 * u => Err(Error::infeasible(format!(
            "{n} points exceed {k} clusters of capacity {u}"
        ))),
        Constraint::Chromatic => {
            if !ds.groups_disjoint() {
                return Err(Error::invalid("chromatic clustering needs one color per point"));
            }
            let mut per_color = vec![0usize; ds.num_groups()];
            for p in 0..ds.len() {
                per_color[ds.groups_of(p)[0]] += 1;
            }
            match per_color.iter().position(|&c| c > k) {
                Some(c) => Err(Error::infeasible(format!("color {c} has more than {k} points"))),
                None => Ok(()),
            }
        }
        _ => Ok(()),
    }
}

/// Clustering under a size, diversity, chromatic or fairness constraint.
///
/// Fairness and diversity run the fair pipelines. Lower bounds and
/// capacities use the same guessing (metric) or candidate (Euclidean)
/// skeleton with a flow-based assignment on the coreset, and assign all
/// points by flow for the winning centers. Chromatic clustering works on
/// the points themselves over the raw distances.
#[allow(clippy::too_many_arguments)]
pub fn constrained_cluster(
    ds: &Dataset,
    k: usize,
    epsilon: f64,
    objective: Objective,
    constraint: &Constraint,
    regime: Regime,
    config: &ClusterConfig,
    seed: u64,
) -> Result<Solution> {
    check_common(ds, k, epsilon)?;
    let spec = match constraint {
        Constraint::Fair(spec) => Some(spec.clone()),
        Constraint::Diversity(l) => Some(FairnessSpec::diversity(ds.num_groups(), *l as i64)?),
        _ => None,
    };
    if let Some(spec) = spec {
        return match regime {
            Regime::Metric => fair_cluster_metric_with(ds, k, &spec, epsilon, objective, config, seed),
            Regime::Euclidean => {
                fair_cluster_euclidean_with(ds, k, &spec, epsilon, objective, config, seed)
            }
        };
    }
    variant_feasible(ds, k, constraint)?;
    let chromatic = matches!(constraint, Constraint::Chromatic);
    let name = match constraint {
        Constraint::LowerBound(_) => "lower-bounded",
        Constraint::Capacity(_) => "capacitated",
        _ => "chromatic",
    };
    let (eval_ds, set, sets, meta) = match regime {
        Regime::Metric => {
            let upper = if chromatic {
                None
            } else {
                let g: Vec<Center> = gonzalez_kcenter(ds, k, objective)
                    .into_iter()
                    .map(Center::Point)
                    .collect();
                Some(variant_assign(ds, &ds.unit_weights(), &g, constraint, objective)?.cost)
            };
            let s = metric_search(ds, k, epsilon, objective, upper, !chromatic, config, seed, name)?;
            (s.eval_ds, s.set, s.sets, s.meta)
        }
        Regime::Euclidean => {
            let (set, sets, meta) =
                euclidean_search(ds, k, epsilon, objective, !chromatic, config, seed, name)?;
            (ds.clone(), set, sets, meta)
        }
    };
    let eval = variant_eval(&eval_ds, &set, constraint, objective);
    let (_, centers, ()) = best_of(&eval_ds, &set, &sets, objective, eval)?
        .ok_or_else(|| Error::infeasible("no candidate center set satisfies the constraint"))?;
    let full = variant_assign(ds, &ds.unit_weights(), &centers, constraint, objective)?;
    Ok(Solution {
        centers,
        cost: full.cost,
        assignment: full.assignment,
        meta,
    })
}

/// Assignment of all points to fixed centers under `constraint`. Fairness
/// constraints go through [`fair_assign_approx_with`] with the same
/// parameters the clustering pipelines finish with, so feeding back the
/// centers of a [`constrained_cluster`] run with the same seed reproduces its
/// cost. The other constraints are solved exactly by flow.
pub fn constrained_assign(
    ds: &Dataset,
    centers: &[Center],
    constraint: &Constraint,
    epsilon: f64,
    objective: Objective,
    config: &ClusterConfig,
    seed: u64,
) -> Result<Transport> {
    if centers.is_empty() {
        return Err(Error::invalid("no centers given"));
    }
    for c in centers {
        ds.metric().check_center(c)?;
    }
    let spec = match constraint {
        Constraint::Fair(spec) => spec.clone(),
        Constraint::Diversity(l) => FairnessSpec::diversity(ds.num_groups(), *l as i64)?,
        other => {
            variant_feasible(ds, centers.len(), other)?;
            return variant_assign(ds, &ds.unit_weights(), centers, other, objective);
        }
    };
    let approx = ApproxConfig {
        coreset: config.coreset,
        exact: config.exact,
    };
    let r = fair_assign_approx_with(ds, centers, &spec, epsilon, objective, &approx, seed)?;
    Ok(Transport {
        assignment: r.assignment,
        cost: r.cost,
    })
}

/// Cost of a solution's assignment recomputed from scratch.
pub fn solution_cost(ds: &Dataset, sol: &Solution) -> f64 {
    clustering_cost(ds, &sol.assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fairness_check;

    fn bicolor(xs: &[(f64, usize)]) -> Dataset {
        let metric = Metric::euclidean(xs.iter().map(|&(x, _)| vec![x]).collect()).unwrap();
        Dataset::new(metric, xs.iter().map(|&(_, g)| vec![g]).collect()).unwrap()
    }

    #[test]
    fn aspect_ratio_clip_and_shift() {
        let m = Metric::matrix(vec![vec![0.0, 0.0], vec![0.0, 0.0]], true).unwrap();
        let adj = reduce_aspect_ratio(&m, 1.0, 2, 0.01);
        assert!((adj.dist(0, 1) - 0.01 / 8.0).abs() < 1e-15);
        assert_eq!(adj.dist(1, 1), 0.0);
        let far = Metric::matrix(vec![vec![0.0, 3e10], vec![3e10, 0.0]], true).unwrap();
        let adj = reduce_aspect_ratio(&far, 10.0, 2, 0.01);
        let clip = 2.0 * 1024.0 * 10.0;
        assert!((adj.dist(0, 1) - (clip + 0.1 / 8.0)).abs() < 1e-9);
        assert_eq!(reduce_aspect_ratio(&far, 0.0, 2, 0.01), far);
    }

    #[test]
    fn metric_pipeline_is_fair() {
        let ds = bicolor(&[(0.0, 0), (1.0, 1), (2.0, 0), (10.0, 1), (11.0, 0), (12.0, 1)]);
        let spec = FairnessSpec::from_f64(&[0.7, 0.7], &[0.3, 0.3]).unwrap();
        let sol = fair_cluster_metric(&ds, 2, &spec, 0.5, Objective::Median, 3).unwrap();
        assert!(fairness_check(&sol.assignment, &ds, &spec).is_empty());
        assert!((sol.cost - solution_cost(&ds, &sol)).abs() < 1e-9);
        assert!(sol.meta.exhaustive);
        // Natural clusters {0,1,2} and {10,11,12} centered at 1 and 11.
        assert!((sol.cost - 4.0).abs() < 1e-9, "cost {}", sol.cost);
    }

    #[test]
    fn singletons_cost_nothing() {
        let ds = bicolor(&[(0.0, 0), (5.0, 0)]);
        let spec = FairnessSpec::unconstrained(1);
        let sol = fair_cluster_euclidean(&ds, 2, &spec, 0.5, Objective::Means, 1).unwrap();
        assert_eq!(sol.cost, 0.0);
    }

    #[test]
    fn capacity_n_is_plain_clustering() {
        let ds = bicolor(&[(0.0, 0), (1.0, 0), (5.0, 0), (6.0, 0)]);
        let cfg = ClusterConfig::default();
        let sol = constrained_cluster(
            &ds,
            2,
            0.5,
            Objective::Median,
            &Constraint::Capacity(4),
            Regime::Metric,
            &cfg,
            0,
        )
        .unwrap();
        assert!((sol.cost - 2.0).abs() < 1e-9);
    }

    #[test]
    fn chromatic_too_many_of_a_color() {
        let ds = bicolor(&[(0.0, 0), (1.0, 0), (5.0, 0)]);
        let err = constrained_cluster(
            &ds,
            2,
            0.5,
            Objective::Median,
            &Constraint::Chromatic,
            Regime::Metric,
            &ClusterConfig::default(),
            0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
    }

    #[test]
    fn subsets_enumerate_or_sample() {
        let ds = bicolor(&[(0.0, 0), (1.0, 0), (2.0, 0), (3.0, 0), (4.0, 0)]);
        let (all, ex) = center_subsets(&ds, &[0, 1, 2, 3, 4], 2, 100, 0);
        assert!(ex);
        assert_eq!(all.len(), 10);
        let (some, ex) = center_subsets(&ds, &[0, 1, 2, 3, 4], 2, 4, 0);
        assert!(!ex);
        assert_eq!(some.len(), 4);
        let (padded, _) = center_subsets(&ds, &[3], 2, 4, 0);
        assert_eq!(padded, vec![vec![0, 3]]);
    }
}
