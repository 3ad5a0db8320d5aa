//! Brute-force reference solvers for tiny instances. Everything here
//! enumerates assignments label by label and is meant to be obviously
//! correct rather than fast.

use crate::approx::Constraint;
use crate::error::{Error, Result};
use crate::flow::class_transport;
use crate::model::{
    fairness_check, Assignment, Center, ConstraintMatrix, Dataset, FairnessSpec, Metric,
    Objective, WeightedPoint, WeightedSet,
};

/// Instance limits beyond which the oracle refuses to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_points: usize,
    pub max_k: usize,
    /// Largest center pool searched.
    pub max_candidates: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_points: 8,
            max_k: 3,
            max_candidates: 16,
        }
    }
}

impl OracleBudget {
    fn check(&self, n: usize, k: usize, pool: usize) -> Result<()> {
        if n > self.max_points || k > self.max_k || pool > self.max_candidates {
            return Err(Error::BudgetExceeded(format!(
                "oracle limited to {} points, k ≤ {} and {} candidates (got {n}, {k}, {pool})",
                self.max_points, self.max_k, self.max_candidates
            )));
        }
        Ok(())
    }
}

/// Optimal solution found by enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution {
    pub centers: Vec<Center>,
    pub assignment: Assignment,
    pub cost: f64,
}

/// All `k^n` label vectors in lexicographic order.
pub fn labelings(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if k == 0 && n > 0 { None } else { Some(vec![0; n]) };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = n;
        while i > 0 {
            i -= 1;
            if succ[i] + 1 < k {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    })
}

/// All `r`-subsets of `items` in lexicographic order.
pub fn subsets<T: Clone>(items: &[T], r: usize) -> Vec<Vec<T>> {
    let n = items.len();
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut comb: Vec<usize> = (0..r).collect();
    loop {
        out.push(comb.iter().map(|&i| items[i].clone()).collect());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if comb[i] < n - r + i {
                comb[i] += 1;
                for j in i + 1..r {
                    comb[j] = comb[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn labels_to_assignment(labels: &[usize], centers: &[Center], objective: Objective) -> Assignment {
    let mut a = Assignment::new(centers.to_vec(), objective);
    for (p, &j) in labels.iter().enumerate() {
        a.add(p, j, 1);
    }
    a
}

fn labels_cost(ds: &Dataset, labels: &[usize], centers: &[Center], objective: Objective) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(p, &j)| objective.cost(ds.dist_to(p, &centers[j])))
        .sum()
}

/// Cheapest transport of `set` with class `t` sending exactly `m[j][t]` to
/// center `j`; infinite when the counts do not match the class weights.
pub fn exact_constrained_cost(
    ds: &Dataset,
    set: &WeightedSet,
    m: &ConstraintMatrix,
    centers: &[Center],
    objective: Objective,
) -> f64 {
    if m.k() != centers.len() || m.num_classes() != ds.num_classes() {
        return f64::INFINITY;
    }
    let mut total = 0.0;
    for t in 0..ds.num_classes() {
        let members: Vec<WeightedPoint> = set.class_items(t).copied().collect();
        let demand = m.column(t);
        let supply: u64 = members.iter().map(|it| it.weight).sum();
        if supply != demand.iter().sum::<u64>() {
            return f64::INFINITY;
        }
        if members.is_empty() {
            continue;
        }
        match class_transport(ds, &members, centers, &demand, objective, None) {
            Ok(tr) => total += tr.cost,
            Err(_) => return f64::INFINITY,
        }
    }
    total
}

/// [`exact_constrained_cost`] over all points of `ds`, by enumeration.
pub fn exact_constrained_cost_enum(
    ds: &Dataset,
    m: &ConstraintMatrix,
    centers: &[Center],
    objective: Objective,
    budget: &OracleBudget,
) -> Result<f64> {
    budget.check(ds.len(), centers.len(), centers.len())?;
    let mut best = f64::INFINITY;
    for labels in labelings(ds.len(), centers.len()) {
        let asg = labels_to_assignment(&labels, centers, objective);
        if crate::model::constraint_matrix_of(&asg, ds) == *m {
            best = best.min(labels_cost(ds, &labels, centers, objective));
        }
    }
    Ok(best)
}

/// Whether a complete unit assignment given by labels meets a constraint.
pub fn satisfies(ds: &Dataset, labels: &[usize], k: usize, constraint: &Constraint) -> bool {
    let mut sizes = vec![0u64; k];
    for &j in labels {
        sizes[j] += 1;
    }
    match constraint {
        Constraint::LowerBound(l) => sizes.iter().all(|&s| s >= *l),
        Constraint::Capacity(u) => sizes.iter().all(|&s| s <= *u),
        Constraint::Chromatic => {
            let mut seen = vec![vec![false; ds.num_groups()]; k];
            for (p, &j) in labels.iter().enumerate() {
                for &g in ds.groups_of(p) {
                    if seen[j][g] {
                        return false;
                    }
                    seen[j][g] = true;
                }
            }
            true
        }
        Constraint::Fair(spec) => fair_labels(ds, labels, k, spec),
        Constraint::Diversity(l) => match FairnessSpec::diversity(ds.num_groups(), *l as i64) {
            Ok(spec) => fair_labels(ds, labels, k, &spec),
            Err(_) => false,
        },
    }
}

fn fair_labels(ds: &Dataset, labels: &[usize], k: usize, spec: &FairnessSpec) -> bool {
    let centers: Vec<Center> = (0..k).map(Center::Point).collect();
    let asg = labels_to_assignment(labels, &centers, Objective::Median);
    fairness_check(&asg, ds, spec).is_empty()
}

/// Cheapest assignment of all points to fixed centers meeting `constraint`.
pub fn exact_variant_assignment(
    ds: &Dataset,
    centers: &[Center],
    constraint: &Constraint,
    objective: Objective,
    budget: &OracleBudget,
) -> Result<OracleSolution> {
    budget.check(ds.len(), centers.len(), centers.len())?;
    let k = centers.len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for labels in labelings(ds.len(), k) {
        if !satisfies(ds, &labels, k, constraint) {
            continue;
        }
        let cost = labels_cost(ds, &labels, centers, objective);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, labels));
        }
    }
    let (cost, labels) = best.ok_or_else(|| Error::infeasible("no assignment meets the constraint"))?;
    Ok(OracleSolution {
        centers: centers.to_vec(),
        assignment: labels_to_assignment(&labels, centers, objective),
        cost,
    })
}

/// Cheapest fair assignment of all points to fixed centers.
pub fn exact_fair_assignment(
    ds: &Dataset,
    centers: &[Center],
    spec: &FairnessSpec,
    objective: Objective,
    budget: &OracleBudget,
) -> Result<OracleSolution> {
    exact_variant_assignment(ds, centers, &Constraint::Fair(spec.clone()), objective, budget)
}

/// Best k centers from `pool` (all points when `None`) together with the
/// cheapest assignment meeting `constraint`.
pub fn exact_variant_optimum(
    ds: &Dataset,
    k: usize,
    constraint: &Constraint,
    objective: Objective,
    pool: Option<&[usize]>,
    budget: &OracleBudget,
) -> Result<OracleSolution> {
    let pool: Vec<usize> = pool.map_or_else(|| ds.candidate_centers().to_vec(), <[usize]>::to_vec);
    budget.check(ds.len(), k, pool.len())?;
    if k == 0 || pool.len() < k {
        return Err(Error::invalid("the pool holds fewer than k centers"));
    }
    let feasible: Vec<Vec<usize>> = labelings(ds.len(), k)
        .filter(|labels| satisfies(ds, labels, k, constraint))
        .collect();
    if feasible.is_empty() {
        return Err(Error::infeasible("no assignment meets the constraint"));
    }
    let mut best: Option<(f64, Vec<Center>, usize)> = None;
    for subset in subsets(&pool, k) {
        let centers: Vec<Center> = subset.into_iter().map(Center::Point).collect();
        // Point-to-center costs once per subset.
        let costs: Vec<Vec<f64>> = (0..ds.len())
            .map(|p| centers.iter().map(|c| objective.cost(ds.dist_to(p, c))).collect())
            .collect();
        for (i, labels) in feasible.iter().enumerate() {
            let cost: f64 = labels.iter().enumerate().map(|(p, &j)| costs[p][j]).sum();
            if best.as_ref().is_none_or(|(b, ..)| cost < *b) {
                best = Some((cost, centers.clone(), i));
            }
        }
    }
    let (cost, centers, i) = best.expect("non-empty pool and feasible set");
    Ok(OracleSolution {
        assignment: labels_to_assignment(&feasible[i], &centers, objective),
        centers,
        cost,
    })
}

/// Best fair clustering with centers from `pool` (all points when `None`).
pub fn exact_fair_optimum(
    ds: &Dataset,
    k: usize,
    spec: &FairnessSpec,
    objective: Objective,
    pool: Option<&[usize]>,
    budget: &OracleBudget,
) -> Result<OracleSolution> {
    exact_variant_optimum(ds, k, &Constraint::Fair(spec.clone()), objective, pool, budget)
}

/// Best fair k-means clustering with unrestricted centers in `ℝ^d`: every
/// fair partition scored with its cluster means.
pub fn exact_fair_means(
    ds: &Dataset,
    k: usize,
    spec: &FairnessSpec,
    budget: &OracleBudget,
) -> Result<OracleSolution> {
    let Metric::Euclidean { coords, dim } = ds.metric() else {
        return Err(Error::invalid("continuous centers need coordinates"));
    };
    budget.check(ds.len(), k, 0)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for labels in labelings(ds.len(), k) {
        // Skip relabelings: first occurrences of labels must be increasing.
        let mut next = 0;
        let canonical = labels.iter().all(|&j| {
            if j == next {
                next += 1;
            }
            j < next
        });
        if !canonical || !fair_labels(ds, &labels, k, spec) {
            continue;
        }
        let cost = crate::sketch::partition_cost(coords, &labels, k);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, labels));
        }
    }
    let (cost, labels) = best.ok_or_else(|| Error::infeasible("no fair partition exists"))?;
    let mut sums = vec![vec![0.0; *dim]; k];
    let mut counts = vec![0.0; k];
    for (p, &j) in labels.iter().enumerate() {
        counts[j] += 1.0;
        for (s, x) in sums[j].iter_mut().zip(&coords[p]) {
            *s += x;
        }
    }
    let centers: Vec<Center> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| Center::Coords(s.into_iter().map(|x| if c > 0.0 { x / c } else { 0.0 }).collect()))
        .collect();
    Ok(OracleSolution {
        assignment: labels_to_assignment(&labels, &centers, Objective::Means),
        centers,
        cost,
    })
}
