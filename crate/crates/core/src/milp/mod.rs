//! Exact fair assignment by branch-and-bound over the per-class cluster
//! counts, plus restoring a count matrix onto the full point set and the
//! coreset-based approximate assignment built from both.

mod simplex;

pub use simplex::{simplex_solve, LinearProgram, LpOutcome, Row, RowKind};

use crate::coreset::{build_coreset, CoresetConfig, Regime};
use crate::error::{Error, Result};
use crate::flow::{class_transport, nearest_assignment, CostRounding, Transport};
use crate::model::{
    clustering_cost, constraint_matrix_of, fairness_check, matrix_violations, Assignment, Center,
    ConstraintMatrix, Dataset, FairnessSpec, Objective, WeightedPoint, WeightedSet,
};

/// Search limits of [`fair_assign_exact_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    /// Branch-and-bound nodes explored before giving up.
    pub node_limit: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            node_limit: 100_000,
        }
    }
}

/// Optimal fair assignment of a weighted set to fixed centers.
#[derive(Clone, Debug, PartialEq)]
pub struct FairAssignResult {
    /// Mass of class `t` sent to center `j`, as `g[j][t]`.
    pub g: ConstraintMatrix,
    pub assignment: Assignment,
    pub cost: f64,
    /// Transport cost of each class on its own.
    pub class_costs: Vec<f64>,
    /// Branch-and-bound nodes solved (0 when no search was needed).
    pub nodes: usize,
    /// Value of the root relaxation (the unconstrained cost when skipped).
    pub root_bound: f64,
}

fn per_class_costs(ds: &Dataset, asg: &Assignment) -> Vec<f64> {
    let mut out = vec![0.0; ds.num_classes()];
    for (p, j, w) in asg.triples() {
        out[ds.class_of(p)] += w as f64 * asg.objective.cost(ds.dist_to(p, &asg.centers[j]));
    }
    out
}

fn check_inputs(ds: &Dataset, set: &WeightedSet, centers: &[Center]) -> Result<()> {
    if centers.is_empty() {
        return Err(Error::invalid("no centers"));
    }
    for c in centers {
        ds.metric().check_center(c)?;
    }
    for it in set.iter() {
        if it.point >= ds.len() {
            return Err(Error::invalid(format!("item refers to unknown point {}", it.point)));
        }
        if it.class != ds.class_of(it.point) {
            return Err(Error::invalid(format!("item {} carries the wrong class", it.point)));
        }
        if it.weight == 0 {
            return Err(Error::invalid("zero-weight item"));
        }
    }
    Ok(())
}

struct Problem<'a> {
    ds: &'a Dataset,
    items: &'a [WeightedPoint],
    centers: &'a [Center],
    objective: Objective,
    base: LinearProgram,
    k: usize,
    classes: usize,
}

/// Branching restriction `lo ≤ g[j][t] ≤ hi`.
#[derive(Clone, Copy, Debug)]
struct Bound {
    t: usize,
    j: usize,
    lo: u64,
    hi: Option<u64>,
}

impl<'a> Problem<'a> {
    fn new(
        ds: &'a Dataset,
        set: &'a WeightedSet,
        centers: &'a [Center],
        spec: &'a FairnessSpec,
        objective: Objective,
    ) -> Self {
        let items = &set.items[..];
        let k = centers.len();
        let mut lp = LinearProgram::new(items.len() * k);
        for (i, it) in items.iter().enumerate() {
            for (j, c) in centers.iter().enumerate() {
                lp.objective[i * k + j] = objective.cost(ds.dist_to(it.point, c));
            }
            let coeffs = (0..k).map(|j| (i * k + j, 1.0)).collect();
            lp.push(Row::new(coeffs, RowKind::Eq, it.weight as f64));
        }
        for q in 0..spec.num_groups() {
            if spec.is_vacuous(q) {
                continue;
            }
            let (alpha, beta) = (spec.alpha_f64(q), spec.beta_f64(q));
            let member: Vec<f64> = items
                .iter()
                .map(|it| f64::from(u8::from(ds.class_groups()[it.class].contains(&q))))
                .collect();
            for j in 0..k {
                if alpha < 1.0 {
                    let coeffs = member
                        .iter()
                        .enumerate()
                        .map(|(i, &m)| (i * k + j, m - alpha))
                        .filter(|&(_, c)| c != 0.0)
                        .collect();
                    lp.push(Row::new(coeffs, RowKind::Le, 0.0));
                }
                if beta > 0.0 {
                    let coeffs = member
                        .iter()
                        .enumerate()
                        .map(|(i, &m)| (i * k + j, beta - m))
                        .filter(|&(_, c)| c != 0.0)
                        .collect();
                    lp.push(Row::new(coeffs, RowKind::Le, 0.0));
                }
            }
        }
        Problem {
            ds,
            items,
            centers,
            objective,
            base: lp,
            k,
            classes: ds.num_classes(),
        }
    }

    fn class_sum(&self, t: usize, j: usize) -> Vec<(usize, f64)> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, it)| it.class == t)
            .map(|(i, _)| (i * self.k + j, 1.0))
            .collect()
    }

    fn relax(&self, bounds: &[Bound]) -> Result<Option<(f64, Vec<Vec<f64>>)>> {
        let mut lp = self.base.clone();
        for b in bounds {
            let coeffs = self.class_sum(b.t, b.j);
            if b.lo > 0 {
                lp.push(Row::new(coeffs.clone(), RowKind::Ge, b.lo as f64));
            }
            if let Some(hi) = b.hi {
                lp.push(Row::new(coeffs, RowKind::Le, hi as f64));
            }
        }
        match simplex_solve(&lp)? {
            LpOutcome::Optimal { x, value } => {
                let mut g = vec![vec![0.0; self.classes]; self.k];
                for (i, it) in self.items.iter().enumerate() {
                    for (j, row) in g.iter_mut().enumerate() {
                        row[it.class] += x[i * self.k + j];
                    }
                }
                Ok(Some((value, g)))
            }
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(Error::invalid("assignment relaxation is unbounded")),
        }
    }

    /// Optimal transport of every class under integral counts `g`.
    fn realize(&self, g: &ConstraintMatrix) -> Result<(Assignment, Vec<f64>)> {
        let mut asg = Assignment::new(self.centers.to_vec(), self.objective);
        let mut costs = vec![0.0; self.classes];
        for (t, cost) in costs.iter_mut().enumerate() {
            let members: Vec<WeightedPoint> =
                self.items.iter().filter(|it| it.class == t).copied().collect();
            if members.is_empty() {
                continue;
            }
            let tr = class_transport(self.ds, &members, self.centers, &g.column(t), self.objective, None)?;
            *cost = tr.cost;
            asg.merge(&tr.assignment);
        }
        Ok((asg, costs))
    }
}

/// Optimal fair assignment of `set` to `centers`; see
/// [`fair_assign_exact_with`].
pub fn fair_assign_exact(
    ds: &Dataset,
    set: &WeightedSet,
    centers: &[Center],
    spec: &FairnessSpec,
    objective: Objective,
) -> Result<FairAssignResult> {
    fair_assign_exact_with(ds, set, centers, spec, objective, &ExactConfig::default())
}

/// Optimal fair assignment of a weighted set to fixed centers.
///
/// The relaxation routes every item's weight fractionally with the fairness
/// rows written over cluster compositions. Branching happens on the most
/// fractional class-to-center mass `g[j][t]`, floor child first; once all of
/// `g` is integral each class is routed by an integral min-cost transport.
/// Returns [`Error::Infeasible`] when no fair assignment exists and
/// [`Error::BudgetExceeded`] when the node limit is hit.
pub fn fair_assign_exact_with(
    ds: &Dataset,
    set: &WeightedSet,
    centers: &[Center],
    spec: &FairnessSpec,
    objective: Objective,
    config: &ExactConfig,
) -> Result<FairAssignResult> {
    spec.check_groups(ds)?;
    check_inputs(ds, set, centers)?;
    if set.is_empty() {
        return Err(Error::invalid("empty point set"));
    }
    let nearest = nearest_assignment(ds, set, centers, objective);
    if fairness_check(&nearest.assignment, ds, spec).is_empty() {
        let g = constraint_matrix_of(&nearest.assignment, ds);
        let class_costs = per_class_costs(ds, &nearest.assignment);
        return Ok(FairAssignResult {
            g,
            cost: nearest.cost,
            assignment: nearest.assignment,
            class_costs,
            nodes: 0,
            root_bound: nearest.cost,
        });
    }

    let problem = Problem::new(ds, set, centers, spec, objective);
    let mut best: Option<(f64, ConstraintMatrix, Assignment, Vec<f64>)> = None;
    let mut stack: Vec<Vec<Bound>> = vec![Vec::new()];
    let mut nodes = 0usize;
    let mut root_bound = f64::NAN;
    while let Some(bounds) = stack.pop() {
        if nodes >= config.node_limit {
            return Err(Error::BudgetExceeded(format!(
                "fair assignment search stopped after {nodes} nodes"
            )));
        }
        nodes += 1;
        let Some((value, g)) = problem.relax(&bounds)? else { continue };
        if nodes == 1 {
            root_bound = value;
        }
        if let Some((inc, ..)) = &best {
            if value >= inc - 1e-9 * inc.abs().max(1.0) {
                continue;
            }
        }
        let mut pick: Option<(usize, usize, f64)> = None;
        for t in 0..problem.classes {
            for (j, row) in g.iter().enumerate() {
                let x = row[t];
                let frac = x - x.floor();
                if frac > 1e-6 && frac < 1.0 - 1e-6 {
                    let score = (frac - 0.5).abs();
                    if pick.is_none_or(|(_, _, s)| score < s - 1e-12) {
                        pick = Some((t, j, score));
                    }
                }
            }
        }
        match pick {
            None => {
                let rows = g
                    .iter()
                    .map(|row| row.iter().map(|x| x.round().max(0.0) as u64).collect())
                    .collect();
                let g = ConstraintMatrix::from_rows(rows)?;
                if !matrix_violations(&g, ds.class_groups(), spec).is_empty() {
                    continue;
                }
                let (asg, class_costs) = problem.realize(&g)?;
                let cost: f64 = class_costs.iter().sum();
                if best.as_ref().is_none_or(|(inc, ..)| cost < *inc) {
                    best = Some((cost, g, asg, class_costs));
                }
            }
            Some((t, j, _)) => {
                let x = g[j][t];
                let mut up = bounds.clone();
                up.push(Bound {
                    t,
                    j,
                    lo: x.ceil() as u64,
                    hi: None,
                });
                let mut down = bounds;
                down.push(Bound {
                    t,
                    j,
                    lo: 0,
                    hi: Some(x.floor() as u64),
                });
                stack.push(up);
                stack.push(down);
            }
        }
    }
    match best {
        Some((cost, g, assignment, class_costs)) => Ok(FairAssignResult {
            g,
            assignment,
            cost,
            class_costs,
            nodes,
            root_bound,
        }),
        None => Err(Error::infeasible("no fair assignment to these centers exists")),
    }
}

/// Routes every class of `ds` to the centers with the class-to-center masses
/// prescribed by `g`, solving each class on costs rounded with `ε/6`.
pub fn restore_assignment(
    ds: &Dataset,
    g: &ConstraintMatrix,
    centers: &[Center],
    epsilon: f64,
    objective: Objective,
) -> Result<Transport> {
    restore_assignment_with(ds, &ds.unit_weights(), g, centers, epsilon, objective, None)
}

/// As [`restore_assignment`] for a weighted subset. The rounding budget of
/// class `t` is `budgets[t]` when given, otherwise its exact transport cost.
pub fn restore_assignment_with(
    ds: &Dataset,
    set: &WeightedSet,
    g: &ConstraintMatrix,
    centers: &[Center],
    epsilon: f64,
    objective: Objective,
    budgets: Option<&[f64]>,
) -> Result<Transport> {
    check_inputs(ds, set, centers)?;
    let classes = ds.num_classes();
    if g.k() != centers.len() || g.num_classes() != classes {
        return Err(Error::invalid("count matrix shape does not match centers and classes"));
    }
    if budgets.is_some_and(|b| b.len() != classes) {
        return Err(Error::invalid("one budget per class expected"));
    }
    let weights = set.class_weights(classes);
    for (t, &w) in weights.iter().enumerate() {
        if g.column_sum(t) != w {
            return Err(Error::invalid(format!(
                "class {t} has weight {w} but the matrix routes {}",
                g.column_sum(t)
            )));
        }
    }
    let epsilon0 = epsilon / 6.0;
    let mut asg = Assignment::new(centers.to_vec(), objective);
    for t in 0..classes {
        let members: Vec<WeightedPoint> = set.class_items(t).copied().collect();
        if members.is_empty() {
            continue;
        }
        let demand = g.column(t);
        let budget = match budgets {
            Some(b) => b[t],
            None => class_transport(ds, &members, centers, &demand, objective, None)?.cost,
        };
        let rounding = CostRounding {
            epsilon0,
            budget,
            units: weights[t],
        };
        let tr = class_transport(ds, &members, centers, &demand, objective, Some(rounding))?;
        asg.merge(&tr.assignment);
    }
    let cost = clustering_cost(ds, &asg);
    Ok(Transport {
        assignment: asg,
        cost,
    })
}

/// Largest `ε₀` with `(1+3ε₀)(1+ε₀) ≤ 1+ε`.
pub fn split_epsilon(epsilon: f64) -> f64 {
    ((16.0 + 12.0 * epsilon).sqrt() - 4.0) / 6.0
}

/// Tunables of [`fair_assign_approx_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ApproxConfig {
    pub coreset: CoresetConfig,
    pub exact: ExactConfig,
}

/// Near-optimal fair assignment of all of `ds`: solve exactly on a coreset
/// and restore its class-to-center masses onto the points.
pub fn fair_assign_approx(
    ds: &Dataset,
    centers: &[Center],
    spec: &FairnessSpec,
    epsilon: f64,
    objective: Objective,
    seed: u64,
) -> Result<FairAssignResult> {
    fair_assign_approx_with(ds, centers, spec, epsilon, objective, &ApproxConfig::default(), seed)
}

pub fn fair_assign_approx_with(
    ds: &Dataset,
    centers: &[Center],
    spec: &FairnessSpec,
    epsilon: f64,
    objective: Objective,
    config: &ApproxConfig,
    seed: u64,
) -> Result<FairAssignResult> {
    let eps0 = split_epsilon(epsilon);
    let all = ds.unit_weights();
    let coreset = build_coreset(
        ds,
        &all,
        centers.len(),
        eps0.min(1.0),
        objective,
        Regime::Metric,
        &config.coreset,
        seed,
    )?;
    let on_w = fair_assign_exact_with(ds, &coreset.set, centers, spec, objective, &config.exact)?;
    lift_counts(ds, &all, &on_w, centers, 3.0 * eps0, objective)
}

/// Restores a count matrix computed on a coreset onto the full set. The
/// coreset preserves every class weight, so `g` applies unchanged.
pub(crate) fn lift_counts(
    ds: &Dataset,
    all: &WeightedSet,
    on_w: &FairAssignResult,
    centers: &[Center],
    epsilon: f64,
    objective: Objective,
) -> Result<FairAssignResult> {
    let restored = restore_assignment_with(
        ds,
        all,
        &on_w.g,
        centers,
        epsilon,
        objective,
        Some(&on_w.class_costs),
    )?;
    let class_costs = per_class_costs(ds, &restored.assignment);
    Ok(FairAssignResult {
        g: on_w.g.clone(),
        cost: restored.cost,
        assignment: restored.assignment,
        class_costs,
        nodes: on_w.nodes,
        root_bound: on_w.root_bound,
    })
}
