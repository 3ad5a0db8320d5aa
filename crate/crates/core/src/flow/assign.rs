use crate::error::{Error, Result};
use crate::flow::network::{min_cost_flow, FlowNetwork};
use crate::model::{clustering_cost, Assignment, Center, Dataset, Objective, WeightedPoint, WeightedSet};

/// Snaps per-unit arc costs onto a geometric grid: costs above `2A` become
/// `2A`, costs below `ε₀A/(2n)` become that floor, and everything else rounds
/// up to the nearest `(1+ε₀)^q · floor`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostRounding {
    pub epsilon0: f64,
    /// Cost budget `A` of the class being routed.
    pub budget: f64,
    /// Number of units routed (class size).
    pub units: u64,
}

impl CostRounding {
    pub fn d_max(&self) -> f64 {
        2.0 * self.budget
    }

    pub fn d_min(&self) -> f64 {
        self.epsilon0 * self.budget / (2.0 * self.units.max(1) as f64)
    }

    /// Rounded value of one cost. A zero budget leaves costs untouched.
    pub fn apply(&self, cost: f64) -> f64 {
        if self.budget <= 0.0 {
            return cost;
        }
        let (lo, hi) = (self.d_min(), self.d_max());
        if cost >= hi {
            return hi;
        }
        if cost <= lo {
            return lo;
        }
        let base = 1.0 + self.epsilon0;
        let mut q = ((cost / lo).ln() / base.ln()).ceil();
        // Guard the float logarithm at grid points.
        while q > 0.0 && lo * base.powf(q - 1.0) >= cost {
            q -= 1.0;
        }
        while lo * base.powf(q) < cost {
            q += 1.0;
        }
        (lo * base.powf(q)).min(hi)
    }
}

/// Rounds a batch of costs; see [`CostRounding`].
pub fn cost_rounding(costs: &[f64], epsilon0: f64, budget: f64, units: u64) -> Vec<f64> {
    let r = CostRounding {
        epsilon0,
        budget,
        units,
    };
    costs.iter().map(|&c| r.apply(c)).collect()
}

/// Flow-based assignment together with its true (unrounded) cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Transport {
    pub assignment: Assignment,
    pub cost: f64,
}

fn point_network(
    ds: &Dataset,
    items: &[WeightedPoint],
    centers: &[Center],
    objective: Objective,
    rounding: Option<CostRounding>,
) -> (FlowNetwork, Vec<(usize, usize, usize)>) {
    let k = centers.len();
    let mut net = FlowNetwork::new(items.len() + k);
    let mut arcs = Vec::with_capacity(items.len() * k);
    for (i, it) in items.iter().enumerate() {
        net.set_supply(i, it.weight as i64);
        for (j, c) in centers.iter().enumerate() {
            let mut cost = objective.cost(ds.dist_to(it.point, c));
            if let Some(r) = rounding {
                cost = r.apply(cost);
            }
            let id = net.add_arc(i, items.len() + j, None, cost);
            arcs.push((id, i, j));
        }
    }
    (net, arcs)
}

fn collect(
    ds: &Dataset,
    items: &[WeightedPoint],
    centers: &[Center],
    objective: Objective,
    flows: &[i64],
    arcs: &[(usize, usize, usize)],
) -> Transport {
    let mut asg = Assignment::new(centers.to_vec(), objective);
    for &(id, i, j) in arcs {
        if flows[id] > 0 {
            asg.add(items[i].point, j, flows[id] as u64);
        }
    }
    let cost = clustering_cost(ds, &asg);
    Transport {
        assignment: asg,
        cost,
    }
}

/// Cheapest integral transport of `items` to `centers` with exactly
/// `demand[j]` units arriving at center `j`. With `rounding`, the flow is
/// solved on rounded costs but the reported cost uses true distances.
pub fn class_transport(
    ds: &Dataset,
    items: &[WeightedPoint],
    centers: &[Center],
    demand: &[u64],
    objective: Objective,
    rounding: Option<CostRounding>,
) -> Result<Transport> {
    if demand.len() != centers.len() {
        return Err(Error::invalid("demand vector length differs from the number of centers"));
    }
    let supply: u64 = items.iter().map(|it| it.weight).sum();
    let wanted: u64 = demand.iter().sum();
    if supply != wanted {
        return Err(Error::invalid(format!(
            "class weight {supply} differs from total demand {wanted}"
        )));
    }
    let (mut net, arcs) = point_network(ds, items, centers, objective, rounding);
    for (j, &d) in demand.iter().enumerate() {
        net.set_supply(items.len() + j, -(d as i64));
    }
    let flow = min_cost_flow(&net)?;
    if !flow.feasible {
        return Err(Error::infeasible("transport demands cannot be met"));
    }
    Ok(collect(ds, items, centers, objective, &flow.arc_flow, &arcs))
}

fn nearest(ds: &Dataset, p: usize, centers: &[Center], objective: Objective) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let d = objective.cost(ds.dist_to(p, c));
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Every item to its nearest center (ties to the lowest index).
pub fn nearest_assignment(
    ds: &Dataset,
    set: &WeightedSet,
    centers: &[Center],
    objective: Objective,
) -> Transport {
    let mut asg = Assignment::new(centers.to_vec(), objective);
    for it in set.iter() {
        let (j, _) = nearest(ds, it.point, centers, objective);
        asg.add(it.point, j, it.weight);
    }
    let cost = clustering_cost(ds, &asg);
    Transport {
        assignment: asg,
        cost,
    }
}

/// Cheapest assignment in which every cluster receives at least `lower`
/// units of weight.
///
/// Each center forwards exactly `lower` units to the sink; the remaining
/// `n - k·lower` units pass through an overflow node whose arc from a point
/// costs that point's nearest-center cost, and are then resolved to the
/// nearest center.
pub fn lower_bounded_assign(
    ds: &Dataset,
    set: &WeightedSet,
    centers: &[Center],
    lower: u64,
    objective: Objective,
) -> Result<Transport> {
    let k = centers.len() as u64;
    let n = set.total_weight();
    if k == 0 {
        return Err(Error::invalid("no centers"));
    }
    if n < k * lower {
        return Err(Error::infeasible(format!(
            "{n} units cannot fill {k} clusters of at least {lower}"
        )));
    }
    let items = &set.items;
    let (mut net, arcs) = point_network(ds, items, centers, objective, None);
    let overflow = net.add_node(0);
    let sink = net.add_node(-(n as i64));
    for j in 0..centers.len() {
        net.add_arc(items.len() + j, sink, Some(lower as i64), 0.0);
    }
    net.add_arc(overflow, sink, Some((n - k * lower) as i64), 0.0);
    let mut via_overflow = Vec::with_capacity(items.len());
    for (i, it) in items.iter().enumerate() {
        let (j, d) = nearest(ds, it.point, centers, objective);
        let id = net.add_arc(i, overflow, None, d);
        via_overflow.push((id, i, j));
    }
    let flow = min_cost_flow(&net)?;
    if !flow.feasible {
        return Err(Error::infeasible("lower bounds cannot be met"));
    }
    let mut out = collect(ds, items, centers, objective, &flow.arc_flow, &arcs);
    for &(id, i, j) in &via_overflow {
        if flow.arc_flow[id] > 0 {
            out.assignment.add(items[i].point, j, flow.arc_flow[id] as u64);
        }
    }
    out.cost = clustering_cost(ds, &out.assignment);
    Ok(out)
}

/// Cheapest assignment in which every cluster receives at most `upper`
/// units of weight.
pub fn capacitated_assign(
    ds: &Dataset,
    set: &WeightedSet,
    centers: &[Center],
    upper: u64,
    objective: Objective,
) -> Result<Transport> {
    let k = centers.len() as u64;
    let n = set.total_weight();
    if n > k * upper {
        return Err(Error::infeasible(format!(
            "{n} units exceed {k} clusters of capacity {upper}"
        )));
    }
    let items = &set.items;
    let (mut net, arcs) = point_network(ds, items, centers, objective, None);
    let sink = net.add_node(-(n as i64));
    for j in 0..centers.len() {
        net.add_arc(items.len() + j, sink, Some(upper as i64), 0.0);
    }
    let flow = min_cost_flow(&net)?;
    if !flow.feasible {
        return Err(Error::infeasible("capacities cannot be met"));
    }
    Ok(collect(ds, items, centers, objective, &flow.arc_flow, &arcs))
}

/// Cheapest assignment in which no cluster holds two units of the same
/// color. Colors are the dataset's groups, which must be disjoint.
pub fn chromatic_assign(
    ds: &Dataset,
    set: &WeightedSet,
    centers: &[Center],
    objective: Objective,
) -> Result<Transport> {
    if !ds.groups_disjoint() {
        return Err(Error::invalid("chromatic clustering needs one color per point"));
    }
    let k = centers.len();
    let colors = ds.num_groups();
    let mut per_color = vec![0u64; colors];
    for it in set.iter() {
        per_color[ds.groups_of(it.point)[0]] += it.weight;
    }
    if let Some((c, &m)) = per_color.iter().enumerate().find(|(_, &m)| m > k as u64) {
        return Err(Error::infeasible(format!(
            "color {c} has {m} points but only {k} clusters"
        )));
    }
    let items = &set.items;
    let n = set.total_weight();
    let mut net = FlowNetwork::new(items.len());
    // (color, center) gate nodes with unit capacity into each center.
    let gate_base = net.num_nodes();
    for _ in 0..colors * k {
        net.add_node(0);
    }
    let center_base = net.num_nodes();
    for _ in 0..k {
        net.add_node(0);
    }
    let sink = net.add_node(-(n as i64));
    for color in 0..colors {
        for j in 0..k {
            net.add_arc(gate_base + color * k + j, center_base + j, Some(1), 0.0);
        }
    }
    for j in 0..k {
        net.add_arc(center_base + j, sink, None, 0.0);
    }
    let mut arcs = Vec::with_capacity(items.len() * k);
    for (i, it) in items.iter().enumerate() {
        net.set_supply(i, it.weight as i64);
        let color = ds.groups_of(it.point)[0];
        for (j, c) in centers.iter().enumerate() {
            let cost = objective.cost(ds.dist_to(it.point, c));
            let id = net.add_arc(i, gate_base + color * k + j, None, cost);
            arcs.push((id, i, j));
        }
    }
    let flow = min_cost_flow(&net)?;
    if !flow.feasible {
        return Err(Error::infeasible("chromatic assignment impossible"));
    }
    Ok(collect(ds, items, centers, objective, &flow.arc_flow, &arcs))
}
