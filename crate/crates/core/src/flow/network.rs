use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Directed arc with an optional capacity (`None` = unbounded) and a
/// non-negative per-unit cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: Option<i64>,
    pub cost: f64,
}

/// Nodes with integer supplies (positive) or demands (negative) and the
/// arcs between them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FlowNetwork {
    supply: Vec<i64>,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn new(num_nodes: usize) -> Self {
        FlowNetwork {
            supply: vec![0; num_nodes],
            arcs: Vec::new(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.supply.len()
    }

    pub fn add_node(&mut self, supply: i64) -> usize {
        self.supply.push(supply);
        self.supply.len() - 1
    }

    pub fn set_supply(&mut self, v: usize, supply: i64) {
        self.supply[v] = supply;
    }

    pub fn supply(&self, v: usize) -> i64 {
        self.supply[v]
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Option<i64>, cost: f64) -> usize {
        self.arcs.push(Arc {
            from,
            to,
            capacity,
            cost,
        });
        self.arcs.len() - 1
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_nodes();
        let balance: i64 = self.supply.iter().sum();
        if balance != 0 {
            return Err(Error::invalid(format!(
                "unbalanced network: supplies sum to {balance}"
            )));
        }
        for (id, a) in self.arcs.iter().enumerate() {
            if a.from >= n || a.to >= n {
                return Err(Error::invalid(format!("arc {id} references a missing node")));
            }
            if !(a.cost >= 0.0) || !a.cost.is_finite() {
                return Err(Error::invalid(format!("arc {id} has cost {}", a.cost)));
            }
            if matches!(a.capacity, Some(c) if c < 0) {
                return Err(Error::invalid(format!("arc {id} has negative capacity")));
            }
        }
        Ok(())
    }
}

/// Integral flow on every arc of a network.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    pub arc_flow: Vec<i64>,
    pub total_cost: f64,
    /// False when not all supply could be routed to the demands.
    pub feasible: bool,
}

impl FlowResult {
    /// Verifies capacities and, if feasible, conservation at every node.
    pub fn check(&self, net: &FlowNetwork) -> Result<()> {
        let mut excess = net.supply.clone();
        for (a, &f) in net.arcs.iter().zip(&self.arc_flow) {
            if f < 0 || matches!(a.capacity, Some(c) if f > c) {
                return Err(Error::invalid(format!("flow {f} violates capacity on {a:?}")));
            }
            excess[a.from] -= f;
            excess[a.to] += f;
        }
        if self.feasible && excess.iter().any(|&e| e != 0) {
            return Err(Error::invalid("flow is not conserved"));
        }
        Ok(())
    }
}

struct Residual {
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn with_nodes(n: usize) -> Self {
        Residual {
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn push(&mut self, from: usize, to: usize, cap: i64, cost: f64) -> usize {
        let e = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.cost.push(cost);
        self.adj[from].push(e);
        self.to.push(from);
        self.cap.push(0);
        self.cost.push(-cost);
        self.adj[to].push(e + 1);
        e
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-cost flow by successive shortest augmenting paths with node
/// potentials. Returns the cheapest flow that routes as much supply as
/// possible; `feasible` reports whether all of it was routed.
pub fn min_cost_flow(net: &FlowNetwork) -> Result<FlowResult> {
    net.validate()?;
    let n = net.num_nodes();
    let total: i64 = net.supply.iter().filter(|&&s| s > 0).sum();
    let source = n;
    let sink = n + 1;
    let mut g = Residual::with_nodes(n + 2);
    let arc_edges: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| g.push(a.from, a.to, a.capacity.unwrap_or(total), a.cost))
        .collect();
    for (v, &s) in net.supply.iter().enumerate() {
        if s > 0 {
            g.push(source, v, s, 0.0);
        } else if s < 0 {
            g.push(v, sink, -s, 0.0);
        }
    }

    let nodes = n + 2;
    let mut potential = vec![0.0f64; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut prev = vec![usize::MAX; nodes];
    let mut done = vec![false; nodes];
    let mut routed = 0i64;
    while routed < total {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        prev.iter_mut().for_each(|p| *p = usize::MAX);
        done.iter_mut().for_each(|d| *d = false);
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry {
            dist: 0.0,
            node: source,
        });
        while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &e in &g.adj[u] {
                if g.cap[e] <= 0 {
                    continue;
                }
                let v = g.to[e];
                if done[v] {
                    continue;
                }
                // Rounding can leave tiny negative reduced costs.
                let reduced = (g.cost[e] + potential[u] - potential[v]).max(0.0);
                let nd = d + reduced;
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = e;
                    heap.push(HeapEntry { dist: nd, node: v });
                }
            }
        }
        if !dist[sink].is_finite() {
            break;
        }
        let reach = dist[sink];
        for v in 0..nodes {
            potential[v] += dist[v].min(reach);
        }
        let mut push = total - routed;
        let mut v = sink;
        while v != source {
            let e = prev[v];
            push = push.min(g.cap[e]);
            v = g.to[e ^ 1];
        }
        let mut v = sink;
        while v != source {
            let e = prev[v];
            g.cap[e] -= push;
            g.cap[e ^ 1] += push;
            v = g.to[e ^ 1];
        }
        routed += push;
    }

    let arc_flow: Vec<i64> = arc_edges.iter().map(|&e| g.cap[e ^ 1]).collect();
    let total_cost = net
        .arcs
        .iter()
        .zip(&arc_flow)
        .map(|(a, &f)| a.cost * f as f64)
        .sum();
    Ok(FlowResult {
        arc_flow,
        total_cost,
        feasible: routed == total,
    })
}
