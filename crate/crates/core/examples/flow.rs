//! Min-cost flow directly, and capacitated assignment built on it.
//!
//! cargo run --example flow

use fairkit::flow::{capacitated_assign, min_cost_flow, FlowNetwork};
use fairkit::model::{Center, Dataset, Metric, Objective};

fn main() -> fairkit::Result<()> {
    // Source 0 sends 2 units to sink 3 over two paths of different cost.
    let mut net = FlowNetwork::new(4);
    net.add_arc(0, 1, Some(1), 1.0);
    net.add_arc(0, 2, Some(2), 3.0);
    net.add_arc(1, 3, Some(2), 1.0);
    net.add_arc(2, 3, Some(2), 1.0);
    net.set_supply(0, 2);
    net.set_supply(3, -2);
    let flow = min_cost_flow(&net)?;
    println!("flow cost {}, feasible {}", flow.total_cost, flow.feasible);

    let ds = Dataset::new(
        Metric::euclidean(vec![vec![0.0], vec![0.1], vec![0.2], vec![5.0]])?,
        vec![vec![0]; 4],
    )?;
    let centers = [Center::Point(0), Center::Point(3)];
    let t = capacitated_assign(&ds, &ds.unit_weights(), &centers, 2, Objective::Median)?;
    println!("capacity 2: cost {:.2}, masses {:?}", t.cost, t.assignment.cluster_masses());
    Ok(())
}
