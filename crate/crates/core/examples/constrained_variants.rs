//! The same clustering skeleton with other assignment constraints: lower
//! bounds, capacities, l-diversity and chromatic clustering.
//!
//! cargo run --example constrained_variants

use fairkit::approx::{constrained_cluster, ClusterConfig, Constraint};
use fairkit::coreset::Regime;
use fairkit::model::{Dataset, Metric, Objective};

fn main() -> fairkit::Result<()> {
    // A tight group of five and a loose group of three, three colors.
    let xs = [0.0, 0.2, 0.4, 0.6, 0.8, 9.0, 10.0, 11.0];
    let ds = Dataset::new(
        Metric::euclidean(xs.iter().map(|&x| vec![x]).collect())?,
        (0..8).map(|i| vec![i % 3]).collect(),
    )?;
    let config = ClusterConfig::default();
    for constraint in [
        Constraint::LowerBound(4),
        Constraint::Capacity(4),
        Constraint::Diversity(2),
        Constraint::Chromatic,
    ] {
        let k = if constraint == Constraint::Chromatic { 3 } else { 2 };
        match constrained_cluster(&ds, k, 0.5, Objective::Median, &constraint, Regime::Metric, &config, 1) {
            Ok(sol) => println!("{constraint:?}: cost {:.3}, cluster sizes {:?}", sol.cost, sol.assignment.cluster_masses()),
            Err(e) => println!("{constraint:?}: {e}"),
        }
    }
    Ok(())
}
