//! k-means after projecting onto the top singular vectors: reduce, cluster
//! the small instance, then lift the clusters back to the original space.
//!
//! cargo run --example sketch

use fairkit::approx::fair_cluster_euclidean;
use fairkit::coreset::CoresetConfig;
use fairkit::model::{Dataset, FairnessSpec, Metric, Objective};
use fairkit::sketch::{kmeans_reduce, lift_solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fairkit::Result<()> {
    // Two clusters in 40 dimensions that differ along a single direction.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let coords: Vec<Vec<f64>> = (0..24)
        .map(|i| {
            (0..40)
                .map(|d| {
                    let shift = if d == 0 && i >= 12 { 10.0 } else { 0.0 };
                    shift + rng.gen_range(-0.5..0.5)
                })
                .collect()
        })
        .collect();
    let ds = Dataset::new(Metric::euclidean(coords)?, (0..24).map(|i| vec![i % 2]).collect())?;
    let spec = FairnessSpec::unconstrained(2);

    let red = kmeans_reduce(&ds, 2, 0.9, &CoresetConfig::default(), 4)?;
    println!(
        "sketch: 40 -> {} dims, residual {:.3}, coreset {} points",
        red.sketch.dim(),
        red.sketch.residual,
        red.set.len()
    );
    let small = fair_cluster_euclidean(&red.dataset, 2, &spec, 0.5, Objective::Means, 4)?;
    let lifted = lift_solution(&small, &ds, Objective::Means)?;
    println!(
        "cost in sketch space {:.3}, after lifting {:.3}",
        small.cost, lifted.solution.cost
    );
    Ok(())
}
