//! Fair k-means in the plane with the candidate-center pipeline.
//!
//! cargo run --example euclidean_clustering

use fairkit::approx::fair_cluster_euclidean;
use fairkit::model::{fairness_check, Dataset, FairnessSpec, Metric, Objective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fairkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut coords = Vec::new();
    let mut groups = Vec::new();
    for i in 0..40 {
        let c = if i < 20 { (0.0, 0.0) } else { (8.0, 3.0) };
        coords.push(vec![c.0 + rng.gen_range(-1.0..1.0), c.1 + rng.gen_range(-1.0..1.0)]);
        groups.push(vec![i % 2]);
    }
    let ds = Dataset::new(Metric::euclidean(coords)?, groups)?;
    let spec = FairnessSpec::proportional(&ds, 0.1)?;

    let sol = fair_cluster_euclidean(&ds, 2, &spec, 0.5, Objective::Means, 2)?;
    for c in &sol.centers {
        println!("center {c:?}");
    }
    println!(
        "cost {:.4} from {} candidate sets, violations {}",
        sol.cost,
        sol.meta.center_sets,
        fairness_check(&sol.assignment, &ds, &spec).len()
    );
    Ok(())
}
