//! Brute-force ground truth on a tiny instance: fair optimum with centers
//! from the input and the continuous fair k-means optimum.
//!
//! cargo run --example oracle

use fairkit::model::{Dataset, FairnessSpec, Metric, Objective};
use fairkit::oracle::{exact_fair_means, exact_fair_optimum, OracleBudget};

fn main() -> fairkit::Result<()> {
    let coords = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![5.0, 5.0], vec![6.0, 5.0], vec![5.0, 6.0]];
    let ds = Dataset::new(Metric::euclidean(coords)?, vec![vec![0], vec![0], vec![0], vec![1], vec![1], vec![1]])?;
    // Each cluster must be half red and half blue.
    let spec = FairnessSpec::from_f64(&[0.5, 0.5], &[0.5, 0.5])?;
    let budget = OracleBudget::default();

    let med = exact_fair_optimum(&ds, 2, &spec, Objective::Median, None, &budget)?;
    println!("k-median with input centers: {:.4} at {:?}", med.cost, med.centers);
    let means = exact_fair_means(&ds, 2, &spec, &budget)?;
    println!("k-means with free centers:   {:.4}", means.cost);
    Ok(())
}
