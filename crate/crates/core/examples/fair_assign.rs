//! Fair assignment to fixed centers: exact branch-and-bound, the coreset
//! based approximation, and plain nearest-center assignment for contrast.
//!
//! cargo run --example fair_assign

use fairkit::flow::nearest_assignment;
use fairkit::milp::{fair_assign_approx, fair_assign_exact};
use fairkit::model::{fairness_check, Center, Dataset, FairnessSpec, Metric, Objective};

fn main() -> fairkit::Result<()> {
    // Red points on the left, blue on the right, one center on each side.
    let xs = [0.0, 1.0, 2.0, 3.0, 10.0, 11.0, 12.0, 13.0];
    let ds = Dataset::new(
        Metric::euclidean(xs.iter().map(|&x| vec![x]).collect())?,
        (0..8).map(|i| vec![usize::from(i >= 4)]).collect(),
    )?;
    let centers = [Center::Coords(vec![1.5]), Center::Coords(vec![11.5])];
    let spec = FairnessSpec::from_f64(&[0.5, 0.5], &[0.5, 0.5])?;

    let nearest = nearest_assignment(&ds, &ds.unit_weights(), &centers, Objective::Median);
    println!(
        "nearest: cost {} with {} fairness violations",
        nearest.cost,
        fairness_check(&nearest.assignment, &ds, &spec).len()
    );
    let exact = fair_assign_exact(&ds, &ds.unit_weights(), &centers, &spec, Objective::Median)?;
    println!("exact:   cost {} after {} branch-and-bound nodes", exact.cost, exact.nodes);
    println!("         class masses per center {:?}", exact.g.rows());
    let approx = fair_assign_approx(&ds, &centers, &spec, 0.5, Objective::Median, 3)?;
    println!(
        "approx:  cost {} with {} violations",
        approx.cost,
        fairness_check(&approx.assignment, &ds, &spec).len()
    );
    Ok(())
}
