//! Fair k-median on an explicit distance matrix with the leader and radius
//! guessing pipeline, checked against the brute-force optimum.
//!
//! cargo run --example metric_clustering

use fairkit::approx::fair_cluster_metric;
use fairkit::model::{Dataset, FairnessSpec, Metric, Objective};
use fairkit::oracle::{exact_fair_optimum, OracleBudget};

fn main() -> fairkit::Result<()> {
    // Two triangles far apart; each mixes both groups.
    let pos: [(f64, f64); 6] = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (10.0, 10.0), (11.0, 10.0), (10.0, 11.0)];
    let rows: Vec<Vec<f64>> = pos
        .iter()
        .map(|a| pos.iter().map(|b| ((a.0 - b.0) * (a.0 - b.0) + (a.1 - b.1) * (a.1 - b.1)).sqrt()).collect())
        .collect();
    let ds = Dataset::new(Metric::matrix(rows, true)?, vec![vec![0], vec![1], vec![0], vec![1], vec![0], vec![1]])?;
    let spec = FairnessSpec::from_f64(&[0.7, 0.7], &[0.3, 0.3])?;

    let sol = fair_cluster_metric(&ds, 2, &spec, 0.5, Objective::Median, 11)?;
    println!("centers {:?}", sol.centers);
    println!("cost {:.4}", sol.cost);
    println!(
        "scored {} distinct center sets out of a raw space of {}, exhaustive: {}",
        sol.meta.center_sets, sol.meta.guess_space, sol.meta.exhaustive
    );
    let opt = exact_fair_optimum(&ds, 2, &spec, Objective::Median, None, &OracleBudget::default())?;
    println!("optimum {:.4}, ratio {:.4}", opt.cost, sol.cost / opt.cost);
    Ok(())
}
