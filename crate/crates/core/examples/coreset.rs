//! Compress a two-colored point cloud to a universal coreset and check that
//! each class keeps its total weight.
//!
//! cargo run --example coreset

use fairkit::coreset::{build_coreset, CoresetConfig, Regime};
use fairkit::model::{Dataset, Metric, Objective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fairkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut coords = Vec::new();
    let mut groups = Vec::new();
    for i in 0..400 {
        let cx = if i % 2 == 0 { 0.0 } else { 20.0 };
        coords.push(vec![cx + rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
        groups.push(vec![usize::from(rng.gen_bool(0.3))]);
    }
    let ds = Dataset::new(Metric::euclidean(coords)?, groups)?;

    // The default constants keep every point at this size, so fix the
    // per-cell sample instead.
    let config = CoresetConfig {
        sample_size_override: Some(4),
        ..CoresetConfig::default()
    };
    for objective in [Objective::Median, Objective::Means] {
        let cs = build_coreset(&ds, &ds.unit_weights(), 2, 0.3, objective, Regime::Euclidean, &config, 1)?;
        println!(
            "{objective:?}: {} points -> {} weighted points, class weights {:?} (sizes {:?})",
            ds.len(),
            cs.set.len(),
            cs.set.class_weights(ds.num_classes()),
            ds.class_sizes()
        );
    }
    Ok(())
}
