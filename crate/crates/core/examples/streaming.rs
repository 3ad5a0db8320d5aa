//! Maintain a coreset over a stream with merge-and-reduce buckets.
//!
//! cargo run --example streaming

use fairkit::coreset::CoresetConfig;
use fairkit::model::Objective;
use fairkit::streaming::{StreamConfig, StreamState};

fn main() -> fairkit::Result<()> {
    let config = StreamConfig {
        bucket_size_override: Some(16),
        // Small per-cell samples so that merged buckets visibly shrink.
        coreset: CoresetConfig {
            sample_size_override: Some(2),
            ..CoresetConfig::default()
        },
        ..StreamConfig::default()
    };
    // Two groups; a point may belong to both.
    let universe = vec![vec![0], vec![1], vec![0, 1]];
    let mut state = StreamState::new(2, 0.5, Objective::Median, 2, 2, universe, config, 1)?;
    for i in 0..200u32 {
        let x = f64::from(i % 17) + if i % 2 == 0 { 0.0 } else { 50.0 };
        let groups: &[usize] = match i % 3 {
            0 => &[0],
            1 => &[1],
            _ => &[0, 1],
        };
        state.insert(vec![x, f64::from(i % 5)], groups)?;
        if (i + 1) % 50 == 0 {
            let snap = state.coreset()?;
            println!(
                "after {:3} points: {} weighted points, total weight {}, {} points stored, buckets {:?}",
                state.seen(),
                snap.set.len(),
                snap.set.total_weight(),
                state.stored_points(),
                state.bucket_weights()
            );
        }
    }
    Ok(())
}
