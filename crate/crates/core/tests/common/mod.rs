#![allow(dead_code)]

use fairkit::model::{Dataset, FairnessSpec, Metric};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` random points in `[0, 10)^dim`. Each point gets one of `m` groups,
/// or with `overlap` a random non-empty subset of them.
pub fn points(seed: u64, n: usize, dim: usize, m: usize, overlap: bool) -> Dataset {
    let mut r = rng(seed);
    let coords = (0..n).map(|_| (0..dim).map(|_| r.gen_range(0.0..10.0)).collect()).collect();
    Dataset::with_num_groups(Metric::euclidean(coords).unwrap(), group_sets(&mut r, n, m, overlap), m).unwrap()
}

pub fn group_sets(r: &mut ChaCha8Rng, n: usize, m: usize, overlap: bool) -> Vec<Vec<usize>> {
    (0..n)
        .map(|_| {
            if overlap && m > 1 {
                loop {
                    let g: Vec<usize> = (0..m).filter(|_| r.gen_bool(0.5)).collect();
                    if !g.is_empty() {
                        break g;
                    }
                }
            } else {
                vec![r.gen_range(0..m)]
            }
        })
        .collect()
}

/// Random points with an exact number `classes` of equivalence classes,
/// drawn from the non-empty subsets of `groups` groups.
pub fn with_classes(seed: u64, n: usize, classes: usize) -> Dataset {
    let mut r = rng(seed);
    // Group sets {0}, {1}, {0,1} give up to three classes over two groups.
    let sets: Vec<Vec<usize>> = [vec![0], vec![1], vec![0, 1]][..classes].to_vec();
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| sets[i % classes].clone()).collect();
    for i in (1..n).rev() {
        let j = r.gen_range(0..=i);
        groups.swap(i, j);
    }
    let coords = (0..n).map(|_| vec![r.gen_range(0.0..10.0), r.gen_range(0.0..10.0)]).collect();
    let m = if classes == 1 { 1 } else { 2 };
    Dataset::with_num_groups(Metric::euclidean(coords).unwrap(), groups, m).unwrap()
}

/// Same points with the Euclidean distances written out as a matrix.
pub fn as_matrix(ds: &Dataset) -> Dataset {
    let rows = (0..ds.len()).map(|a| (0..ds.len()).map(|b| ds.dist(a, b)).collect()).collect();
    Dataset::with_num_groups(Metric::matrix(rows, false).unwrap(), ds.groups().to_vec(), ds.num_groups()).unwrap()
}

/// Fairness bounds around the group proportions, widened by a random
/// slack; slack 0 makes most instances infeasible.
pub fn random_spec(r: &mut ChaCha8Rng, ds: &Dataset) -> FairnessSpec {
    let slack = [0.0, 0.1, 0.3, 0.6][r.gen_range(0..4)];
    FairnessSpec::proportional(ds, slack).unwrap()
}
