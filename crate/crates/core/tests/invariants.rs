mod common;

use fairkit::approx::{reduce_aspect_ratio, ClusterConfig, Constraint, constrained_cluster};
use fairkit::coreset::{build_coreset, ring_index, sample_size, CoresetConfig, Regime};
use fairkit::flow::{capacitated_assign, lower_bounded_assign, nearest_assignment};
use fairkit::milp::{fair_assign_exact, restore_assignment, split_epsilon};
use fairkit::model::{
    clustering_cost, constraint_matrix_of, fairness_check, Center, Metric, Objective,
};
use fairkit::sketch::truncated_svd_sketch;
use fairkit::streaming::{StreamConfig, StreamState};
use proptest::prelude::*;

fn objective() -> impl Strategy<Value = Objective> {
    prop_oneof![Just(Objective::Median), Just(Objective::Means)]
}

fn centers(n: usize, k: usize, seed: u64) -> Vec<Center> {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        idx.swap(i, (s >> 33) as usize % (i + 1));
    }
    idx[..k].iter().map(|&p| Center::Point(p)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coreset_keeps_class_weights(seed in any::<u64>(), n in 5usize..60, m in 1usize..4,
                                   overlap in any::<bool>(), s in 1usize..4, obj in objective()) {
        let ds = common::points(seed, n, 2, m, overlap);
        let config = CoresetConfig { sample_size_override: Some(s), ..CoresetConfig::default() };
        let cs = build_coreset(&ds, &ds.unit_weights(), 2, 0.3, obj, Regime::Metric, &config, seed).unwrap();
        prop_assert_eq!(cs.set.class_weights(ds.num_classes()), ds.class_sizes());
        for it in cs.set.iter() {
            prop_assert!(it.weight >= 1);
            prop_assert_eq!(ds.class_of(it.point), it.class);
        }
        prop_assert_eq!(cs.cells.len(), cs.set.len());
    }

    #[test]
    fn coreset_is_seed_deterministic(seed in any::<u64>(), n in 5usize..40) {
        let ds = common::points(seed, n, 3, 2, false);
        let config = CoresetConfig { sample_size_override: Some(2), ..CoresetConfig::default() };
        let a = build_coreset(&ds, &ds.unit_weights(), 2, 0.5, Objective::Means, Regime::Euclidean, &config, 9).unwrap();
        let b = build_coreset(&ds, &ds.unit_weights(), 2, 0.5, Objective::Means, Regime::Euclidean, &config, 9).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ring_bounds(r in 0.0f64..1e6, mu in 1e-3f64..1e3) {
        let j = ring_index(r, mu);
        if j == 0 {
            prop_assert!(r <= mu);
        } else {
            prop_assert!(r <= mu * 2f64.powi(j as i32));
            prop_assert!(r > mu * 2f64.powi(j as i32 - 1));
        }
    }

    #[test]
    fn sample_size_shrinks_with_epsilon(n in 2u64..100_000, k in 1usize..6, e in 0.05f64..0.9, obj in objective()) {
        let c = CoresetConfig::default();
        let small = sample_size(n, k, e, obj, Regime::Metric, 2, &c);
        let large = sample_size(n, k, (e * 1.5).min(1.0), obj, Regime::Metric, 2, &c);
        prop_assert!(large.s <= small.s);
        let euc = sample_size(n, k, e, obj, Regime::Euclidean, 2, &c);
        prop_assert!(euc.s >= small.s);
    }

    #[test]
    fn split_epsilon_composes(e in 1e-4f64..1.0) {
        let e0 = split_epsilon(e);
        prop_assert!(e0 > 0.0 && e0 < e);
        prop_assert!(((1.0 + 3.0 * e0) * (1.0 + e0) - (1.0 + e)).abs() < 1e-12);
    }

    #[test]
    fn flow_variants_respect_bounds(seed in any::<u64>(), n in 4usize..14, k in 2usize..4, obj in objective()) {
        let ds = common::points(seed, n, 2, 2, false);
        let c = centers(n, k, seed);
        let set = ds.unit_weights();
        let free = nearest_assignment(&ds, &set, &c, obj);
        let l = (n / k) as u64;
        let lo = lower_bounded_assign(&ds, &set, &c, l, obj).unwrap();
        prop_assert!(lo.assignment.cluster_masses().iter().all(|&m| m >= l));
        let u = n.div_ceil(k) as u64;
        let cap = capacitated_assign(&ds, &set, &c, u, obj).unwrap();
        prop_assert!(cap.assignment.cluster_masses().iter().all(|&m| m <= u));
        for t in [&lo, &cap] {
            prop_assert!(t.cost >= free.cost - 1e-9);
            prop_assert!((t.cost - clustering_cost(&ds, &t.assignment)).abs() <= 1e-9 * t.cost.max(1.0));
            t.assignment.check_complete(&set).unwrap();
        }
    }

    #[test]
    fn exact_fair_assignment_is_fair(seed in any::<u64>(), n in 4usize..9, k in 2usize..4, obj in objective()) {
        let ds = common::points(seed, n, 2, 2, true);
        let mut r = common::rng(seed);
        let spec = common::random_spec(&mut r, &ds);
        let c = centers(n, k, seed ^ 1);
        if let Ok(res) = fair_assign_exact(&ds, &ds.unit_weights(), &c, &spec, obj) {
            prop_assert!(fairness_check(&res.assignment, &ds, &spec).is_empty());
            prop_assert_eq!(constraint_matrix_of(&res.assignment, &ds), res.g.clone());
            prop_assert!(res.cost >= nearest_assignment(&ds, &ds.unit_weights(), &c, obj).cost - 1e-9);
            // Restoring the optimal class masses reproduces them exactly.
            let t = restore_assignment(&ds, &res.g, &c, 0.2, obj).unwrap();
            prop_assert_eq!(constraint_matrix_of(&t.assignment, &ds), res.g);
        }
    }

    #[test]
    fn aspect_reduction_only_adds(seed in any::<u64>(), n in 2usize..12, d in 0.1f64..100.0) {
        let ds = common::points(seed, n, 2, 1, false);
        let adj = reduce_aspect_ratio(ds.metric(), d, n, 0.01);
        let shift = 0.01 * d / (n as f64).powi(3);
        for a in 0..n {
            prop_assert_eq!(adj.dist(a, a), 0.0);
            for b in 0..n {
                if a != b {
                    let base = ds.dist(a, b).min(2.0 * (n as f64).powi(10) * d);
                    prop_assert!((adj.dist(a, b) - base - shift).abs() <= 1e-12 * (base + shift));
                }
            }
        }
    }

    #[test]
    fn stream_prefixes_keep_weight(seed in any::<u64>(), n in 1usize..80, cap in 2usize..9) {
        let ds = common::points(seed, n, 2, 2, true);
        let config = StreamConfig {
            bucket_size_override: Some(cap),
            coreset: CoresetConfig { sample_size_override: Some(1), ..CoresetConfig::default() },
            ..StreamConfig::default()
        };
        let universe = vec![vec![0], vec![1], vec![0, 1]];
        let mut st = StreamState::new(2, 0.5, Objective::Median, 2, 2, universe.clone(), config, seed).unwrap();
        let mut sizes = [0u64; 3];
        for p in 0..n {
            let g = ds.groups_of(p);
            st.insert(ds.metric().coords(p).unwrap().to_vec(), g).unwrap();
            sizes[universe.iter().position(|u| u.as_slice() == g).unwrap()] += 1;
            let snap = st.coreset().unwrap();
            prop_assert_eq!(snap.set.class_weights(3), sizes.to_vec());
            prop_assert_eq!(st.bucket_weights().iter().sum::<u64>(), (p + 1) as u64);
        }
    }

    #[test]
    fn svd_matches_reference(seed in any::<u64>(), n in 2usize..9, d in 1usize..6, m in 1usize..6) {
        let ds = common::points(seed, n, d, 1, false);
        let Metric::Euclidean { coords, .. } = ds.metric() else { unreachable!() };
        let s = truncated_svd_sketch(coords, m).unwrap();
        let a = nalgebra::DMatrix::from_fn(n, d, |i, j| coords[i][j]);
        let mut sv: Vec<f64> = a.singular_values().iter().map(|x| x * x).collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        sv.resize(d, 0.0);
        let scale = sv[0].max(1.0);
        for (x, y) in s.spectrum.iter().zip(&sv) {
            prop_assert!((x - y).abs() <= 1e-8 * scale, "{:?} vs {:?}", s.spectrum, sv);
        }
        let tail: f64 = sv[m.min(d)..].iter().sum();
        prop_assert!((s.residual - tail).abs() <= 1e-8 * scale);
    }
}

#[test]
fn clustering_ignores_thread_count() {
    let ds = common::points(3, 14, 2, 2, false);
    let spec = fairkit::model::FairnessSpec::proportional(&ds, 0.3).unwrap();
    let run = |t: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(|| {
            constrained_cluster(&ds, 2, 0.5, Objective::Median, &Constraint::Fair(spec.clone()),
                Regime::Metric, &ClusterConfig::default(), 4).unwrap()
        })
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.centers, four.centers);
    assert_eq!(one.assignment, four.assignment);
    assert_eq!(one.cost.to_bits(), four.cost.to_bits());
}
