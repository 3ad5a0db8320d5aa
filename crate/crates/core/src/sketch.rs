//! Dimension reduction for k-means: project the points onto their top right
//! singular vectors, cluster in the small space, and lift the clusters back.

use crate::approx::{Solution, SolutionMeta};
use crate::coreset::{build_coreset, CoresetConfig, Regime};
use crate::error::{Error, Result};
use crate::milp::split_epsilon;
use crate::model::{clustering_cost, Center, Dataset, Metric, Objective, WeightedSet};

/// Column-orthonormal projection `Z` (`d × m`) and the projected points.
#[derive(Clone, Debug, PartialEq)]
pub struct Sketch {
    /// Row-major `d × m`.
    pub z: Vec<Vec<f64>>,
    /// Projected points `AZ`, one row per point.
    pub points: Vec<Vec<f64>>,
    /// Squared singular values of `A` in decreasing order.
    pub spectrum: Vec<f64>,
    /// `‖A − AZZᵀ‖²_F`.
    pub residual: f64,
}

impl Sketch {
    pub fn dim(&self) -> usize {
        self.z.first().map_or(0, Vec::len)
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in decreasing order and matching eigenvectors as the
/// columns of the second matrix.
pub fn symmetric_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&i| v[r][i]).collect()).collect();
    (values, vectors)
}

/// Projection of the rows of `a` onto the top `m` right singular vectors.
/// `m` larger than the dimension is capped at the dimension.
pub fn truncated_svd_sketch(a: &[Vec<f64>], m: usize) -> Result<Sketch> {
    if m == 0 {
        return Err(Error::invalid("sketch dimension must be at least 1"));
    }
    let d = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != d) {
        return Err(Error::invalid("ragged point matrix"));
    }
    let m = m.min(d);
    let mut gram = vec![vec![0.0; d]; d];
    for row in a {
        for i in 0..d {
            for j in i..d {
                gram[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            gram[i][j] = gram[j][i];
        }
    }
    let (values, vectors) = symmetric_eigen(gram);
    let z: Vec<Vec<f64>> = vectors.iter().map(|row| row[..m].to_vec()).collect();
    let points: Vec<Vec<f64>> = a
        .iter()
        .map(|row| {
            (0..m)
                .map(|c| row.iter().zip(&z).map(|(x, zr)| x * zr[c]).sum())
                .collect()
        })
        .collect();
    let total: f64 = a.iter().flatten().map(|x| x * x).sum();
    let kept: f64 = points.iter().flatten().map(|x| x * x).sum();
    let spectrum: Vec<f64> = values.into_iter().map(|x| x.max(0.0)).collect();
    Ok(Sketch {
        z,
        points,
        residual: (total - kept).max(0.0),
        spectrum,
    })
}

/// Sketched instance, its coreset and the parameters used.
#[derive(Clone, Debug, PartialEq)]
pub struct KmeansReduction {
    /// Same points and groups in `ℝ^m`.
    pub dataset: Dataset,
    pub sketch: Sketch,
    /// Coreset of the sketched points.
    pub set: WeightedSet,
    pub epsilon0: f64,
}

/// Sketches a Euclidean instance to `m = ⌈k/ε₀⌉` dimensions and compresses
/// the sketched points to a coreset.
pub fn kmeans_reduce(
    ds: &Dataset,
    k: usize,
    epsilon: f64,
    config: &CoresetConfig,
    seed: u64,
) -> Result<KmeansReduction> {
    let Metric::Euclidean { coords, .. } = ds.metric() else {
        return Err(Error::invalid("sketching needs coordinates"));
    };
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid("epsilon must lie in (0, 1]"));
    }
    let epsilon0 = split_epsilon(epsilon);
    let m = (k as f64 / epsilon0).ceil() as usize;
    let sketch = truncated_svd_sketch(coords, m)?;
    let metric = Metric::euclidean(sketch.points.clone())?;
    let mut dataset = ds.with_metric(metric)?;
    dataset = dataset.with_candidate_centers(ds.candidate_centers().to_vec())?;
    let set = build_coreset(
        &dataset,
        &dataset.unit_weights(),
        k,
        epsilon0,
        Objective::Means,
        Regime::Euclidean,
        config,
        seed,
    )?
    .set;
    Ok(KmeansReduction {
        dataset,
        sketch,
        set,
        epsilon0,
    })
}

/// Solution pulled back to the original space.
#[derive(Clone, Debug, PartialEq)]
pub struct Lifted {
    pub solution: Solution,
    /// Clusters of the sketched solution that received no points.
    pub empty_clusters: usize,
}

/// Replaces each center of a sketched solution by the mean of its cluster in
/// the original space and recomputes the cost there. Empty clusters lose
/// their center.
pub fn lift_solution(sol: &Solution, ds: &Dataset, objective: Objective) -> Result<Lifted> {
    let Metric::Euclidean { dim, .. } = ds.metric() else {
        return Err(Error::invalid("lifting needs coordinates"));
    };
    let asg = sol.assignment.without_empty_centers();
    let empty_clusters = sol.assignment.k() - asg.k();
    let mut sums = vec![vec![0.0; *dim]; asg.k()];
    let mut mass = vec![0.0; asg.k()];
    for (p, j, w) in asg.triples() {
        let x = ds.metric().coords(p).ok_or_else(|| Error::invalid("unknown point"))?;
        for (s, v) in sums[j].iter_mut().zip(x) {
            *s += w as f64 * v;
        }
        mass[j] += w as f64;
    }
    let centers: Vec<Center> = sums
        .into_iter()
        .zip(&mass)
        .map(|(s, &m)| Center::Coords(s.into_iter().map(|x| x / m).collect()))
        .collect();
    let mut assignment = asg.with_centers(centers.clone());
    assignment.objective = objective;
    let cost = clustering_cost(ds, &assignment);
    if empty_clusters > 0 {
        log::warn!("{empty_clusters} empty clusters dropped while lifting");
    }
    Ok(Lifted {
        solution: Solution {
            centers,
            assignment,
            cost,
            meta: SolutionMeta {
                algorithm: "lifted",
                ..sol.meta.clone()
            },
        },
        empty_clusters,
    })
}

/// k-means cost of a partition with every cluster centered at its mean.
pub fn partition_cost(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let d = points.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| {
            p.iter()
                .zip(&sums[l])
                .map(|(x, s)| {
                    let mean = s / counts[l] as f64;
                    (x - mean) * (x - mean)
                })
                .sum::<f64>()
        })
        .sum()
}
