use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Additive slack used when validating the triangle inequality of user matrices.
pub const TRIANGLE_SLACK: f64 = 1e-9;

/// Clustering objective: sum of distances or sum of squared distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Median,
    Means,
}

impl Objective {
    /// Cost contributed by one unit of weight at distance `d`.
    #[inline]
    pub fn cost(self, d: f64) -> f64 {
        match self {
            Objective::Median => d,
            Objective::Means => d * d,
        }
    }

    /// Exponent applied to distances by this objective.
    pub fn power(self) -> i32 {
        match self {
            Objective::Median => 1,
            Objective::Means => 2,
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Objective::Median),
            "means" => Ok(Objective::Means),
            other => Err(Error::invalid(format!("unknown objective `{other}`"))),
        }
    }
}

/// A cluster center: either a point of the instance (an index into the
/// metric) or a free location in Euclidean space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Center {
    Point(usize),
    Coords(Vec<f64>),
}

/// Distance oracle over the points of an instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    /// Points given by coordinate vectors of a common dimension.
    Euclidean { dim: usize, coords: Vec<Vec<f64>> },
    /// Row-major `n x n` distance matrix.
    Matrix { n: usize, dist: Vec<f64> },
    /// Base metric with distances clipped from above and shifted up for
    /// every pair of distinct points.
    Adjusted {
        base: Box<Metric>,
        clip: f64,
        shift: f64,
    },
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl Metric {
    /// Builds a Euclidean metric, rejecting ragged or non-finite input.
    pub fn euclidean(coords: Vec<Vec<f64>>) -> Result<Self> {
        let dim = coords.first().map_or(0, Vec::len);
        for (i, row) in coords.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::invalid(format!(
                    "point {i} has dimension {} (expected {dim})",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(Metric::Euclidean { dim, coords })
    }

    /// Builds a matrix metric. Symmetry, zero diagonal and non-negativity are
    /// always checked; the triangle inequality only when `check_triangle`.
    pub fn matrix(rows: Vec<Vec<f64>>, check_triangle: bool) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "distance matrix row {i} has {} entries (expected {n})",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        let m = Metric::Matrix { n, dist };
        m.validate(check_triangle)?;
        Ok(m)
    }

    fn validate(&self, check_triangle: bool) -> Result<()> {
        let Metric::Matrix { n, dist } = self else {
            return Ok(());
        };
        let n = *n;
        for i in 0..n {
            for j in 0..n {
                let d = dist[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid(format!(
                        "distance ({i}, {j}) = {d} is negative or not finite"
                    )));
                }
                if i == j && d != 0.0 {
                    return Err(Error::invalid(format!("distance ({i}, {i}) must be zero")));
                }
                if d != dist[j * n + i] {
                    return Err(Error::invalid(format!(
                        "distance matrix is asymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if check_triangle {
            for i in 0..n {
                for j in 0..n {
                    for m in 0..n {
                        if dist[i * n + j] > dist[i * n + m] + dist[m * n + j] + TRIANGLE_SLACK {
                            return Err(Error::invalid(format!(
                                "triangle inequality violated for ({i}, {j}) via {m}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of points addressed by this metric.
    pub fn len(&self) -> usize {
        match self {
            Metric::Euclidean { coords, .. } => coords.len(),
            Metric::Matrix { n, .. } => *n,
            Metric::Adjusted { base, .. } => base.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The coordinate space underneath, if any.
    pub fn is_euclidean(&self) -> bool {
        match self {
            Metric::Euclidean { .. } => true,
            Metric::Matrix { .. } => false,
            Metric::Adjusted { .. } => false,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Metric::Euclidean { dim, .. } => Some(*dim),
            _ => None,
        }
    }

    pub fn coords(&self, p: usize) -> Option<&[f64]> {
        match self {
            Metric::Euclidean { coords, .. } => Some(&coords[p]),
            Metric::Adjusted { base, .. } => base.coords(p),
            Metric::Matrix { .. } => None,
        }
    }

    /// Distance between points `a` and `b`.
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        match self {
            Metric::Euclidean { coords, .. } => euclid(&coords[a], &coords[b]),
            Metric::Matrix { n, dist } => dist[a * n + b],
            Metric::Adjusted { base, clip, shift } => {
                if a == b {
                    0.0
                } else {
                    base.dist(a, b).min(*clip) + shift
                }
            }
        }
    }

    /// Distance between point `p` and a center.
    ///
    /// Panics if a coordinate center is used with a matrix metric.
    pub fn dist_to(&self, p: usize, c: &Center) -> f64 {
        match (self, c) {
            (_, Center::Point(q)) => self.dist(p, *q),
            (Metric::Euclidean { coords, .. }, Center::Coords(x)) => euclid(&coords[p], x),
            (Metric::Adjusted { base, clip, shift }, Center::Coords(_)) => {
                let d = base.dist_to(p, c);
                if d == 0.0 {
                    0.0
                } else {
                    d.min(*clip) + shift
                }
            }
            (Metric::Matrix { .. }, Center::Coords(_)) => {
                panic!("coordinate centers require a Euclidean metric")
            }
        }
    }

    /// Checks that a center can be evaluated against this metric.
    pub fn check_center(&self, c: &Center) -> Result<()> {
        match c {
            Center::Point(q) if *q >= self.len() => {
                Err(Error::invalid(format!("center index {q} out of range")))
            }
            Center::Point(_) => Ok(()),
            Center::Coords(x) => match self.dim() {
                Some(d) if d == x.len() => Ok(()),
                Some(d) => Err(Error::invalid(format!(
                    "center has dimension {} (expected {d})",
                    x.len()
                ))),
                None => match self {
                    Metric::Adjusted { base, .. } => base.check_center(c),
                    _ => Err(Error::invalid("coordinate centers need a Euclidean metric")),
                },
            },
        }
    }

    /// Location of a center as coordinates (Euclidean only).
    pub fn center_coords(&self, c: &Center) -> Option<Vec<f64>> {
        match c {
            Center::Coords(x) => Some(x.clone()),
            Center::Point(q) => self.coords(*q).map(<[f64]>::to_vec),
        }
    }
}
