use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::dataset::Dataset;
use crate::model::metric::{Center, Objective};
use crate::model::weighted::WeightedSet;

/// `k x Γ` matrix of non-negative integers: entry `(j, t)` is the weight of
/// class `t` that cluster `j` receives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintMatrix {
    rows: Vec<Vec<u64>>,
}

impl ConstraintMatrix {
    pub fn zeros(k: usize, classes: usize) -> Self {
        ConstraintMatrix {
            rows: vec![vec![0; classes]; k],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::invalid("constraint matrix rows have different lengths"));
        }
        Ok(ConstraintMatrix { rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn num_classes(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    #[inline]
    pub fn get(&self, j: usize, t: usize) -> u64 {
        self.rows[j][t]
    }

    #[inline]
    pub fn set(&mut self, j: usize, t: usize, v: u64) {
        self.rows[j][t] = v;
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Column `t` as a vector over centers.
    pub fn column(&self, t: usize) -> Vec<u64> {
        self.rows.iter().map(|r| r[t]).collect()
    }

    pub fn column_sum(&self, t: usize) -> u64 {
        self.rows.iter().map(|r| r[t]).sum()
    }

    pub fn row_sum(&self, j: usize) -> u64 {
        self.rows[j].iter().sum()
    }
}

/// Sparse integral assignment of point weight to centers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub centers: Vec<Center>,
    pub objective: Objective,
    weights: BTreeMap<(usize, usize), u64>,
}

impl Assignment {
    pub fn new(centers: Vec<Center>, objective: Objective) -> Self {
        Assignment {
            centers,
            objective,
            weights: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }

    /// Adds `w` units of point `p` to center `j`.
    pub fn add(&mut self, p: usize, j: usize, w: u64) {
        assert!(j < self.centers.len(), "center {j} out of range");
        if w > 0 {
            *self.weights.entry((p, j)).or_insert(0) += w;
        }
    }

    pub fn get(&self, p: usize, j: usize) -> u64 {
        self.weights.get(&(p, j)).copied().unwrap_or(0)
    }

    /// `(point, center, weight)` triples in lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.weights.iter().map(|(&(p, j), &w)| (p, j, w))
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Merges another assignment over the same centers.
    pub fn merge(&mut self, other: &Assignment) {
        for (p, j, w) in other.triples() {
            self.add(p, j, w);
        }
    }

    /// Total weight assigned to every center.
    pub fn cluster_masses(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.k()];
        for (_, j, w) in self.triples() {
            m[j] += w;
        }
        m
    }

    /// Total weight leaving every point that appears in the assignment.
    pub fn point_totals(&self) -> BTreeMap<usize, u64> {
        let mut totals = BTreeMap::new();
        for (p, _, w) in self.triples() {
            *totals.entry(p).or_insert(0) += w;
        }
        totals
    }

    /// Checks that every item's weight is routed exactly and nothing else is.
    pub fn check_complete(&self, set: &WeightedSet) -> Result<()> {
        let totals = self.point_totals();
        let mut expected: BTreeMap<usize, u64> = BTreeMap::new();
        for it in set.iter() {
            *expected.entry(it.point).or_insert(0) += it.weight;
        }
        if totals != expected {
            return Err(Error::invalid("assignment does not route every point's weight exactly"));
        }
        Ok(())
    }

    /// Same weights with the centers replaced (e.g. moved into another space).
    pub fn with_centers(&self, centers: Vec<Center>) -> Self {
        assert_eq!(centers.len(), self.centers.len());
        Assignment {
            centers,
            objective: self.objective,
            weights: self.weights.clone(),
        }
    }

    /// Drops centers that receive no weight, renumbering the rest.
    pub fn without_empty_centers(&self) -> Self {
        let masses = self.cluster_masses();
        let mut remap = vec![usize::MAX; self.k()];
        let mut centers = Vec::new();
        for (j, c) in self.centers.iter().enumerate() {
            if masses[j] > 0 {
                remap[j] = centers.len();
                centers.push(c.clone());
            }
        }
        let mut out = Assignment::new(centers, self.objective);
        for (p, j, w) in self.triples() {
            out.add(p, remap[j], w);
        }
        out
    }
}

/// Weighted clustering cost of an assignment: `Σ w·d(p, c)` for median,
/// `Σ w·d(p, c)²` for means.
pub fn clustering_cost(ds: &Dataset, asg: &Assignment) -> f64 {
    asg.triples()
        .map(|(p, j, w)| w as f64 * asg.objective.cost(ds.dist_to(p, &asg.centers[j])))
        .sum()
}

/// Per-class weight routed to every center.
pub fn constraint_matrix_of(asg: &Assignment, ds: &Dataset) -> ConstraintMatrix {
    let mut m = ConstraintMatrix::zeros(asg.k(), ds.num_classes());
    for (p, j, w) in asg.triples() {
        let t = ds.class_of(p);
        m.rows[j][t] += w;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::metric::Metric;

    fn four_points() -> Dataset {
        let metric = Metric::euclidean(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        Dataset::new(metric, vec![vec![0], vec![0], vec![1], vec![1]]).unwrap()
    }

    #[test]
    fn median_and_means_cost_of_one_weighted_point() {
        let metric = Metric::euclidean(vec![vec![0.0]]).unwrap();
        let ds = Dataset::new(metric, vec![vec![0]]).unwrap();
        let mut asg = Assignment::new(vec![Center::Coords(vec![2.0])], Objective::Median);
        asg.add(0, 0, 3);
        assert_eq!(clustering_cost(&ds, &asg), 6.0);
        asg.objective = Objective::Means;
        assert_eq!(clustering_cost(&ds, &asg), 12.0);
    }

    #[test]
    fn empty_assignment_costs_nothing() {
        let ds = four_points();
        let asg = Assignment::new(vec![Center::Point(0)], Objective::Median);
        assert_eq!(clustering_cost(&ds, &asg), 0.0);
    }

    #[test]
    fn all_to_one_center_matrix() {
        let ds = four_points();
        let mut asg = Assignment::new(vec![Center::Point(0), Center::Point(3)], Objective::Median);
        for p in 0..4 {
            asg.add(p, 0, 1);
        }
        let m = constraint_matrix_of(&asg, &ds);
        assert_eq!(m.rows(), &[vec![2, 2], vec![0, 0]]);
    }

    #[test]
    fn balanced_split_matrix() {
        let ds = four_points();
        let mut asg = Assignment::new(vec![Center::Point(0), Center::Point(3)], Objective::Median);
        asg.add(0, 0, 1);
        asg.add(2, 0, 1);
        asg.add(1, 1, 1);
        asg.add(3, 1, 1);
        assert_eq!(constraint_matrix_of(&asg, &ds).rows(), &[vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn split_weighted_point_column() {
        let ds = four_points();
        let mut asg = Assignment::new(vec![Center::Point(0), Center::Point(3)], Objective::Median);
        asg.add(0, 0, 2);
        asg.add(0, 1, 3);
        let m = constraint_matrix_of(&asg, &ds);
        assert_eq!(m.column(0), vec![2, 3]);
        assert_eq!(m.column_sum(0), 5);
    }

    #[test]
    fn completeness_check() {
        let ds = four_points();
        let set = ds.unit_weights();
        let mut asg = Assignment::new(vec![Center::Point(0)], Objective::Median);
        for p in 0..3 {
            asg.add(p, 0, 1);
        }
        assert!(asg.check_complete(&set).is_err());
        asg.add(3, 0, 1);
        assert!(asg.check_complete(&set).is_ok());
    }
}
