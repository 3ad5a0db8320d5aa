use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::metric::{Center, Metric};
use crate::model::weighted::{WeightedPoint, WeightedSet};

/// Equivalence classes of points that share the same set of groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClasses {
    /// Class id of every point, in `[0, class_groups.len())`.
    pub class_index: Vec<usize>,
    /// Sorted group ids of every class.
    pub class_groups: Vec<Vec<usize>>,
}

/// Groups points by their (sorted, deduplicated) group sets. Class ids are
/// handed out in order of first appearance.
pub fn build_equivalence_classes(groups: &[Vec<usize>]) -> Result<EquivalenceClasses> {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut class_groups = Vec::new();
    let mut class_index = Vec::with_capacity(groups.len());
    for (p, g) in groups.iter().enumerate() {
        let key = normalize(g);
        if key.is_empty() {
            return Err(Error::invalid(format!("point {p} belongs to no group")));
        }
        let next = class_groups.len();
        let id = *ids.entry(key.clone()).or_insert_with(|| {
            class_groups.push(key);
            next
        });
        class_index.push(id);
    }
    Ok(EquivalenceClasses {
        class_index,
        class_groups,
    })
}

fn normalize(g: &[usize]) -> Vec<usize> {
    let mut key = g.to_vec();
    key.sort_unstable();
    key.dedup();
    key
}

/// Points of an instance together with their group structure.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    metric: Metric,
    groups: Vec<Vec<usize>>,
    num_groups: usize,
    classes: EquivalenceClasses,
    candidates: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset; the number of groups is one past the largest group id.
    pub fn new(metric: Metric, groups: Vec<Vec<usize>>) -> Result<Self> {
        let num_groups = groups.iter().flatten().max().map_or(0, |g| g + 1);
        Self::with_num_groups(metric, groups, num_groups)
    }

    pub fn with_num_groups(metric: Metric, groups: Vec<Vec<usize>>, num_groups: usize) -> Result<Self> {
        Self::check_groups(&metric, &groups, num_groups)?;
        let groups: Vec<Vec<usize>> = groups.iter().map(|g| normalize(g)).collect();
        let classes = build_equivalence_classes(&groups)?;
        let candidates = (0..metric.len()).collect();
        Ok(Dataset {
            metric,
            groups,
            num_groups,
            classes,
            candidates,
        })
    }

    /// Builds a dataset whose class ids follow a fixed universe of group
    /// sets instead of order of appearance.
    pub fn with_class_universe(
        metric: Metric,
        groups: Vec<Vec<usize>>,
        num_groups: usize,
        universe: &[Vec<usize>],
    ) -> Result<Self> {
        Self::check_groups(&metric, &groups, num_groups)?;
        let universe: Vec<Vec<usize>> = universe.iter().map(|g| normalize(g)).collect();
        let lookup: HashMap<&[usize], usize> = universe
            .iter()
            .enumerate()
            .map(|(t, g)| (g.as_slice(), t))
            .collect();
        let groups: Vec<Vec<usize>> = groups.iter().map(|g| normalize(g)).collect();
        let mut class_index = Vec::with_capacity(groups.len());
        for (p, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::invalid(format!("point {p} belongs to no group")));
            }
            let t = lookup.get(g.as_slice()).ok_or_else(|| {
                Error::invalid(format!("point {p} has group set {g:?} outside the class universe"))
            })?;
            class_index.push(*t);
        }
        let candidates = (0..metric.len()).collect();
        Ok(Dataset {
            metric,
            groups,
            num_groups,
            classes: EquivalenceClasses {
                class_index,
                class_groups: universe,
            },
            candidates,
        })
    }

    fn check_groups(metric: &Metric, groups: &[Vec<usize>], num_groups: usize) -> Result<()> {
        if groups.len() != metric.len() {
            return Err(Error::invalid(format!(
                "{} group lists for {} points",
                groups.len(),
                metric.len()
            )));
        }
        for (p, g) in groups.iter().enumerate() {
            if let Some(bad) = g.iter().find(|&&x| x >= num_groups) {
                return Err(Error::invalid(format!(
                    "point {p} references unknown group {bad} (only {num_groups} groups)"
                )));
            }
        }
        Ok(())
    }

    /// Restricts candidate centers to the given point indices.
    pub fn with_candidate_centers(mut self, candidates: Vec<usize>) -> Result<Self> {
        if let Some(bad) = candidates.iter().find(|&&c| c >= self.metric.len()) {
            return Err(Error::invalid(format!("candidate center {bad} out of range")));
        }
        if candidates.is_empty() {
            return Err(Error::invalid("candidate center list is empty"));
        }
        self.candidates = candidates;
        Ok(self)
    }

    /// Same points and groups over a different metric of equal size.
    pub fn with_metric(&self, metric: Metric) -> Result<Self> {
        if metric.len() != self.metric.len() {
            return Err(Error::invalid("replacement metric has a different number of points"));
        }
        Ok(Dataset {
            metric,
            ..self.clone()
        })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }

    pub fn num_groups(&self) -> usize {
        self.num_groups
    }

    pub fn num_classes(&self) -> usize {
        self.classes.class_groups.len()
    }

    pub fn groups_of(&self, p: usize) -> &[usize] {
        &self.groups[p]
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn class_of(&self, p: usize) -> usize {
        self.classes.class_index[p]
    }

    pub fn class_index(&self) -> &[usize] {
        &self.classes.class_index
    }

    pub fn class_groups(&self) -> &[Vec<usize>] {
        &self.classes.class_groups
    }

    pub fn candidate_centers(&self) -> &[usize] {
        &self.candidates
    }

    /// Number of points in every class.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.num_classes()];
        for &t in &self.classes.class_index {
            sizes[t] += 1;
        }
        sizes
    }

    /// Every point with weight one.
    pub fn unit_weights(&self) -> WeightedSet {
        WeightedSet::new(
            (0..self.len())
                .map(|p| WeightedPoint {
                    point: p,
                    class: self.class_of(p),
                    weight: 1,
                })
                .collect(),
        )
    }

    /// True when every point belongs to exactly one group.
    pub fn groups_disjoint(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.metric.dist(a, b)
    }

    #[inline]
    pub fn dist_to(&self, p: usize, c: &Center) -> f64 {
        self.metric.dist_to(p, c)
    }
}
