use serde::{Deserialize, Serialize};

/// A point of an instance carried with a positive integer weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub point: usize,
    pub class: usize,
    pub weight: u64,
}

/// Weighted point set, typically a coreset of a [`Dataset`](crate::Dataset).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSet {
    pub items: Vec<WeightedPoint>,
}

impl WeightedSet {
    pub fn new(items: Vec<WeightedPoint>) -> Self {
        WeightedSet { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.items.iter().map(|it| it.weight).sum()
    }

    /// Total weight per class; classes beyond the largest id seen are zero.
    pub fn class_weights(&self, num_classes: usize) -> Vec<u64> {
        let mut w = vec![0u64; num_classes];
        for it in &self.items {
            if it.class >= w.len() {
                w.resize(it.class + 1, 0);
            }
            w[it.class] += it.weight;
        }
        w
    }

    /// Items belonging to class `t`.
    pub fn class_items(&self, t: usize) -> impl Iterator<Item = &WeightedPoint> {
        self.items.iter().filter(move |it| it.class == t)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WeightedPoint> {
        self.items.iter()
    }
}

impl FromIterator<WeightedPoint> for WeightedSet {
    fn from_iter<I: IntoIterator<Item = WeightedPoint>>(iter: I) -> Self {
        WeightedSet::new(iter.into_iter().collect())
    }
}
