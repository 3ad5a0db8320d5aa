//! One-pass merge-and-reduce. Raw points collect in bucket 0; whenever it
//! fills up, it and every lower occupied bucket are compressed into the
//! first empty bucket above them, like incrementing a binary counter.

use std::collections::BTreeMap;

use crate::coreset::{build_coreset, CoresetConfig, Regime};
use crate::error::{Error, Result};
use crate::model::{Dataset, Metric, Objective, WeightedPoint, WeightedSet};
use crate::rng::{self, tag};

/// Tunables of [`StreamState`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StreamConfig {
    /// Divisor `b` of the per-level error `ρ_j = ε/(b(j+1)²)`.
    pub b_c: f64,
    /// Overall failure probability, spread as `λ/m²` over reductions.
    pub lambda: f64,
    /// Fixed bucket capacity, bypassing `⌈Γk²/ε³⌉`.
    pub bucket_size_override: Option<usize>,
    pub coreset: CoresetConfig,
    pub regime: Regime,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            b_c: 8.0,
            lambda: 0.1,
            bucket_size_override: None,
            coreset: CoresetConfig::default(),
            regime: Regime::Metric,
        }
    }
}

/// Error allowed at level `j`.
pub fn error_schedule(epsilon: f64, b_c: f64, j: usize) -> f64 {
    epsilon / (b_c * ((j + 1) * (j + 1)) as f64)
}

/// `Π_{j ≤ levels} (1 + ρ_j) − 1`, the error after composing every level.
pub fn telescoped_error(epsilon: f64, b_c: f64, levels: usize) -> f64 {
    (0..=levels).fold(1.0, |acc, j| acc * (1.0 + error_schedule(epsilon, b_c, j))) - 1.0
}

/// Bucket capacity `⌈Γk²/ε³⌉`.
pub fn bucket_size(classes: usize, k: usize, epsilon: f64) -> usize {
    ((classes * k * k) as f64 / epsilon.powi(3)).ceil().max(1.0) as usize
}

#[derive(Clone, Debug, PartialEq)]
struct Stored {
    coords: Vec<f64>,
    groups: Vec<usize>,
    class: usize,
}

/// State of a stream. Point ids are insertion positions.
#[derive(Clone, Debug, PartialEq)]
pub struct StreamState {
    k: usize,
    epsilon: f64,
    objective: Objective,
    dim: usize,
    num_groups: usize,
    universe: Vec<Vec<usize>>,
    lookup: BTreeMap<Vec<usize>, usize>,
    capacity: usize,
    config: StreamConfig,
    seed: u64,
    /// Points still referenced by some bucket.
    store: BTreeMap<usize, Stored>,
    buckets: Vec<Vec<WeightedPoint>>,
    seen: u64,
}

fn normalize(g: &[usize]) -> Vec<usize> {
    let mut g = g.to_vec();
    g.sort_unstable();
    g.dedup();
    g
}

/// Coreset of a stream prefix over the points it still references.
#[derive(Clone, Debug, PartialEq)]
pub struct StreamSnapshot {
    /// Referenced points, re-indexed from 0.
    pub dataset: Dataset,
    /// Stream id of each point of `dataset`.
    pub ids: Vec<usize>,
    pub set: WeightedSet,
}

impl StreamState {
    /// Opens a stream of `dim`-dimensional points whose group sets must come
    /// from `universe`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k: usize,
        epsilon: f64,
        objective: Objective,
        dim: usize,
        num_groups: usize,
        universe: Vec<Vec<usize>>,
        config: StreamConfig,
        seed: u64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::invalid("epsilon must lie in (0, 1]"));
        }
        let universe: Vec<Vec<usize>> = universe.iter().map(|g| normalize(g)).collect();
        let mut lookup = BTreeMap::new();
        for (t, g) in universe.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::invalid("empty group set in the class universe"));
            }
            if let Some(bad) = g.iter().find(|&&x| x >= num_groups) {
                return Err(Error::invalid(format!("class universe references unknown group {bad}")));
            }
            if lookup.insert(g.clone(), t).is_some() {
                return Err(Error::invalid(format!("group set {g:?} listed twice")));
            }
        }
        let capacity = config
            .bucket_size_override
            .unwrap_or_else(|| bucket_size(universe.len(), k, epsilon))
            .max(1);
        Ok(StreamState {
            k,
            epsilon,
            objective,
            dim,
            num_groups,
            universe,
            lookup,
            capacity,
            config,
            seed,
            store: BTreeMap::new(),
            buckets: vec![Vec::new()],
            seen: 0,
        })
    }

    /// Same stream with a larger class universe; existing classes keep
    /// their group sets and the bucket capacity is recomputed.
    pub fn reopen(mut self, universe: Vec<Vec<usize>>, num_groups: usize) -> Result<Self> {
        if num_groups < self.num_groups {
            return Err(Error::invalid("a reopened stream cannot lose groups"));
        }
        let fresh = StreamState::new(
            self.k,
            self.epsilon,
            self.objective,
            self.dim,
            num_groups,
            universe,
            self.config,
            self.seed,
        )?;
        let mut remap = Vec::with_capacity(self.universe.len());
        for g in &self.universe {
            let t = fresh
                .lookup
                .get(g)
                .ok_or_else(|| Error::invalid(format!("group set {g:?} missing from the new universe")))?;
            remap.push(*t);
        }
        for s in self.store.values_mut() {
            s.class = remap[s.class];
        }
        for b in &mut self.buckets {
            for it in b.iter_mut() {
                it.class = remap[it.class];
            }
        }
        Ok(StreamState {
            store: self.store,
            buckets: self.buckets,
            seen: self.seen,
            ..fresh
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Points inserted so far.
    pub fn seen(&self) -> u64 {
        self.seen
    }

    /// Total weight held by every bucket, lowest level first.
    pub fn bucket_weights(&self) -> Vec<u64> {
        self.buckets
            .iter()
            .map(|b| b.iter().map(|it| it.weight).sum())
            .collect()
    }

    /// Number of points kept in memory.
    pub fn stored_points(&self) -> usize {
        self.store.len()
    }

    /// Appends a point, compressing buckets when the raw bucket fills up.
    pub fn insert(&mut self, coords: Vec<f64>, groups: &[usize]) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::invalid(format!(
                "point has dimension {} (expected {})",
                coords.len(),
                self.dim
            )));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite coordinate"));
        }
        let key = normalize(groups);
        let class = *self.lookup.get(&key).ok_or_else(|| {
            Error::invalid(format!("group set {key:?} is outside the declared class universe"))
        })?;
        let id = self.seen as usize;
        self.seen += 1;
        self.store.insert(
            id,
            Stored {
                coords,
                groups: key,
                class,
            },
        );
        self.buckets[0].push(WeightedPoint {
            point: id,
            class,
            weight: 1,
        });
        if self.buckets[0].len() >= self.capacity {
            self.carry()?;
        }
        Ok(())
    }

    fn carry(&mut self) -> Result<()> {
        let r = (1..self.buckets.len())
            .find(|&j| self.buckets[j].is_empty())
            .unwrap_or(self.buckets.len());
        if r == self.buckets.len() {
            self.buckets.push(Vec::new());
        }
        let merged: Vec<WeightedPoint> = self.buckets[..r].iter_mut().flat_map(std::mem::take).collect();
        let snapshot = self.snapshot_of(&merged)?;
        let m = self.seen as f64;
        let rho = error_schedule(self.epsilon, self.config.b_c, r).min(1.0);
        let config = CoresetConfig {
            delta: Some(self.config.lambda / (m * m)),
            ..self.config.coreset
        };
        let seed = rng::derive(self.seed, &[tag::STREAM, r as u64, self.seen]);
        let c = build_coreset(
            &snapshot.dataset,
            &snapshot.set,
            self.k,
            rho,
            self.objective,
            self.config.regime,
            &config,
            seed,
        )?;
        self.buckets[r] = c
            .set
            .items
            .into_iter()
            .map(|it| WeightedPoint {
                point: snapshot.ids[it.point],
                ..it
            })
            .collect();
        self.release();
        Ok(())
    }

    fn release(&mut self) {
        let mut live = std::collections::BTreeSet::new();
        for b in &self.buckets {
            live.extend(b.iter().map(|it| it.point));
        }
        self.store.retain(|id, _| live.contains(id));
    }

    fn snapshot_of(&self, items: &[WeightedPoint]) -> Result<StreamSnapshot> {
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        for it in items {
            let next = index.len();
            index.entry(it.point).or_insert(next);
        }
        let mut ids = vec![0; index.len()];
        for (&id, &i) in &index {
            ids[i] = id;
        }
        let coords: Vec<Vec<f64>> = ids.iter().map(|id| self.store[id].coords.clone()).collect();
        let groups: Vec<Vec<usize>> = ids.iter().map(|id| self.store[id].groups.clone()).collect();
        let metric = Metric::euclidean(coords)?;
        let dataset = Dataset::with_class_universe(metric, groups, self.num_groups, &self.universe)?;
        let mut merged: BTreeMap<usize, WeightedPoint> = BTreeMap::new();
        for it in items {
            let i = index[&it.point];
            merged
                .entry(i)
                .and_modify(|x| x.weight += it.weight)
                .or_insert(WeightedPoint { point: i, ..*it });
        }
        Ok(StreamSnapshot {
            dataset,
            ids,
            set: merged.into_values().collect(),
        })
    }

    /// Union of all buckets: a coreset of everything inserted so far.
    pub fn coreset(&self) -> Result<StreamSnapshot> {
        let all: Vec<WeightedPoint> = self.buckets.iter().flatten().copied().collect();
        self.snapshot_of(&all)
    }
}

/// Inserts one point; see [`StreamState::insert`].
pub fn stream_insert(state: &mut StreamState, coords: Vec<f64>, groups: &[usize]) -> Result<()> {
    state.insert(coords, groups)
}

/// Current coreset of the stream; see [`StreamState::coreset`].
pub fn stream_coreset(state: &StreamState) -> Result<StreamSnapshot> {
    state.coreset()
}
