use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::assignment::{Assignment, ConstraintMatrix};
use crate::model::dataset::Dataset;

/// Per-group upper (`alpha`) and lower (`beta`) bounds on the fraction of a
/// cluster that may belong to each group. Stored as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessSpec {
    alpha: Vec<Ratio<i64>>,
    beta: Vec<Ratio<i64>>,
}

fn to_ratio(x: f64) -> Result<Ratio<i64>> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("fairness bound {x} outside [0, 1]")));
    }
    Ratio::approximate_float(x).ok_or_else(|| Error::invalid(format!("cannot represent {x}")))
}

/// Parses `0.5`, `1/3` or `1`.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| Error::invalid(format!("bad ratio `{s}`")))?;
        let den: i64 = den.trim().parse().map_err(|_| Error::invalid(format!("bad ratio `{s}`")))?;
        if den <= 0 || num < 0 || num > den {
            return Err(Error::invalid(format!("ratio `{s}` outside [0, 1]")));
        }
        Ok(Ratio::new(num, den))
    } else {
        let x: f64 = s.parse().map_err(|_| Error::invalid(format!("bad number `{s}`")))?;
        to_ratio(x)
    }
}

impl FairnessSpec {
    pub fn new(alpha: Vec<Ratio<i64>>, beta: Vec<Ratio<i64>>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::invalid("alpha and beta have different lengths"));
        }
        let zero = Ratio::from_integer(0);
        let one = Ratio::from_integer(1);
        for (i, (a, b)) in alpha.iter().zip(&beta).enumerate() {
            if *a < zero || *a > one || *b < zero || *b > one {
                return Err(Error::invalid(format!("group {i}: bounds outside [0, 1]")));
            }
            if b > a {
                return Err(Error::invalid(format!("group {i}: beta exceeds alpha")));
            }
        }
        Ok(FairnessSpec { alpha, beta })
    }

    pub fn from_f64(alpha: &[f64], beta: &[f64]) -> Result<Self> {
        let alpha = alpha.iter().map(|&x| to_ratio(x)).collect::<Result<Vec<_>>>()?;
        let beta = beta.iter().map(|&x| to_ratio(x)).collect::<Result<Vec<_>>>()?;
        Self::new(alpha, beta)
    }

    /// `alpha = 1`, `beta = 0` for every group: no constraint at all.
    pub fn unconstrained(num_groups: usize) -> Self {
        FairnessSpec {
            alpha: vec![Ratio::from_integer(1); num_groups],
            beta: vec![Ratio::from_integer(0); num_groups],
        }
    }

    /// At most a `1/l` fraction of every cluster may share a group.
    pub fn diversity(num_groups: usize, l: i64) -> Result<Self> {
        if l < 1 {
            return Err(Error::invalid("diversity parameter must be at least 1"));
        }
        Self::new(
            vec![Ratio::new(1, l); num_groups],
            vec![Ratio::from_integer(0); num_groups],
        )
    }

    /// Bounds equal to each group's share of the whole dataset, widened by
    /// `slack` (relative) on both sides.
    pub fn proportional(ds: &Dataset, slack: f64) -> Result<Self> {
        let n = ds.len() as f64;
        let mut counts = vec![0usize; ds.num_groups()];
        for p in 0..ds.len() {
            for &g in ds.groups_of(p) {
                counts[g] += 1;
            }
        }
        let alpha: Vec<f64> = counts.iter().map(|&c| (c as f64 / n * (1.0 + slack)).min(1.0)).collect();
        let beta: Vec<f64> = counts.iter().map(|&c| (c as f64 / n * (1.0 - slack)).max(0.0)).collect();
        Self::from_f64(&alpha, &beta)
    }

    pub fn num_groups(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self, i: usize) -> Ratio<i64> {
        self.alpha[i]
    }

    pub fn beta(&self, i: usize) -> Ratio<i64> {
        self.beta[i]
    }

    pub fn alpha_f64(&self, i: usize) -> f64 {
        ratio_f64(self.alpha[i])
    }

    pub fn beta_f64(&self, i: usize) -> f64 {
        ratio_f64(self.beta[i])
    }

    /// Group `i` imposes no constraint at all.
    pub fn is_vacuous(&self, i: usize) -> bool {
        *self.alpha[i].numer() == *self.alpha[i].denom() && *self.beta[i].numer() == 0
    }

    /// Checks `beta_i·total ≤ group ≤ alpha_i·total` exactly.
    pub fn check(&self, i: usize, group_mass: u64, total: u64) -> Option<ViolationKind> {
        let g = group_mass as i128;
        let tot = total as i128;
        let (an, ad) = (*self.alpha[i].numer() as i128, *self.alpha[i].denom() as i128);
        let (bn, bd) = (*self.beta[i].numer() as i128, *self.beta[i].denom() as i128);
        if g * ad > an * tot {
            Some(ViolationKind::AboveAlpha)
        } else if g * bd < bn * tot {
            Some(ViolationKind::BelowBeta)
        } else {
            None
        }
    }

    pub fn alphas(&self) -> &[Ratio<i64>] {
        &self.alpha
    }

    pub fn betas(&self) -> &[Ratio<i64>] {
        &self.beta
    }

    pub(crate) fn check_groups(&self, ds: &Dataset) -> Result<()> {
        if self.num_groups() != ds.num_groups() {
            return Err(Error::invalid(format!(
                "fairness spec has {} groups but the dataset has {}",
                self.num_groups(),
                ds.num_groups()
            )));
        }
        Ok(())
    }
}

pub fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Which side of a fairness bound was crossed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    AboveAlpha,
    BelowBeta,
}

/// A (center, group) pair whose cluster composition breaks the spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub center: usize,
    pub group: usize,
    pub group_mass: u64,
    pub cluster_mass: u64,
    pub kind: ViolationKind,
}

/// Lists every fairness violation of `asg`. Empty clusters never violate.
pub fn fairness_check(asg: &Assignment, ds: &Dataset, spec: &FairnessSpec) -> Vec<Violation> {
    let k = asg.k();
    let l = ds.num_groups();
    let mut group_mass = vec![vec![0u64; l]; k];
    let mut cluster_mass = vec![0u64; k];
    for (p, j, w) in asg.triples() {
        cluster_mass[j] += w;
        for &g in ds.groups_of(p) {
            group_mass[j][g] += w;
        }
    }
    let mut out = Vec::new();
    for j in 0..k {
        if cluster_mass[j] == 0 {
            continue;
        }
        for g in 0..l.min(spec.num_groups()) {
            if let Some(kind) = spec.check(g, group_mass[j][g], cluster_mass[j]) {
                out.push(Violation {
                    center: j,
                    group: g,
                    group_mass: group_mass[j][g],
                    cluster_mass: cluster_mass[j],
                    kind,
                });
            }
        }
    }
    out
}

/// Fairness evaluated from class sums alone: group `q` in cluster `j` has
/// mass `Σ_{t: q ∈ I_t} M[j][t]` out of `Σ_t M[j][t]`.
pub fn matrix_violations(
    m: &ConstraintMatrix,
    class_groups: &[Vec<usize>],
    spec: &FairnessSpec,
) -> Vec<Violation> {
    let l = spec.num_groups();
    let mut out = Vec::new();
    for j in 0..m.k() {
        let total = m.row_sum(j);
        if total == 0 {
            continue;
        }
        let mut group_mass = vec![0u64; l];
        for (t, groups) in class_groups.iter().enumerate() {
            for &g in groups {
                group_mass[g] += m.get(j, t);
            }
        }
        for (g, &mass) in group_mass.iter().enumerate() {
            if let Some(kind) = spec.check(g, mass, total) {
                out.push(Violation {
                    center: j,
                    group: g,
                    group_mass: mass,
                    cluster_mass: total,
                    kind,
                });
            }
        }
    }
    out
}
