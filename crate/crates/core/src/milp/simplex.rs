use crate::error::{Error, Result};

const EPS: f64 = 1e-9;
/// Consecutive degenerate pivots after which entering variables are chosen
/// by lowest index, which rules out cycling.
const DEGENERATE_SWITCH: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

/// Sparse constraint row `Σ coeff·x  (≤ | ≥ | =)  rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub kind: RowKind,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, kind: RowKind, rhs: f64) -> Self {
        Row { coeffs, kind, rhs }
    }
}

/// `minimize objective·x` subject to the rows and `x ≥ 0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    a: Vec<f64>,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let inv = 1.0 / self.a[pr * w + pc];
        for c in 0..w {
            self.a[pr * w + c] *= inv;
        }
        self.a[pr * w + pc] = 1.0;
        let (before, rest) = self.a.split_at_mut(pr * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[pc];
            if f != 0.0 {
                for c in 0..w {
                    row[c] -= f * prow[c];
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Reduced costs of `cost` with respect to the current basis.
    fn reduced(&self, cost: &[f64], allowed: &[bool]) -> Vec<f64> {
        let mut d: Vec<f64> = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for c in 0..self.cols {
                    d[c] -= cb * self.at(r, c);
                }
            }
        }
        for c in 0..self.cols {
            if !allowed[c] {
                d[c] = 0.0;
            }
        }
        d
    }

    /// Primal simplex on `cost`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool]) -> bool {
        let mut d = self.reduced(cost, allowed);
        let mut degenerate = 0usize;
        loop {
            let entering = if degenerate >= DEGENERATE_SWITCH {
                (0..self.cols).find(|&c| d[c] < -EPS)
            } else {
                (0..self.cols)
                    .filter(|&c| d[c] < -EPS)
                    .min_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)))
            };
            let Some(pc) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let coef = self.at(r, pc);
                if coef > EPS {
                    let ratio = self.rhs(r) / coef;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - EPS
                                || (ratio <= lratio + EPS && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((pr, ratio)) = leave else { return false };
            if ratio <= EPS {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(pr, pc);
            let f = d[pc];
            for c in 0..self.cols {
                d[c] -= f * self.at(pr, c);
            }
            d[pc] = 0.0;
            for c in 0..self.cols {
                if !allowed[c] {
                    d[c] = 0.0;
                }
            }
        }
    }
}

/// Two-phase primal simplex. Entering columns follow the most negative
/// reduced cost and fall back to Bland's lowest-index rule on stalling;
/// leaving rows use the minimum ratio with lowest-index ties.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.num_vars();
    for (i, row) in lp.rows.iter().enumerate() {
        if !row.rhs.is_finite() {
            return Err(Error::invalid(format!("row {i} has a non-finite bound")));
        }
        for &(v, c) in &row.coeffs {
            if v >= n {
                return Err(Error::invalid(format!("row {i} references variable {v} of {n}")));
            }
            if !c.is_finite() {
                return Err(Error::invalid(format!("row {i} has a non-finite coefficient")));
            }
        }
    }
    if lp.objective.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("non-finite objective coefficient"));
    }

    let m = lp.rows.len();
    // Normalise to non-negative right-hand sides.
    let rows: Vec<(Vec<(usize, f64)>, RowKind, f64)> = lp
        .rows
        .iter()
        .map(|r| {
            if r.rhs < 0.0 {
                let kind = match r.kind {
                    RowKind::Le => RowKind::Ge,
                    RowKind::Ge => RowKind::Le,
                    RowKind::Eq => RowKind::Eq,
                };
                (r.coeffs.iter().map(|&(v, c)| (v, -c)).collect(), kind, -r.rhs)
            } else {
                (r.coeffs.clone(), r.kind, r.rhs)
            }
        })
        .collect();
    let slacks = rows.iter().filter(|r| r.1 != RowKind::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != RowKind::Le).count();
    let cols = n + slacks + artificials;
    let w = cols + 1;
    let mut t = Tableau {
        a: vec![0.0; m * w],
        rows: m,
        cols,
        basis: vec![0; m],
    };
    let mut next_slack = n;
    let mut next_art = n + slacks;
    for (r, (coeffs, kind, rhs)) in rows.iter().enumerate() {
        for &(v, c) in coeffs {
            t.a[r * w + v] += c;
        }
        t.a[r * w + cols] = *rhs;
        match kind {
            RowKind::Le => {
                t.a[r * w + next_slack] = 1.0;
                t.basis[r] = next_slack;
                next_slack += 1;
            }
            RowKind::Ge => {
                t.a[r * w + next_slack] = -1.0;
                next_slack += 1;
                t.a[r * w + next_art] = 1.0;
                t.basis[r] = next_art;
                next_art += 1;
            }
            RowKind::Eq => {
                t.a[r * w + next_art] = 1.0;
                t.basis[r] = next_art;
                next_art += 1;
            }
        }
    }

    let all = vec![true; cols];
    if artificials > 0 {
        let mut phase1 = vec![0.0; cols];
        phase1[n + slacks..].iter_mut().for_each(|c| *c = 1.0);
        t.optimize(&phase1, &all);
        let infeas: f64 = (0..m)
            .filter(|&r| t.basis[r] >= n + slacks)
            .map(|r| t.rhs(r))
            .sum();
        let scale = 1.0 + rows.iter().map(|r| r.2).fold(0.0, f64::max);
        if infeas > 1e-7 * scale {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= n + slacks {
                if let Some(c) = (0..n + slacks).find(|&c| t.at(r, c).abs() > 1e-7) {
                    t.pivot(r, c);
                }
            }
        }
    }
    let mut allowed = vec![true; cols];
    allowed[n + slacks..].iter_mut().for_each(|a| *a = false);
    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(&lp.objective);
    if !t.optimize(&cost, &allowed) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r).max(0.0);
        }
    }
    let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    Ok(LpOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(o: &LpOutcome) -> f64 {
        match o {
            LpOutcome::Optimal { value, .. } => *value,
            other => panic!("not optimal: {other:?}"),
        }
    }

    #[test]
    fn single_lower_bound() {
        let mut lp = LinearProgram::new(1);
        lp.objective[0] = 1.0;
        lp.push(Row::new(vec![(0, 1.0)], RowKind::Ge, 3.0));
        assert!((value(&simplex_solve(&lp).unwrap()) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds() {
        let mut lp = LinearProgram::new(1);
        lp.push(Row::new(vec![(0, 1.0)], RowKind::Le, 0.0));
        lp.push(Row::new(vec![(0, 1.0)], RowKind::Ge, 1.0));
        assert_eq!(simplex_solve(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-1.0, 0.0];
        lp.push(Row::new(vec![(0, 1.0), (1, -1.0)], RowKind::Le, 1.0));
        assert_eq!(simplex_solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn small_transport() {
        // Two sources (2, 1) and two sinks (1, 2); costs 1 4 / 3 1.
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![1.0, 4.0, 3.0, 1.0];
        lp.push(Row::new(vec![(0, 1.0), (1, 1.0)], RowKind::Eq, 2.0));
        lp.push(Row::new(vec![(2, 1.0), (3, 1.0)], RowKind::Eq, 1.0));
        lp.push(Row::new(vec![(0, 1.0), (2, 1.0)], RowKind::Eq, 1.0));
        lp.push(Row::new(vec![(1, 1.0), (3, 1.0)], RowKind::Eq, 2.0));
        // x = (1, 1, 0, 1): 1 + 4 + 1 = 6.
        assert!((value(&simplex_solve(&lp).unwrap()) - 6.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_rows() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![1.0, 1.0];
        lp.push(Row::new(vec![(0, -1.0), (1, -1.0)], RowKind::Le, -4.0));
        lp.push(Row::new(vec![(0, 1.0)], RowKind::Le, 1.0));
        assert!((value(&simplex_solve(&lp).unwrap()) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn bad_index_rejected() {
        let mut lp = LinearProgram::new(1);
        lp.push(Row::new(vec![(3, 1.0)], RowKind::Le, 1.0));
        assert!(simplex_solve(&lp).is_err());
    }
}
