//! Bounded-variable primal simplex, two-phase with artificial variables.
//!
//! Columns are the structural variables, one slack per row, and one
//! artificial per row. Rows are stored as equalities `a'x + s = b` with the
//! slack ranged by the original relation (`<=` gives `s >= 0`, `>=` gives
//! `s <= 0`, `=` pins `s` to zero). Phase 1 minimizes the artificial sum
//! from the all-artificial basis; phase 2 fixes the artificials to zero and
//! minimizes the true cost. The dense basis inverse is updated by the
//! product form each pivot and refactorized periodically. Pricing is
//! Dantzig's rule, switching to Bland's least-index rule after a run of
//! degenerate pivots to rule out cycling.

use crate::model::Relation;

const REDUCED_COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-11;
const REFACTOR_EVERY: usize = 100;

#[derive(Debug, Clone)]
pub(crate) struct SparseRow {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values (meaningful when optimal).
    pub x: Vec<f64>,
    /// Cost value at `x` (minimize orientation, no offset).
    pub objective: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColStatus {
    Basic,
    AtLower,
    AtUpper,
    Free,
}

enum CoreOutcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

struct Tableau {
    nstruct: usize,
    nrows: usize,
    total: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    x: Vec<f64>,
    status: Vec<ColStatus>,
    basis: Vec<usize>,
    /// Dense row-major basis inverse.
    binv: Vec<f64>,
    pivots_since_refactor: usize,
}

/// Solves `min cost'x` over the rows and bounds. `feas_tol` decides phase-1
/// feasibility.
pub(crate) fn solve_lp(
    cost: &[f64],
    lower: &[f64],
    upper: &[f64],
    rows: &[SparseRow],
    feas_tol: f64,
) -> LpSolution {
    let n = cost.len();
    let m = rows.len();
    let total = n + 2 * m;

    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); total];
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in &row.coeffs {
            if v != 0.0 {
                cols[j].push((i, v));
            }
        }
    }
    let mut lo = lower.to_vec();
    let mut up = upper.to_vec();
    for (i, row) in rows.iter().enumerate() {
        cols[n + i].push((i, 1.0));
        match row.relation {
            Relation::Le => {
                lo.push(0.0);
                up.push(f64::INFINITY);
            }
            Relation::Ge => {
                lo.push(f64::NEG_INFINITY);
                up.push(0.0);
            }
            Relation::Eq => {
                lo.push(0.0);
                up.push(0.0);
            }
        }
    }

    // Nonbasic start: structural at the finite bound nearest zero, slacks at
    // zero. Artificials absorb the residual.
    let mut x = vec![0.0; total];
    let mut status = vec![ColStatus::AtLower; total];
    for j in 0..n {
        if lo[j].is_finite() {
            x[j] = lo[j];
            status[j] = ColStatus::AtLower;
        } else if up[j].is_finite() {
            x[j] = up[j];
            status[j] = ColStatus::AtUpper;
        } else {
            x[j] = 0.0;
            status[j] = ColStatus::Free;
        }
    }
    for i in 0..m {
        status[n + i] = match rows[i].relation {
            Relation::Ge => ColStatus::AtUpper,
            _ => ColStatus::AtLower,
        };
        x[n + i] = 0.0;
    }

    let mut residual: Vec<f64> = rows.iter().map(|r| r.rhs).collect();
    for j in 0..n {
        if x[j] != 0.0 {
            for &(i, v) in &cols[j] {
                residual[i] -= v * x[j];
            }
        }
    }
    let mut binv = vec![0.0; m * m];
    let mut basis = vec![0; m];
    for i in 0..m {
        let sigma = if residual[i] >= 0.0 { 1.0 } else { -1.0 };
        cols[n + m + i].push((i, sigma));
        lo.push(0.0);
        up.push(f64::INFINITY);
        x[n + m + i] = residual[i].abs();
        status[n + m + i] = ColStatus::Basic;
        basis[i] = n + m + i;
        binv[i * m + i] = sigma;
    }

    let mut tab = Tableau {
        nstruct: n,
        nrows: m,
        total,
        cols,
        lower: lo,
        upper: up,
        rhs: rows.iter().map(|r| r.rhs).collect(),
        x,
        status,
        basis,
        binv,
        pivots_since_refactor: 0,
    };

    // Phase 1: minimize artificial infeasibility.
    let mut phase1_cost = vec![0.0; total];
    for j in n + m..total {
        phase1_cost[j] = 1.0;
    }
    match tab.optimize(&phase1_cost) {
        CoreOutcome::IterationLimit => {
            return LpSolution { status: LpStatus::IterationLimit, x: vec![0.0; n], objective: 0.0 }
        }
        // Phase 1 cost is bounded below by zero; unboundedness here means a
        // numerical breakdown.
        CoreOutcome::Unbounded => {
            return LpSolution { status: LpStatus::IterationLimit, x: vec![0.0; n], objective: 0.0 }
        }
        CoreOutcome::Optimal => {}
    }
    let infeasibility: f64 = (n + m..total).map(|j| tab.x[j]).sum();
    if infeasibility > feas_tol.max(1e-7) {
        return LpSolution { status: LpStatus::Infeasible, x: vec![0.0; n], objective: 0.0 };
    }

    // Phase 2: pin artificials to zero and minimize the real cost.
    for j in n + m..total {
        tab.upper[j] = 0.0;
        if tab.status[j] != ColStatus::Basic {
            tab.x[j] = 0.0;
            tab.status[j] = ColStatus::AtLower;
        } else {
            tab.x[j] = 0.0;
        }
    }
    let mut phase2_cost = vec![0.0; total];
    phase2_cost[..n].copy_from_slice(cost);
    let status = match tab.optimize(&phase2_cost) {
        CoreOutcome::Optimal => LpStatus::Optimal,
        CoreOutcome::Unbounded => LpStatus::Unbounded,
        CoreOutcome::IterationLimit => LpStatus::IterationLimit,
    };
    let xs: Vec<f64> = tab.x[..n].to_vec();
    let objective = xs.iter().zip(cost).map(|(x, c)| x * c).sum();
    LpSolution { status, x: xs, objective }
}

impl Tableau {
    fn optimize(&mut self, cost: &[f64]) -> CoreOutcome {
        let iteration_cap = 20_000 + 200 * self.total;
        let bland_after = 4 * (self.total + self.nrows);
        let mut degenerate_streak = 0usize;
        let mut bland = false;

        for _ in 0..iteration_cap {
            if self.pivots_since_refactor >= REFACTOR_EVERY {
                if !self.refactor() {
                    return CoreOutcome::IterationLimit;
                }
            }
            let m = self.nrows;

            // y' = c_B' B^-1
            let mut y = vec![0.0; m];
            for i in 0..m {
                let cb = cost[self.basis[i]];
                if cb != 0.0 {
                    let row = &self.binv[i * m..(i + 1) * m];
                    for (k, yk) in y.iter_mut().enumerate() {
                        *yk += cb * row[k];
                    }
                }
            }

            // Pricing.
            let mut entering: Option<(usize, f64, f64)> = None; // (col, |d|, direction)
            for j in 0..self.total {
                if self.status[j] == ColStatus::Basic || self.lower[j] == self.upper[j] {
                    continue;
                }
                let mut d = cost[j];
                for &(i, v) in &self.cols[j] {
                    d -= y[i] * v;
                }
                let direction = match self.status[j] {
                    ColStatus::AtLower if d < -REDUCED_COST_TOL => 1.0,
                    ColStatus::AtUpper if d > REDUCED_COST_TOL => -1.0,
                    ColStatus::Free if d.abs() > REDUCED_COST_TOL => -d.signum(),
                    _ => continue,
                };
                if bland {
                    entering = Some((j, d.abs(), direction));
                    break;
                }
                if entering.as_ref().map(|(_, best, _)| d.abs() > *best).unwrap_or(true) {
                    entering = Some((j, d.abs(), direction));
                }
            }
            let Some((q, _, direction)) = entering else {
                return CoreOutcome::Optimal;
            };

            // w = B^-1 a_q
            let mut w = vec![0.0; m];
            for &(r, v) in &self.cols[q] {
                for i in 0..m {
                    w[i] += self.binv[i * m + r] * v;
                }
            }

            // Ratio test: the entering variable may travel to its opposite
            // bound, or a basic variable hits one of its bounds first. Near
            // ties prefer the larger pivot magnitude.
            let mut step = self.upper[q] - self.lower[q]; // +inf for free/one-sided
            let mut leaving: Option<(usize, ColStatus)> = None;
            let mut leaving_pivot = 0.0f64;
            for i in 0..m {
                let delta = -direction * w[i];
                if delta.abs() <= PIVOT_TOL {
                    continue;
                }
                let k = self.basis[i];
                let (target, side) = if delta > 0.0 {
                    (self.upper[k], ColStatus::AtUpper)
                } else {
                    (self.lower[k], ColStatus::AtLower)
                };
                if !target.is_finite() {
                    continue;
                }
                let ratio = ((target - self.x[k]) / delta).max(0.0);
                let improves = ratio < step - 1e-12
                    || (ratio < step + 1e-12 && delta.abs() > leaving_pivot.abs());
                if improves {
                    step = ratio;
                    leaving = Some((i, side));
                    leaving_pivot = delta;
                }
            }

            if !step.is_finite() {
                return CoreOutcome::Unbounded;
            }
            if step < DEGENERATE_STEP {
                degenerate_streak += 1;
                if degenerate_streak > bland_after {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
                bland = false;
            }

            // Move.
            for i in 0..m {
                let k = self.basis[i];
                self.x[k] += -direction * w[i] * step;
            }
            self.x[q] += direction * step;

            match leaving {
                None => {
                    // Bound flip: the entering variable reached its other bound.
                    self.status[q] =
                        if direction > 0.0 { ColStatus::AtUpper } else { ColStatus::AtLower };
                    self.x[q] =
                        if direction > 0.0 { self.upper[q] } else { self.lower[q] };
                }
                Some((r, side)) => {
                    let out = self.basis[r];
                    self.status[out] = side;
                    self.x[out] = match side {
                        ColStatus::AtUpper => self.upper[out],
                        _ => self.lower[out],
                    };
                    let pivot = w[r];
                    let mrow: Vec<f64> =
                        self.binv[r * m..(r + 1) * m].iter().map(|v| v / pivot).collect();
                    for i in 0..m {
                        if i == r {
                            continue;
                        }
                        let factor = w[i];
                        if factor != 0.0 {
                            for k in 0..m {
                                self.binv[i * m + k] -= factor * mrow[k];
                            }
                        }
                    }
                    self.binv[r * m..(r + 1) * m].copy_from_slice(&mrow);
                    self.basis[r] = q;
                    self.status[q] = ColStatus::Basic;
                    self.pivots_since_refactor += 1;
                }
            }
        }
        CoreOutcome::IterationLimit
    }

    /// Rebuilds the dense basis inverse by Gauss-Jordan elimination with
    /// partial pivoting, then recomputes basic values from scratch.
    fn refactor(&mut self) -> bool {
        let m = self.nrows;
        let mut a = vec![0.0; m * m];
        for (pos, &j) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                a[i * m + pos] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut pivot_row = col;
            let mut best = a[col * m + col].abs();
            for r in col + 1..m {
                if a[r * m + col].abs() > best {
                    best = a[r * m + col].abs();
                    pivot_row = r;
                }
            }
            if best < 1e-12 {
                return false;
            }
            if pivot_row != col {
                for k in 0..m {
                    a.swap(col * m + k, pivot_row * m + k);
                    inv.swap(col * m + k, pivot_row * m + k);
                }
                self.basis.swap(col, pivot_row);
            }
            let p = a[col * m + col];
            for k in 0..m {
                a[col * m + k] /= p;
                inv[col * m + k] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        a[r * m + k] -= f * a[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;

        // x_B = B^-1 (b - N x_N)
        let mut residual = self.rhs.clone();
        let basic: Vec<bool> = {
            let mut b = vec![false; self.total];
            for &j in &self.basis {
                b[j] = true;
            }
            b
        };
        for j in 0..self.total {
            if basic[j] || self.x[j] == 0.0 {
                continue;
            }
            for &(i, v) in &self.cols[j] {
                residual[i] -= v * self.x[j];
            }
        }
        for i in 0..m {
            let mut v = 0.0;
            for k in 0..m {
                v += self.binv[i * m + k] * residual[k];
            }
            self.x[self.basis[i]] = v;
        }
        let _ = self.nstruct;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> SparseRow {
        SparseRow { coeffs, relation, rhs }
    }

    #[test]
    fn maximization_by_negation() {
        // max x + y s.t. x <= 2, y <= 3, x,y >= 0  ->  optimum 5.
        let cost = vec![-1.0, -1.0];
        let lower = vec![0.0, 0.0];
        let upper = vec![f64::INFINITY, f64::INFINITY];
        let rows = vec![
            row(vec![(0, 1.0)], Relation::Le, 2.0),
            row(vec![(1, 1.0)], Relation::Le, 3.0),
        ];
        let sol = solve_lp(&cost, &lower, &upper, &rows, 1e-6);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 5.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
        assert!((sol.x[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        // x >= 1 and x <= 0.
        let cost = vec![1.0];
        let rows = vec![
            row(vec![(0, 1.0)], Relation::Ge, 1.0),
            row(vec![(0, 1.0)], Relation::Le, 0.0),
        ];
        let sol = solve_lp(&cost, &[0.0], &[f64::INFINITY], &rows, 1e-6);
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // min -x, x >= 0 unconstrained above.
        let cost = vec![-1.0];
        let rows = vec![row(vec![(0, 1.0)], Relation::Ge, 0.0)];
        let sol = solve_lp(&cost, &[0.0], &[f64::INFINITY], &rows, 1e-6);
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_free_variables() {
        // min x + 2y s.t. x + y = 4, x - y = 0, both free -> x = y = 2.
        let cost = vec![1.0, 2.0];
        let lower = vec![f64::NEG_INFINITY, f64::NEG_INFINITY];
        let upper = vec![f64::INFINITY, f64::INFINITY];
        let rows = vec![
            row(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 4.0),
            row(vec![(0, 1.0), (1, -1.0)], Relation::Eq, 0.0),
        ];
        let sol = solve_lp(&cost, &lower, &upper, &rows, 1e-6);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 2.0).abs() < 1e-8);
        assert!((sol.x[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn negative_bounds_and_upper_starts() {
        // min x, -5 <= x <= -1 -> -5.
        let sol = solve_lp(&[1.0], &[-5.0], &[-1.0], &[], 1e-6);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] + 5.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_problems_terminate() {
        // Klee-Minty-flavored small instance with heavy degeneracy.
        let n = 6;
        let cost: Vec<f64> = (0..n).map(|i| -(2f64.powi((n - 1 - i) as i32))).collect();
        let mut rows = Vec::new();
        for i in 0..n {
            let mut coeffs = Vec::new();
            for j in 0..i {
                coeffs.push((j, 2f64.powi((i - j + 1) as i32)));
            }
            coeffs.push((i, 1.0));
            rows.push(row(coeffs, Relation::Le, 5f64.powi(i as i32 + 1)));
        }
        let lower = vec![0.0; n];
        let upper = vec![f64::INFINITY; n];
        let sol = solve_lp(&cost, &lower, &upper, &rows, 1e-6);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 5f64.powi(n as i32)).abs() < 1e-6 * 5f64.powi(n as i32));
    }
}
