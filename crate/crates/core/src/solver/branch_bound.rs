//! Best-first branch and bound over the simplex relaxation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::time::Instant;

use super::simplex::{solve_lp, LpStatus, SparseRow};
use super::{SolveOutcome, SolveStatus, SolverLimits};
use crate::model::{ProblemData, Relation, Sense};

struct IndicatorRow {
    guard_col: usize,
    activation: f64,
    row: SparseRow,
}

struct MilpForm {
    names: Vec<String>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Minimize orientation; `sign` restores the user objective.
    cost: Vec<f64>,
    offset: f64,
    sign: f64,
    linear_rows: Vec<SparseRow>,
    indicator_rows: Vec<IndicatorRow>,
    int_cols: Vec<usize>,
}

fn extract(pd: &ProblemData) -> MilpForm {
    let index = pd.variable_index();
    let sign = match pd.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cost = vec![0.0; pd.variables.len()];
    let mut offset = 0.0;
    for t in &pd.objective.terms {
        if t.is_constant() {
            offset += t.coeff;
        } else {
            cost[index[t.factors[0].var.as_str()]] += sign * t.coeff;
        }
    }
    let to_row = |c: &crate::model::Constraint| {
        let mut coeffs: Vec<(usize, f64)> = Vec::with_capacity(c.body.terms.len());
        let mut rhs = c.rhs;
        for t in &c.body.terms {
            if t.is_constant() {
                rhs -= t.coeff;
            } else {
                coeffs.push((index[t.factors[0].var.as_str()], t.coeff));
            }
        }
        SparseRow { coeffs, relation: c.relation, rhs }
    };
    let mut linear_rows = Vec::new();
    let mut indicator_rows = Vec::new();
    for c in &pd.constraints {
        match &c.guard {
            None => linear_rows.push(to_row(c)),
            Some(g) => indicator_rows.push(IndicatorRow {
                guard_col: index[g.var.as_str()],
                activation: f64::from(g.value),
                row: to_row(c),
            }),
        }
    }
    MilpForm {
        names: pd.variables.iter().map(|v| v.name.clone()).collect(),
        lower: pd.variables.iter().map(|v| v.lower).collect(),
        upper: pd.variables.iter().map(|v| v.upper).collect(),
        cost,
        offset: sign * offset,
        sign,
        linear_rows,
        indicator_rows,
        int_cols: pd
            .variables
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_integral())
            .map(|(i, _)| i)
            .collect(),
    }
}

struct Node {
    lower: Vec<f64>,
    upper: Vec<f64>,
    bound: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap; reverse to pop the lowest bound first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.partial_cmp(&self.bound).unwrap_or(Ordering::Equal)
    }
}

fn guard_fixed_active(node_lower: &[f64], node_upper: &[f64], ind: &IndicatorRow) -> bool {
    node_lower[ind.guard_col] == node_upper[ind.guard_col]
        && node_lower[ind.guard_col] == ind.activation
}

fn row_violation(row: &SparseRow, x: &[f64]) -> f64 {
    let lhs: f64 = row.coeffs.iter().map(|&(j, v)| v * x[j]).sum();
    match row.relation {
        Relation::Le => lhs - row.rhs,
        Relation::Ge => row.rhs - lhs,
        Relation::Eq => (lhs - row.rhs).abs(),
    }
}

pub(super) fn solve(pd: &ProblemData, limits: &SolverLimits, started: Instant) -> SolveOutcome {
    let form = extract(pd);
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    heap.push(Node {
        lower: form.lower.clone(),
        upper: form.upper.clone(),
        bound: f64::NEG_INFINITY,
    });

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut nodes = 0usize;
    let mut limit_hit: Option<&str> = None;

    while let Some(node) = heap.pop() {
        if let Some((best, _)) = &incumbent {
            if node.bound >= best - 1e-9 {
                continue;
            }
        }
        if started.elapsed().as_secs_f64() > limits.time_limit {
            limit_hit = Some("time limit reached");
            heap.push(node);
            break;
        }
        if nodes >= limits.node_limit {
            limit_hit = Some("node limit reached");
            heap.push(node);
            break;
        }
        nodes += 1;

        let mut rows: Vec<SparseRow> = form.linear_rows.clone();
        for ind in &form.indicator_rows {
            if guard_fixed_active(&node.lower, &node.upper, ind) {
                rows.push(ind.row.clone());
            }
        }
        let lp = solve_lp(&form.cost, &node.lower, &node.upper, &rows, limits.feasibility_tol);
        match lp.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                // An unbounded relaxation at any node means the instance has
                // no finite optimum to report.
                let mut out = SolveOutcome::bare(SolveStatus::Unbounded);
                out.note = Some("lp relaxation is unbounded".to_string());
                return out;
            }
            LpStatus::IterationLimit => {
                let mut out = SolveOutcome::bare(SolveStatus::Error);
                out.note = Some("simplex iteration limit; possible numerical trouble".to_string());
                return out;
            }
            LpStatus::Optimal => {}
        }
        if let Some((best, _)) = &incumbent {
            if lp.objective >= best - 1e-9 {
                continue;
            }
        }

        // Most fractional integer variable, if any.
        let fractional = form
            .int_cols
            .iter()
            .copied()
            .filter_map(|j| {
                let f = lp.x[j] - lp.x[j].floor();
                let dist = f.min(1.0 - f);
                (dist > limits.integrality_tol).then_some((j, dist))
            })
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));

        if let Some((j, _)) = fractional {
            let split = lp.x[j];
            let mut down = Node { lower: node.lower.clone(), upper: node.upper.clone(), bound: lp.objective };
            down.upper[j] = split.floor();
            if down.lower[j] <= down.upper[j] {
                heap.push(down);
            }
            let mut up = Node { lower: node.lower, upper: node.upper, bound: lp.objective };
            up.lower[j] = split.ceil();
            if up.lower[j] <= up.upper[j] {
                heap.push(up);
            }
            continue;
        }

        // Integral point: enforce any indicator row whose guard rounds to its
        // activation value but was never fixed by branching.
        let violated = form.indicator_rows.iter().find(|ind| {
            !guard_fixed_active(&node.lower, &node.upper, ind)
                && (lp.x[ind.guard_col] - ind.activation).abs() < 0.5
                && row_violation(&ind.row, &lp.x)
                    > limits.feasibility_tol * (1.0 + ind.row.rhs.abs())
        });
        if let Some(ind) = violated {
            let g = ind.guard_col;
            let mut enforce = Node { lower: node.lower.clone(), upper: node.upper.clone(), bound: lp.objective };
            enforce.lower[g] = ind.activation;
            enforce.upper[g] = ind.activation;
            heap.push(enforce);
            let opposite = 1.0 - ind.activation;
            let mut avoid = Node { lower: node.lower, upper: node.upper, bound: lp.objective };
            avoid.lower[g] = opposite;
            avoid.upper[g] = opposite;
            heap.push(avoid);
            continue;
        }

        // Candidate incumbent: snap integers exactly and recompute the value.
        let mut x = lp.x.clone();
        for &j in &form.int_cols {
            x[j] = x[j].round();
            if x[j] == 0.0 {
                x[j] = 0.0; // normalize -0.0
            }
        }
        let value: f64 = x.iter().zip(&form.cost).map(|(x, c)| x * c).sum();
        if incumbent.as_ref().map(|(best, _)| value < best - 1e-9).unwrap_or(true) {
            incumbent = Some((value, x));
        }
    }

    match (incumbent, limit_hit) {
        (Some((value, x)), None) => {
            let solution: BTreeMap<String, f64> =
                form.names.iter().cloned().zip(x.iter().copied()).collect();
            SolveOutcome {
                status: SolveStatus::Optimal,
                objective: Some(form.sign * (value + form.offset)),
                solve_time: 0.0,
                solution: Some(solution),
                best_bound: None,
                note: None,
            }
        }
        (_, Some(reason)) => {
            let queue_bound = heap
                .iter()
                .map(|node| node.bound)
                .fold(f64::INFINITY, f64::min);
            let mut out = SolveOutcome::bare(SolveStatus::TimeLimit);
            out.best_bound = queue_bound
                .is_finite()
                .then_some(form.sign * (queue_bound + form.offset));
            out.note = Some(reason.to_string());
            out
        }
        (None, None) => SolveOutcome::bare(SolveStatus::Infeasible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraint, Expression, Variable};
    use crate::solver::solve_builtin;

    fn knapsack() -> ProblemData {
        let mut pd = ProblemData::new("knap", Sense::Maximize);
        for name in ["x1", "x2", "x3"] {
            pd.variables.push(Variable::binary(name));
        }
        pd.objective = Expression::linear(vec![(6.0, "x1"), (10.0, "x2"), (12.0, "x3")]);
        pd.constraints.push(Constraint::new(
            "cap",
            Expression::linear(vec![(1.0, "x1"), (2.0, "x2"), (3.0, "x3")]),
            Relation::Le,
            5.0,
        ));
        pd
    }

    #[test]
    fn knapsack_optimum_is_22() {
        let out = solve_builtin(&knapsack(), &SolverLimits::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert!((out.objective.unwrap() - 22.0).abs() < 1e-9);
        let sol = out.solution.unwrap();
        assert_eq!(sol["x1"], 0.0);
        assert_eq!(sol["x2"], 1.0);
        assert_eq!(sol["x3"], 1.0);
    }

    #[test]
    fn lp_bound_stacking() {
        let mut pd = ProblemData::new("lp", Sense::Maximize);
        pd.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        pd.variables.push(Variable::continuous("y", 0.0, f64::INFINITY));
        pd.objective = Expression::linear(vec![(1.0, "x"), (1.0, "y")]);
        pd.constraints.push(Constraint::new("cx", Expression::linear(vec![(1.0, "x")]), Relation::Le, 2.0));
        pd.constraints.push(Constraint::new("cy", Expression::linear(vec![(1.0, "y")]), Relation::Le, 3.0));
        let out = solve_builtin(&pd, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert!((out.objective.unwrap() - 5.0).abs() < 1e-9);
        // Returned point satisfies every constraint.
        let sol = out.solution.unwrap();
        for c in &pd.constraints {
            assert!(c.satisfied_by(&sol, 1e-6));
        }
    }

    #[test]
    fn infeasible_box() {
        let mut pd = ProblemData::new("inf", Sense::Minimize);
        pd.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        pd.objective = Expression::linear(vec![(1.0, "x")]);
        pd.constraints.push(Constraint::new("lo", Expression::linear(vec![(1.0, "x")]), Relation::Ge, 1.0));
        pd.constraints.push(Constraint::new("hi", Expression::linear(vec![(1.0, "x")]), Relation::Le, 0.0));
        let out = solve_builtin(&pd, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Infeasible);
        assert!(out.objective.is_none() && out.solution.is_none());
    }

    #[test]
    fn indicator_constraints_enforced() {
        // min x + 4 y; x >= 7 when y = 0; x free to be 0 when y = 1.
        let mut pd = ProblemData::new("ind", Sense::Minimize);
        pd.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        pd.variables.push(Variable::binary("y"));
        pd.objective = Expression::linear(vec![(1.0, "x"), (4.0, "y")]);
        pd.constraints.push(
            Constraint::new("floor", Expression::linear(vec![(1.0, "x")]), Relation::Ge, 7.0)
                .with_guard("y", 0),
        );
        let out = solve_builtin(&pd, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        // Either pay 7 in x (y=0) or pay 4 to disable the floor (y=1).
        assert!((out.objective.unwrap() - 4.0).abs() < 1e-9);
        let sol = out.solution.unwrap();
        assert_eq!(sol["y"], 1.0);

        // Flip the price so honoring the floor wins.
        let mut pd2 = pd.clone();
        pd2.objective = Expression::linear(vec![(1.0, "x"), (40.0, "y")]);
        let out2 = solve_builtin(&pd2, &SolverLimits::default()).unwrap();
        assert!((out2.objective.unwrap() - 7.0).abs() < 1e-9);
        assert_eq!(out2.solution.unwrap()["y"], 0.0);
    }

    #[test]
    fn node_limit_reports_time_limit_status_with_bound() {
        let mut pd = knapsack();
        pd.constraints.push(Constraint::new(
            "tight",
            Expression::linear(vec![(1.0, "x1"), (1.0, "x2"), (1.0, "x3")]),
            Relation::Le,
            2.0,
        ));
        let limits = SolverLimits { node_limit: 1, ..Default::default() };
        let out = solve_builtin(&pd, &limits).unwrap();
        assert_eq!(out.status, SolveStatus::TimeLimit);
        assert!(out.objective.is_none());
    }

    #[test]
    fn integer_variables_with_finite_bounds() {
        // max 3a + 2b, 2a + b <= 7, a,b integer in [0, 4].
        let mut pd = ProblemData::new("int", Sense::Maximize);
        pd.variables.push(Variable::integer("a", 0.0, 4.0));
        pd.variables.push(Variable::integer("b", 0.0, 4.0));
        pd.objective = Expression::linear(vec![(3.0, "a"), (2.0, "b")]);
        pd.constraints.push(Constraint::new(
            "c",
            Expression::linear(vec![(2.0, "a"), (1.0, "b")]),
            Relation::Le,
            7.0,
        ));
        let out = solve_builtin(&pd, &SolverLimits::default()).unwrap();
        // Enumeration: a=2,b=3 gives 12; a=3,b=1 and a=1,b=4 give 11.
        assert!((out.objective.unwrap() - 12.0).abs() < 1e-9);
    }
}
