//! Combinatorial selection and packing classes.

use super::super::{DrawCtx, GeneratorError, GeneratorSchema, ParamDecl, ParamType, ParamValue};
use crate::model::{Constraint, Expression, ProblemData, Relation, Sense, Term, Variable};

fn decl(
    name: &'static str,
    ptype: ParamType,
    min: f64,
    max: f64,
    default: ParamValue,
    doc: &'static str,
) -> ParamDecl {
    ParamDecl { name, ptype, min, max, default, doc }
}

pub(super) fn knapsack_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "knapsack",
        subclass: "0-1 Knapsack",
        formulation: "max sum(v_i x_i) s.t. sum(w_i x_i) <= C, x_i in {0,1}",
        reference: "Martello & Toth, Knapsack Problems: Algorithms and Computer Implementations (1990)",
        size_parameter: Some("n_items"),
        parameters: vec![
            decl("n_items", ParamType::IntRange, 1.0, 60.0, ParamValue::IntRange(3, 10), "number of items"),
            decl("value_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 50), "per-item value draw"),
            decl("weight_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 50), "per-item weight draw"),
            decl("capacity_ratio", ParamType::RealRange, 0.05, 1.0, ParamValue::RealRange(0.3, 0.7), "capacity as a fraction of total weight"),
        ],
    }
}

pub(super) fn knapsack(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n = ctx.int("n_items");
    let values: Vec<f64> = (0..n).map(|_| ctx.draw_int("value_range") as f64).collect();
    let weights: Vec<f64> = (0..n).map(|_| ctx.draw_int("weight_range") as f64).collect();
    let ratio = ctx.real("capacity_ratio");
    let capacity = (ratio * weights.iter().sum::<f64>()).round().max(1.0);
    ctx.record.insert("capacity".to_string(), format!("{capacity}"));

    let mut pd = ProblemData::new("knapsack", Sense::Maximize);
    for i in 0..n {
        pd.variables.push(Variable::binary(format!("select_{i}")));
    }
    pd.objective = Expression::linear(
        values.iter().enumerate().map(|(i, &v)| (v, format!("select_{i}"))),
    );
    pd.constraints.push(Constraint::new(
        "capacity",
        Expression::linear(weights.iter().enumerate().map(|(i, &w)| (w, format!("select_{i}")))),
        Relation::Le,
        capacity,
    ));
    Ok(pd)
}

pub(super) fn bin_packing_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "bin_packing",
        subclass: "Bin Packing",
        formulation: "min sum(y_j) s.t. sum_i(w_i x_ij) <= c y_j for all j; sum_j(x_ij) = 1 for all i; x, y binary",
        reference: "Garey & Johnson, Approximation Algorithms for Bin Packing Problems: A Survey (1981)",
        size_parameter: Some("n_items"),
        parameters: vec![
            decl("n_items", ParamType::IntRange, 1.0, 30.0, ParamValue::IntRange(3, 10), "number of items (and candidate bins)"),
            decl("weight_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 50), "per-item weight draw"),
            decl("bin_capacity", ParamType::Int, 1.0, 100_000.0, ParamValue::Int(100), "uniform bin capacity"),
        ],
    }
}

pub(super) fn bin_packing(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let capacity = ctx.int("bin_capacity") as f64;
    let n = ctx.int("n_items");
    let weights: Vec<f64> = (0..n).map(|_| ctx.draw_int("weight_range") as f64).collect();
    if weights.iter().any(|&w| w > capacity) {
        return Err(GeneratorError::Config(format!(
            "weight_range admits weights above bin_capacity {capacity}; no packing exists"
        )));
    }

    let mut pd = ProblemData::new("bin_packing", Sense::Minimize);
    for i in 0..n {
        for j in 0..n {
            pd.variables.push(Variable::binary(format!("pack_{i}_{j}")));
        }
    }
    for j in 0..n {
        pd.variables.push(Variable::binary(format!("use_{j}")));
    }
    pd.objective = Expression::linear((0..n).map(|j| (1.0, format!("use_{j}"))));
    for j in 0..n {
        let mut terms: Vec<Term> = (0..n)
            .map(|i| Term::linear(weights[i as usize], format!("pack_{i}_{j}")))
            .collect();
        terms.push(Term::linear(-capacity, format!("use_{j}")));
        pd.constraints.push(Constraint::new(
            format!("capacity_{j}"),
            Expression::from_terms(terms),
            Relation::Le,
            0.0,
        ));
    }
    for i in 0..n {
        pd.constraints.push(Constraint::new(
            format!("assign_{i}"),
            Expression::linear((0..n).map(|j| (1.0, format!("pack_{i}_{j}")))),
            Relation::Eq,
            1.0,
        ));
    }
    Ok(pd)
}

pub(super) fn set_cover_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "set_cover",
        subclass: "Set Cover",
        formulation: "min sum(c_j y_j) s.t. sum_{j: e in S_j}(y_j) >= 1 for all e; y binary",
        reference: "Caprara, Toth & Fischetti, Algorithms for the Set Covering Problem (2000)",
        size_parameter: Some("n_sets"),
        parameters: vec![
            decl("n_elements", ParamType::IntRange, 1.0, 60.0, ParamValue::IntRange(5, 15), "universe size"),
            decl("n_sets", ParamType::IntRange, 1.0, 60.0, ParamValue::IntRange(4, 12), "number of candidate sets"),
            decl("cover_probability", ParamType::RealRange, 0.01, 1.0, ParamValue::RealRange(0.2, 0.5), "membership probability per (element, set)"),
            decl("cost_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 50), "per-set cost draw"),
        ],
    }
}

pub(super) fn set_cover(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n_elements = ctx.int("n_elements");
    let n_sets = ctx.int("n_sets");
    let p = ctx.real("cover_probability");
    let costs: Vec<f64> = (0..n_sets).map(|_| ctx.draw_int("cost_range") as f64).collect();
    let mut members: Vec<Vec<i64>> = vec![Vec::new(); n_sets as usize];
    for e in 0..n_elements {
        let mut covered = false;
        for set in members.iter_mut() {
            if ctx.rng.real_range(0.0, 1.0) < p {
                set.push(e);
                covered = true;
            }
        }
        if !covered {
            // Patch coverage so the instance is feasible by construction.
            let j = ctx.rng.index(n_sets as usize);
            members[j].push(e);
        }
    }

    let mut pd = ProblemData::new("set_cover", Sense::Minimize);
    for j in 0..n_sets {
        pd.variables.push(Variable::binary(format!("pick_{j}")));
    }
    pd.objective =
        Expression::linear(costs.iter().enumerate().map(|(j, &c)| (c, format!("pick_{j}"))));
    for e in 0..n_elements {
        let covering: Vec<(f64, String)> = members
            .iter()
            .enumerate()
            .filter(|(_, set)| set.contains(&e))
            .map(|(j, _)| (1.0, format!("pick_{j}")))
            .collect();
        pd.constraints.push(Constraint::new(
            format!("cover_{e}"),
            Expression::linear(covering),
            Relation::Ge,
            1.0,
        ));
    }
    Ok(pd)
}
