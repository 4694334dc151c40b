//! Production and location planning classes.

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

pub(super) fn cflp_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "capacitated_facility_location",
        subclass: "Capacitated Facility Location",
        formulation: "min sum(f_i y_i) + sum(c_ij x_ij) s.t. sum_i(x_ij) = d_j; sum_j(x_ij) <= cap_i y_i; y binary, x >= 0",
        reference: "Daskin, Network and Discrete Location (1995)",
        size_parameter: Some("n_customers"),
        parameters: vec![
            decl("n_facilities", ParamType::IntRange, 1.0, 20.0, ParamValue::IntRange(2, 5), "candidate sites"),
            decl("n_customers", ParamType::IntRange, 1.0, 40.0, ParamValue::IntRange(3, 8), "demand points"),
            decl("demand_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(5, 30), "per-customer demand draw"),
            decl("capacity_range", ParamType::IntRange, 1.0, 100_000.0, ParamValue::IntRange(30, 80), "per-site capacity draw"),
            decl("open_cost_range", ParamType::IntRange, 0.0, 100_000.0, ParamValue::IntRange(50, 200), "fixed opening cost draw"),
            decl("ship_cost_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 20), "unit shipping cost draw"),
        ],
    }
}

pub(super) fn cflp(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n_fac = ctx.int("n_facilities");
    let n_cust = ctx.int("n_customers");
    let demands: Vec<f64> = (0..n_cust).map(|_| ctx.draw_int("demand_range") as f64).collect();
    let mut capacities: Vec<f64> =
        (0..n_fac).map(|_| ctx.draw_int("capacity_range") as f64).collect();
    let deficit = demands.iter().sum::<f64>() - capacities.iter().sum::<f64>();
    if deficit > 0.0 {
        let last = capacities.len() - 1;
        capacities[last] += deficit;
        ctx.record.insert("capacity_top_up".to_string(), format!("{deficit}"));
    }

    let mut pd = ProblemData::new("capacitated_facility_location", Sense::Minimize);
    let mut objective = Vec::new();
    for i in 0..n_fac {
        let name = format!("open_{i}");
        pd.variables.push(Variable::binary(&name));
        objective.push((ctx.draw_int("open_cost_range") as f64, name));
    }
    for i in 0..n_fac {
        for j in 0..n_cust {
            let name = format!("ship_{i}_{j}");
            pd.variables.push(Variable::continuous(&name, 0.0, demands[j as usize]));
            objective.push((ctx.draw_int("ship_cost_range") as f64, name));
        }
    }
    pd.objective = Expression::linear(objective);
    for (j, &d) in demands.iter().enumerate() {
        pd.constraints.push(Constraint::new(
            format!("demand_{j}"),
            Expression::linear((0..n_fac).map(|i| (1.0, format!("ship_{i}_{j}")))),
            Relation::Eq,
            d,
        ));
    }
    for (i, &cap) in capacities.iter().enumerate() {
        let mut terms: Vec<Term> =
            (0..n_cust).map(|j| Term::linear(1.0, format!("ship_{i}_{j}"))).collect();
        terms.push(Term::linear(-cap, format!("open_{i}")));
        pd.constraints.push(Constraint::new(
            format!("capacity_{i}"),
            Expression::from_terms(terms),
            Relation::Le,
            0.0,
        ));
    }
    Ok(pd)
}

pub(super) fn lot_sizing_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "capacitated_lot_sizing",
        subclass: "Capacitated Lot Sizing",
        formulation: "min sum(s_t y_t + p_t x_t + h_t I_t) s.t. I_{t-1} + x_t - I_t = d_t; x_t <= cap_t; y_t = 0 -> x_t <= 0; y binary, x,I >= 0",
        reference: "Florian, Lenstra & Rinnooy Kan, Deterministic Production Planning: Algorithms and Complexity (1980)",
        size_parameter: Some("n_periods"),
        parameters: vec![
            decl("n_periods", ParamType::IntRange, 1.0, 24.0, ParamValue::IntRange(3, 8), "planning horizon"),
            decl("demand_range", ParamType::IntRange, 0.0, 10_000.0, ParamValue::IntRange(5, 40), "per-period demand draw"),
            decl("capacity_range", ParamType::IntRange, 1.0, 100_000.0, ParamValue::IntRange(50, 120), "per-period capacity draw"),
            decl("setup_cost_range", ParamType::IntRange, 0.0, 100_000.0, ParamValue::IntRange(20, 100), "setup cost draw"),
            decl("unit_cost_range", ParamType::IntRange, 0.0, 10_000.0, ParamValue::IntRange(1, 10), "unit production cost draw"),
            decl("holding_cost_range", ParamType::IntRange, 0.0, 10_000.0, ParamValue::IntRange(1, 5), "unit holding cost draw"),
        ],
    }
}

pub(super) fn lot_sizing(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let horizon = ctx.int("n_periods");
    let demands: Vec<f64> = (0..horizon).map(|_| ctx.draw_int("demand_range") as f64).collect();
    let capacities: Vec<f64> =
        (0..horizon).map(|_| ctx.draw_int("capacity_range") as f64).collect();
    // Every demand prefix must be producible within the capacity prefix.
    let mut cum_d = 0.0;
    let mut cum_c = 0.0;
    for t in 0..horizon as usize {
        cum_d += demands[t];
        cum_c += capacities[t];
        if cum_d > cum_c {
            return ctx.degenerate(format!(
                "cumulative demand {cum_d} exceeds cumulative capacity {cum_c} by period {t}"
            ));
        }
    }

    let mut pd = ProblemData::new("capacitated_lot_sizing", Sense::Minimize);
    let mut objective = Vec::new();
    for t in 0..horizon {
        let make = format!("make_{t}");
        let store = format!("store_{t}");
        let setup = format!("setup_{t}");
        pd.variables.push(Variable::continuous(&make, 0.0, f64::INFINITY));
        pd.variables.push(Variable::continuous(&store, 0.0, f64::INFINITY));
        pd.variables.push(Variable::binary(&setup));
        objective.push((ctx.draw_int("unit_cost_range") as f64, make));
        objective.push((ctx.draw_int("holding_cost_range") as f64, store));
        objective.push((ctx.draw_int("setup_cost_range") as f64, setup));
    }
    pd.objective = Expression::linear(objective);
    for t in 0..horizon {
        let mut terms = vec![
            Term::linear(1.0, format!("make_{t}")),
            Term::linear(-1.0, format!("store_{t}")),
        ];
        if t > 0 {
            terms.push(Term::linear(1.0, format!("store_{}", t - 1)));
        }
        pd.constraints.push(Constraint::new(
            format!("balance_{t}"),
            Expression::from_terms(terms),
            Relation::Eq,
            demands[t as usize],
        ));
        pd.constraints.push(Constraint::new(
            format!("capacity_{t}"),
            Expression::linear(vec![(1.0, format!("make_{t}"))]),
            Relation::Le,
            capacities[t as usize],
        ));
        // No production in periods without a setup.
        pd.constraints.push(
            Constraint::new(
                format!("lock_{t}"),
                Expression::linear(vec![(1.0, format!("make_{t}"))]),
                Relation::Le,
                0.0,
            )
            .with_guard(format!("setup_{t}"), 0),
        );
    }
    Ok(pd)
}

pub(super) fn production_planning_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "production_planning_bigm",
        subclass: "Production Planning with Big-M Activation",
        formulation: "max sum(r_p q_p - f_p y_p) s.t. sum_p(u_kp q_p) <= R_k; q_p - M y_p <= 0; q_p - M y_p >= m_p - M; q integer >= 0, y binary",
        reference: "Pochet & Wolsey, Production Planning by Mixed Integer Programming (2006)",
        size_parameter: Some("n_products"),
        parameters: vec![
            decl("n_products", ParamType::IntRange, 1.0, 20.0, ParamValue::IntRange(2, 6), "products"),
            decl("n_resources", ParamType::IntRange, 1.0, 10.0, ParamValue::IntRange(1, 3), "shared resources"),
            decl("profit_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(5, 30), "unit profit draw"),
            decl("setup_cost_range", ParamType::IntRange, 0.0, 100_000.0, ParamValue::IntRange(10, 50), "activation cost draw"),
            decl("usage_range", ParamType::IntRange, 1.0, 1_000.0, ParamValue::IntRange(1, 8), "resource use per unit draw"),
            decl("capacity_range", ParamType::IntRange, 1.0, 100_000.0, ParamValue::IntRange(50, 150), "resource capacity draw"),
            decl("min_batch_range", ParamType::IntRange, 1.0, 1_000.0, ParamValue::IntRange(2, 10), "minimum batch when active"),
            decl("big_m", ParamType::Real, 1.0, 1e9, ParamValue::Real(100.0), "Big-M linking constant"),
        ],
    }
}

pub(super) fn production_planning(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n_products = ctx.int("n_products");
    let n_resources = ctx.int("n_resources");
    let big_m = ctx.real("big_m");

    let mut pd = ProblemData::new("production_planning_bigm", Sense::Maximize);
    let mut objective = Vec::new();
    for p in 0..n_products {
        let qty = format!("qty_{p}");
        let active = format!("active_{p}");
        pd.variables.push(Variable::integer(&qty, 0.0, f64::INFINITY));
        pd.variables.push(Variable::binary(&active));
        objective.push((ctx.draw_int("profit_range") as f64, qty));
        objective.push((-(ctx.draw_int("setup_cost_range") as f64), active));
    }
    pd.objective = Expression::linear(objective);
    for k in 0..n_resources {
        let usage: Vec<(f64, String)> = (0..n_products)
            .map(|p| (ctx.draw_int("usage_range") as f64, format!("qty_{p}")))
            .collect();
        pd.constraints.push(Constraint::new(
            format!("resource_{k}"),
            Expression::linear(usage),
            Relation::Le,
            ctx.draw_int("capacity_range") as f64,
        ));
    }
    for p in 0..n_products {
        let min_batch = ctx.draw_int("min_batch_range") as f64;
        pd.constraints.push(Constraint::new(
            format!("ceiling_{p}"),
            Expression::from_terms(vec![
                Term::linear(1.0, format!("qty_{p}")),
                Term::linear(-big_m, format!("active_{p}")),
            ]),
            Relation::Le,
            0.0,
        ));
        // Minimum batch when activated, relaxed by M otherwise.
        pd.constraints.push(Constraint::new(
            format!("min_batch_{p}"),
            Expression::from_terms(vec![
                Term::linear(1.0, format!("qty_{p}")),
                Term::linear(-big_m, format!("active_{p}")),
            ]),
            Relation::Ge,
            min_batch - big_m,
        ));
    }
    Ok(pd)
}
