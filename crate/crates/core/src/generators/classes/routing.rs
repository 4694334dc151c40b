//! Assignment, transportation, and network-flow classes.

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

pub(super) fn assignment_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "assignment",
        subclass: "Linear Assignment",
        formulation: "min sum(c_ij x_ij) s.t. sum_j(x_ij) = 1 for all i; sum_i(x_ij) = 1 for all j; x binary",
        reference: "Kuhn, The Hungarian Method for the Assignment Problem (1955)",
        size_parameter: Some("n_agents"),
        parameters: vec![
            decl("n_agents", ParamType::IntRange, 2.0, 25.0, ParamValue::IntRange(3, 8), "agents (= tasks)"),
            decl("cost_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 100), "per-pair cost draw"),
        ],
    }
}

pub(super) fn assignment(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n = ctx.int("n_agents");
    let mut pd = ProblemData::new("assignment", Sense::Minimize);
    let mut objective = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let name = format!("assign_{i}_{j}");
            pd.variables.push(Variable::binary(&name));
            objective.push((ctx.draw_int("cost_range") as f64, name));
        }
    }
    pd.objective = Expression::linear(objective);
    for i in 0..n {
        pd.constraints.push(Constraint::new(
            format!("agent_{i}"),
            Expression::linear((0..n).map(|j| (1.0, format!("assign_{i}_{j}")))),
            Relation::Eq,
            1.0,
        ));
    }
    for j in 0..n {
        pd.constraints.push(Constraint::new(
            format!("task_{j}"),
            Expression::linear((0..n).map(|i| (1.0, format!("assign_{i}_{j}")))),
            Relation::Eq,
            1.0,
        ));
    }
    Ok(pd)
}

pub(super) fn transportation_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "transportation",
        subclass: "Transportation",
        formulation: "min sum(c_ij x_ij) s.t. sum_j(x_ij) <= s_i; sum_i(x_ij) = d_j; x >= 0",
        reference: "Hitchcock, The Distribution of a Product from Several Sources to Numerous Localities (1941)",
        size_parameter: Some("n_sources"),
        parameters: vec![
            decl("n_sources", ParamType::IntRange, 1.0, 20.0, ParamValue::IntRange(2, 5), "supply nodes"),
            decl("n_sinks", ParamType::IntRange, 1.0, 20.0, ParamValue::IntRange(2, 6), "demand nodes"),
            decl("supply_range", ParamType::IntRange, 1.0, 100_000.0, ParamValue::IntRange(20, 100), "per-source supply draw"),
            decl("demand_range", ParamType::IntRange, 1.0, 100_000.0, ParamValue::IntRange(10, 60), "per-sink demand draw"),
            decl("cost_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 20), "per-lane cost draw"),
        ],
    }
}

pub(super) fn transportation(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n_sources = ctx.int("n_sources");
    let n_sinks = ctx.int("n_sinks");
    let mut supplies: Vec<f64> =
        (0..n_sources).map(|_| ctx.draw_int("supply_range") as f64).collect();
    let demands: Vec<f64> = (0..n_sinks).map(|_| ctx.draw_int("demand_range") as f64).collect();
    let deficit = demands.iter().sum::<f64>() - supplies.iter().sum::<f64>();
    if deficit > 0.0 {
        // Top up the first source so total supply covers total demand.
        supplies[0] += deficit;
        ctx.record.insert("supply_top_up".to_string(), format!("{deficit}"));
    }

    let mut pd = ProblemData::new("transportation", Sense::Minimize);
    let mut objective = Vec::new();
    for i in 0..n_sources {
        for j in 0..n_sinks {
            let name = format!("ship_{i}_{j}");
            pd.variables.push(Variable::continuous(&name, 0.0, f64::INFINITY));
            objective.push((ctx.draw_int("cost_range") as f64, name));
        }
    }
    pd.objective = Expression::linear(objective);
    for (i, &s) in supplies.iter().enumerate() {
        pd.constraints.push(Constraint::new(
            format!("supply_{i}"),
            Expression::linear((0..n_sinks).map(|j| (1.0, format!("ship_{i}_{j}")))),
            Relation::Le,
            s,
        ));
    }
    for (j, &d) in demands.iter().enumerate() {
        pd.constraints.push(Constraint::new(
            format!("demand_{j}"),
            Expression::linear((0..n_sources).map(|i| (1.0, format!("ship_{i}_{j}")))),
            Relation::Eq,
            d,
        ));
    }
    Ok(pd)
}

pub(super) fn tsp_mtz_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "tsp_mtz",
        subclass: "Traveling Salesman (MTZ subtour elimination)",
        formulation: "min sum(d_ij x_ij) s.t. degree-in/out = 1; u_i - u_j + n x_ij <= n - 1 for i,j != depot; u in [1, n-1]; x binary",
        reference: "Miller, Tucker & Zemlin, Integer Programming Formulation of Traveling Salesman Problems (1960)",
        size_parameter: Some("n_cities"),
        parameters: vec![
            decl("n_cities", ParamType::IntRange, 3.0, 12.0, ParamValue::IntRange(3, 6), "tour length"),
            decl("coord_range", ParamType::IntRange, 0.0, 100_000.0, ParamValue::IntRange(0, 100), "coordinate box for city placement"),
        ],
    }
}

pub(super) fn tsp_mtz(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n = ctx.int("n_cities");
    let points: Vec<(f64, f64)> = (0..n)
        .map(|_| (ctx.draw_int("coord_range") as f64, ctx.draw_int("coord_range") as f64))
        .collect();
    let dist = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt().round();

    let mut pd = ProblemData::new("tsp_mtz", Sense::Minimize);
    let mut objective = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let name = format!("go_{i}_{j}");
            pd.variables.push(Variable::binary(&name));
            objective.push((dist(points[i as usize], points[j as usize]), name));
        }
    }
    // Order variables for every city except the depot (city 0).
    for i in 1..n {
        pd.variables.push(Variable::continuous(format!("order_{i}"), 1.0, (n - 1) as f64));
    }
    pd.objective = Expression::linear(objective);
    for i in 0..n {
        pd.constraints.push(Constraint::new(
            format!("leave_{i}"),
            Expression::linear((0..n).filter(|&j| j != i).map(|j| (1.0, format!("go_{i}_{j}")))),
            Relation::Eq,
            1.0,
        ));
        pd.constraints.push(Constraint::new(
            format!("enter_{i}"),
            Expression::linear((0..n).filter(|&j| j != i).map(|j| (1.0, format!("go_{j}_{i}")))),
            Relation::Eq,
            1.0,
        ));
    }
    for i in 1..n {
        for j in 1..n {
            if i == j {
                continue;
            }
            pd.constraints.push(Constraint::new(
                format!("mtz_{i}_{j}"),
                Expression::from_terms(vec![
                    Term::linear(1.0, format!("order_{i}")),
                    Term::linear(-1.0, format!("order_{j}")),
                    Term::linear(n as f64, format!("go_{i}_{j}")),
                ]),
                Relation::Le,
                (n - 1) as f64,
            ));
        }
    }
    Ok(pd)
}

pub(super) fn multicommodity_flow_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "multicommodity_flow",
        subclass: "Multi-Commodity Network Flow",
        formulation: "min sum(c_e f_ke) s.t. flow conservation per commodity and node; sum_k(f_ke) <= u_e; f >= 0",
        reference: "Ahuja, Magnanti & Orlin, Network Flows: Theory, Algorithms, and Applications (1993)",
        size_parameter: Some("n_nodes"),
        parameters: vec![
            decl("n_nodes", ParamType::IntRange, 2.0, 15.0, ParamValue::IntRange(3, 6), "network nodes"),
            decl("n_commodities", ParamType::IntRange, 1.0, 10.0, ParamValue::IntRange(2, 4), "commodities"),
            decl("extra_arc_probability", ParamType::RealRange, 0.0, 1.0, ParamValue::RealRange(0.2, 0.4), "chance of each non-ring arc"),
            decl("demand_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(5, 20), "per-commodity demand draw"),
            decl("capacity_slack_range", ParamType::IntRange, 0.0, 100_000.0, ParamValue::IntRange(10, 40), "spare capacity added over routed load"),
            decl("cost_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 10), "per-arc unit cost draw"),
        ],
    }
}

pub(super) fn multicommodity_flow(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n = ctx.int("n_nodes");
    let k = ctx.int("n_commodities");
    let p = ctx.real("extra_arc_probability");

    // Directed ring guarantees strong connectivity; extra arcs add variety.
    let mut arcs: Vec<(i64, i64)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        for j in 0..n {
            if i == j || (i + 1) % n == j {
                continue;
            }
            if ctx.rng.real_range(0.0, 1.0) < p {
                arcs.push((i, j));
            }
        }
    }
    let costs: Vec<f64> = arcs.iter().map(|_| ctx.draw_int("cost_range") as f64).collect();

    // Commodities route along the ring; capacities cover that load.
    let mut ring_load = vec![0.0; n as usize];
    let mut commodities = Vec::new();
    for _ in 0..k {
        let src = ctx.rng.int_range(0, n - 1);
        let mut dst = ctx.rng.int_range(0, n - 1);
        if dst == src {
            dst = (src + 1) % n;
        }
        let demand = ctx.draw_int("demand_range") as f64;
        let mut at = src;
        while at != dst {
            ring_load[at as usize] += demand;
            at = (at + 1) % n;
        }
        commodities.push((src, dst, demand));
    }
    let capacities: Vec<f64> = arcs
        .iter()
        .enumerate()
        .map(|(e, &(from, _))| {
            let base = if e < n as usize { ring_load[from as usize] } else { 0.0 };
            base + ctx.draw_int("capacity_slack_range") as f64
        })
        .collect();

    let mut pd = ProblemData::new("multicommodity_flow", Sense::Minimize);
    let mut objective = Vec::new();
    for (ci, _) in commodities.iter().enumerate() {
        for (e, &(from, to)) in arcs.iter().enumerate() {
            let name = format!("flow_{ci}_{from}_{to}");
            pd.variables.push(Variable::continuous(&name, 0.0, f64::INFINITY));
            objective.push((costs[e], name));
        }
    }
    pd.objective = Expression::linear(objective);
    for (e, &(from, to)) in arcs.iter().enumerate() {
        pd.constraints.push(Constraint::new(
            format!("capacity_{from}_{to}"),
            Expression::linear(
                (0..commodities.len()).map(|ci| (1.0, format!("flow_{ci}_{from}_{to}"))),
            ),
            Relation::Le,
            capacities[e],
        ));
    }
    for (ci, &(src, dst, demand)) in commodities.iter().enumerate() {
        for node in 0..n {
            let mut terms = Vec::new();
            for &(from, to) in &arcs {
                if from == node {
                    terms.push((1.0, format!("flow_{ci}_{from}_{to}")));
                }
                if to == node {
                    terms.push((-1.0, format!("flow_{ci}_{from}_{to}")));
                }
            }
            let balance = if node == src {
                demand
            } else if node == dst {
                -demand
            } else {
                0.0
            };
            pd.constraints.push(Constraint::new(
                format!("balance_{ci}_{node}"),
                Expression::linear(terms),
                Relation::Eq,
                balance,
            ));
        }
    }
    Ok(pd)
}
