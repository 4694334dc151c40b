//! Continuous resource-mix classes: one pure LP, one with a quadratic
//! risk constraint.

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

pub(super) fn diet_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "diet",
        subclass: "Diet / Blending",
        formulation: "min sum(c_f x_f) s.t. lo_n <= sum_f(a_nf x_f) <= hi_n per nutrient; 0 <= x_f <= cap",
        reference: "Dantzig, The Diet Problem (1990 retrospective; Stigler 1945)",
        size_parameter: Some("n_foods"),
        parameters: vec![
            decl("n_foods", ParamType::IntRange, 1.0, 40.0, ParamValue::IntRange(3, 10), "foods"),
            decl("n_nutrients", ParamType::IntRange, 1.0, 15.0, ParamValue::IntRange(2, 5), "tracked nutrients"),
            decl("cost_range", ParamType::IntRange, 1.0, 10_000.0, ParamValue::IntRange(1, 15), "per-food cost draw"),
            decl("amount_range", ParamType::IntRange, 0.0, 10_000.0, ParamValue::IntRange(1, 20), "nutrient content per serving draw"),
            decl("serving_cap", ParamType::Real, 1.0, 1_000.0, ParamValue::Real(10.0), "max servings per food"),
        ],
    }
}

pub(super) fn diet(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n_foods = ctx.int("n_foods");
    let n_nutrients = ctx.int("n_nutrients");
    let cap = ctx.real("serving_cap");
    let content: Vec<Vec<f64>> = (0..n_nutrients)
        .map(|_| (0..n_foods).map(|_| ctx.draw_int("amount_range") as f64).collect())
        .collect();

    let mut pd = ProblemData::new("diet", Sense::Minimize);
    let mut objective = Vec::new();
    for f in 0..n_foods {
        let name = format!("buy_{f}");
        pd.variables.push(Variable::continuous(&name, 0.0, cap));
        objective.push((ctx.draw_int("cost_range") as f64, name));
    }
    pd.objective = Expression::linear(objective);
    for (n, row) in content.iter().enumerate() {
        // Requirements bracket the half-cap reference mix, which keeps every
        // draw feasible.
        let reference: f64 = row.iter().map(|a| a * cap / 2.0).sum();
        let lo = (0.5 * reference).floor();
        let hi = (1.5 * reference).ceil();
        let terms: Vec<(f64, String)> =
            row.iter().enumerate().map(|(f, &a)| (a, format!("buy_{f}"))).collect();
        pd.constraints.push(Constraint::new(
            format!("need_{n}"),
            Expression::linear(terms.clone()),
            Relation::Ge,
            lo,
        ));
        pd.constraints.push(Constraint::new(
            format!("limit_{n}"),
            Expression::linear(terms),
            Relation::Le,
            hi,
        ));
    }
    Ok(pd)
}

pub(super) fn portfolio_schema() -> GeneratorSchema {
    GeneratorSchema {
        class_id: "portfolio_qp",
        subclass: "Portfolio Selection with Quadratic Risk Budget",
        formulation: "max sum(mu_i w_i) s.t. sum(w_i) = B; sum(q_i w_i^2) <= R; 0 <= w_i <= B",
        reference: "Markowitz, Portfolio Selection (1952)",
        size_parameter: Some("n_assets"),
        parameters: vec![
            decl("n_assets", ParamType::IntRange, 2.0, 40.0, ParamValue::IntRange(3, 8), "investable assets"),
            decl("return_range", ParamType::RealRange, 0.0, 10.0, ParamValue::RealRange(0.01, 0.15), "expected return draw"),
            decl("risk_range", ParamType::RealRange, 0.0, 10.0, ParamValue::RealRange(0.01, 0.10), "idiosyncratic variance draw"),
            decl("budget_choices", ParamType::List, 0.1, 100.0, ParamValue::List(vec![1.0]), "total budget, drawn uniformly from this list"),
            decl("risk_margin", ParamType::Real, 1.0, 100.0, ParamValue::Real(2.0), "risk budget as a multiple of the uniform-mix risk"),
        ],
    }
}

pub(super) fn portfolio(ctx: &mut DrawCtx) -> Result<ProblemData, GeneratorError> {
    let n = ctx.int("n_assets");
    let budget = ctx.real("budget_choices");
    let margin = ctx.real("risk_margin");
    let returns: Vec<f64> = (0..n).map(|_| ctx.draw_real("return_range")).collect();
    let risks: Vec<f64> = (0..n).map(|_| ctx.draw_real("risk_range")).collect();
    let uniform = budget / n as f64;
    let risk_budget = margin * risks.iter().map(|q| q * uniform * uniform).sum::<f64>();
    ctx.record.insert("risk_budget".to_string(), format!("{risk_budget}"));

    let mut pd = ProblemData::new("portfolio_qp", Sense::Maximize);
    let mut objective = Vec::new();
    for i in 0..n {
        let name = format!("weight_{i}");
        pd.variables.push(Variable::continuous(&name, 0.0, budget));
        objective.push((returns[i as usize], name));
    }
    pd.objective = Expression::linear(objective);
    pd.constraints.push(Constraint::new(
        "budget",
        Expression::linear((0..n).map(|i| (1.0, format!("weight_{i}")))),
        Relation::Eq,
        budget,
    ));
    pd.constraints.push(Constraint::new(
        "risk",
        Expression::from_terms(
            risks
                .iter()
                .enumerate()
                .map(|(i, &q)| Term::power(q, format!("weight_{i}"), 2))
                .collect(),
        ),
        Relation::Le,
        risk_budget,
    ));
    Ok(pd)
}

#[cfg(test)]
mod tests {
    use super::super::super::{generate, GeneratorConfig};
    use crate::model::ConstraintKind;

    #[test]
    fn portfolio_has_exactly_one_quadratic_constraint() {
        let pd = generate(&GeneratorConfig::new("portfolio_qp", 5)).unwrap();
        let quadratic = pd
            .constraints
            .iter()
            .filter(|c| c.kind() == ConstraintKind::Quadratic)
            .count();
        assert_eq!(quadratic, 1);
        assert!(pd.objective.is_linear());
    }

    #[test]
    fn diet_is_pure_lp() {
        let pd = generate(&GeneratorConfig::new("diet", 5)).unwrap();
        assert!(pd.objective.is_linear());
        assert!(pd
            .constraints
            .iter()
            .all(|c| c.kind() == ConstraintKind::Linear));
        assert!(pd.variables.iter().all(|v| !v.is_integral()));
    }
}
