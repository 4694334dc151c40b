//! Modeling-complexity scoring and difficulty tiers.
//!
//! The score is a weighted sum of nine components: variable counts by kind
//! (binary / integer / continuous), constraint counts by kind (linear /
//! indicator / quadratic / general nonlinear), the frequency of Big-M
//! formulations, and the average number of additive terms per expression.
//!
//! Counting conventions, fixed here so that scores are reproducible:
//!
//! * A linear constraint matches the **Big-M pattern** when it contains at
//!   least one binary-variable term with `|coefficient| >= threshold` next to
//!   at least one non-binary-variable term. Such constraints are the linear
//!   encodings of logical implications, so the report tallies them under
//!   `n_indic` together with unexpanded guard-form indicator constraints, and
//!   under `f_bigm`. Guard-form constraints themselves never count toward
//!   `f_bigm` (they are not expanded). `n_lin` counts the remaining linear
//!   constraints.
//! * **Average terms**: over every constraint's `body - rhs` expression (the
//!   rhs constant counts as a term when nonzero) plus the objective
//!   expression; a product of factors is a single term.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{
    Constraint, ConstraintKind, Expression, ProblemData, Relation, Term, VariableKind,
};

/// Tunable weights for the nine score components. Defaults to all ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityWeights {
    pub alpha_bin: f64,
    pub alpha_int: f64,
    pub alpha_cont: f64,
    pub beta_lin: f64,
    pub beta_indic: f64,
    pub beta_quad: f64,
    pub beta_gen: f64,
    pub gamma_bigm: f64,
    pub delta_expr: f64,
}

impl Default for ComplexityWeights {
    fn default() -> Self {
        ComplexityWeights {
            alpha_bin: 1.0,
            alpha_int: 1.0,
            alpha_cont: 1.0,
            beta_lin: 1.0,
            beta_indic: 1.0,
            beta_quad: 1.0,
            beta_gen: 1.0,
            gamma_bigm: 1.0,
            delta_expr: 1.0,
        }
    }
}

impl ComplexityWeights {
    pub fn validate(&self) -> Result<(), ComplexityError> {
        let all = [
            self.alpha_bin,
            self.alpha_int,
            self.alpha_cont,
            self.beta_lin,
            self.beta_indic,
            self.beta_quad,
            self.beta_gen,
            self.gamma_bigm,
            self.delta_expr,
        ];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(ComplexityError::InvalidWeights);
        }
        Ok(())
    }
}

/// Default Big-M detection threshold.
pub const DEFAULT_BIGM_THRESHOLD: f64 = 100.0;

/// Per-component counts plus the weighted total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub n_bin: usize,
    pub n_int: usize,
    pub n_cont: usize,
    pub n_lin: usize,
    pub n_indic: usize,
    pub n_quad: usize,
    pub n_gen: usize,
    pub f_bigm: usize,
    pub avg_terms: f64,
    pub score: f64,
}

impl ComplexityReport {
    /// The nine components in weight order, for dot-product style checks.
    pub fn components(&self) -> [f64; 9] {
        [
            self.n_bin as f64,
            self.n_int as f64,
            self.n_cont as f64,
            self.n_lin as f64,
            self.n_indic as f64,
            self.n_quad as f64,
            self.n_gen as f64,
            self.f_bigm as f64,
            self.avg_terms,
        ]
    }

    /// Named component map, used for batch statistics.
    pub fn component_map(&self) -> BTreeMap<String, f64> {
        let names = [
            "n_bin", "n_int", "n_cont", "n_lin", "n_indic", "n_quad", "n_gen", "f_bigm",
            "avg_terms",
        ];
        names
            .iter()
            .zip(self.components())
            .map(|(n, v)| (n.to_string(), v))
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ComplexityError {
    #[error("weights must be finite and non-negative")]
    InvalidWeights,
    #[error("instance has no constraints and an empty objective; average term count is undefined")]
    UndefinedAverage,
    #[error("big-M threshold must be positive and finite")]
    InvalidThreshold,
}

/// A named closed score interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyTier {
    pub name: String,
    pub min: f64,
    pub max: f64,
}

impl DifficultyTier {
    pub fn new(name: impl Into<String>, min: f64, max: f64) -> Self {
        DifficultyTier { name: name.into(), min, max }
    }

    pub fn contains(&self, score: f64) -> bool {
        self.min <= score && score <= self.max
    }
}

/// The default five-tier table. Neighboring intervals overlap on purpose, so
/// a score can belong to more than one tier.
pub fn default_tiers() -> Vec<DifficultyTier> {
    vec![
        DifficultyTier::new("easy", 25.0, 75.0),
        DifficultyTier::new("medium_easy", 50.0, 100.0),
        DifficultyTier::new("medium", 75.0, 125.0),
        DifficultyTier::new("medium_hard", 100.0, 150.0),
        DifficultyTier::new("hard", 125.0, 175.0),
    ]
}

/// All tiers whose closed interval contains `score`, in table order.
pub fn tier_of<'a>(score: f64, tiers: &'a [DifficultyTier]) -> Vec<&'a DifficultyTier> {
    tiers.iter().filter(|t| t.contains(score)).collect()
}

/// Tier names containing `score`, in table order.
pub fn tier_names(score: f64, tiers: &[DifficultyTier]) -> Vec<String> {
    tier_of(score, tiers).into_iter().map(|t| t.name.clone()).collect()
}

fn is_binary_var(pd: &ProblemData, name: &str) -> bool {
    pd.variable(name).map(|v| v.kind == VariableKind::Binary).unwrap_or(false)
}

/// The Big-M pattern check: applies only to structurally linear constraints.
fn matches_bigm_pattern(pd: &ProblemData, c: &Constraint, threshold: f64) -> bool {
    if c.kind() != ConstraintKind::Linear {
        return false;
    }
    let is_binary_term = |t: &Term| {
        t.factors.len() == 1 && is_binary_var(pd, &t.factors[0].var)
    };
    let has_big_binary = c
        .body
        .terms
        .iter()
        .any(|t| is_binary_term(t) && t.coeff.abs() >= threshold);
    let has_non_binary = c
        .body
        .terms
        .iter()
        .any(|t| !t.is_constant() && !is_binary_term(t));
    has_big_binary && has_non_binary
}

/// Number of linear constraints matching the Big-M pattern. Guard-form
/// indicator constraints are not expanded and count as zero.
pub fn count_bigm(pd: &ProblemData, threshold: f64) -> usize {
    pd.constraints
        .iter()
        .filter(|c| matches_bigm_pattern(pd, c, threshold))
        .count()
}

fn expression_term_count(e: &Expression) -> usize {
    e.terms.iter().filter(|t| t.coeff != 0.0).count()
}

/// Mean number of additive terms over all constraint expressions (body minus
/// rhs, constants included when nonzero) plus the objective.
pub fn avg_expression_terms(pd: &ProblemData) -> Result<f64, ComplexityError> {
    if pd.constraints.is_empty() && pd.objective.is_empty() {
        return Err(ComplexityError::UndefinedAverage);
    }
    let mut total = expression_term_count(&pd.objective);
    for c in &pd.constraints {
        total += expression_term_count(&c.body) + usize::from(c.rhs != 0.0);
    }
    Ok(total as f64 / (pd.constraints.len() + 1) as f64)
}

/// Computes the full report for a normalized, valid instance.
pub fn score(
    pd: &ProblemData,
    weights: &ComplexityWeights,
    bigm_threshold: f64,
) -> Result<ComplexityReport, ComplexityError> {
    weights.validate()?;
    if !(bigm_threshold.is_finite() && bigm_threshold > 0.0) {
        return Err(ComplexityError::InvalidThreshold);
    }

    let mut n_bin = 0;
    let mut n_int = 0;
    let mut n_cont = 0;
    for v in &pd.variables {
        match v.kind {
            VariableKind::Binary => n_bin += 1,
            VariableKind::Integer => n_int += 1,
            VariableKind::Continuous => n_cont += 1,
        }
    }

    let mut n_lin = 0;
    let mut n_indic = 0;
    let mut n_quad = 0;
    let mut n_gen = 0;
    let mut f_bigm = 0;
    for c in &pd.constraints {
        match c.kind() {
            ConstraintKind::Indicator => n_indic += 1,
            ConstraintKind::Quadratic => n_quad += 1,
            ConstraintKind::General => n_gen += 1,
            ConstraintKind::Linear => {
                if matches_bigm_pattern(pd, c, bigm_threshold) {
                    n_indic += 1;
                    f_bigm += 1;
                } else {
                    n_lin += 1;
                }
            }
        }
    }

    let avg_terms = avg_expression_terms(pd)?;
    let mut report = ComplexityReport {
        n_bin,
        n_int,
        n_cont,
        n_lin,
        n_indic,
        n_quad,
        n_gen,
        f_bigm,
        avg_terms,
        score: 0.0,
    };
    let w = [
        weights.alpha_bin,
        weights.alpha_int,
        weights.alpha_cont,
        weights.beta_lin,
        weights.beta_indic,
        weights.beta_quad,
        weights.beta_gen,
        weights.gamma_bigm,
        weights.delta_expr,
    ];
    report.score = report
        .components()
        .iter()
        .zip(w)
        .map(|(c, w)| c * w)
        .sum();
    Ok(report)
}

/// Rewrites guard-form indicator constraints into Big-M linear form with the
/// given constant. Equality bodies expand into a `<=` / `>=` pair (suffixes
/// `_ub` / `_lb`). The result classifies as linear and participates in
/// `f_bigm` counting when `m` reaches the threshold.
pub fn big_m_expand(pd: &ProblemData, m: f64) -> ProblemData {
    let mut out = pd.clone();
    out.constraints = Vec::with_capacity(pd.constraints.len());
    for c in &pd.constraints {
        let Some(guard) = &c.guard else {
            out.constraints.push(c.clone());
            continue;
        };
        // Enforced when guard == value, relaxed by M on the other branch:
        //   value 1, <=:  body + M·g <= rhs + M
        //   value 0, <=:  body - M·g <= rhs
        //   value 1, >=:  body - M·g >= rhs - M
        //   value 0, >=:  body + M·g >= rhs
        let expand = |relation: Relation, name: String| {
            let (guard_coeff, rhs_shift) = match (relation, guard.value) {
                (Relation::Le, 1) => (m, m),
                (Relation::Le, _) => (-m, 0.0),
                (Relation::Ge, 1) => (-m, -m),
                (Relation::Ge, _) => (m, 0.0),
                (Relation::Eq, _) => unreachable!("equalities expand as a pair"),
            };
            let mut terms = c.body.terms.clone();
            terms.push(Term::linear(guard_coeff, guard.var.clone()));
            Constraint::new(name, Expression::from_terms(terms), relation, c.rhs + rhs_shift)
        };
        match c.relation {
            Relation::Le => out.constraints.push(expand(Relation::Le, c.name.clone())),
            Relation::Ge => out.constraints.push(expand(Relation::Ge, c.name.clone())),
            Relation::Eq => {
                out.constraints.push(expand(Relation::Le, format!("{}_ub", c.name)));
                out.constraints.push(expand(Relation::Ge, format!("{}_lb", c.name)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Factor, Sense, Transcendental, Variable};

    /// Two-product planning model: two binaries, two integers, one continuous,
    /// three plain linear rows, two Big-M rows (M = 100), one quadratic row
    /// and one general nonlinear row.
    pub(crate) fn planning_example() -> ProblemData {
        let mut pd = ProblemData::new("planning", Sense::Minimize);
        pd.variables.push(Variable::binary("y1"));
        pd.variables.push(Variable::binary("y2"));
        pd.variables.push(Variable::integer("x1", 0.0, f64::INFINITY));
        pd.variables.push(Variable::integer("x2", 0.0, f64::INFINITY));
        pd.variables.push(Variable::continuous("z", 0.0, f64::INFINITY));
        pd.objective = Expression::from_terms(vec![
            Term::linear(1.0, "z"),
            Term::linear(10.0, "y1"),
            Term::linear(8.0, "y2"),
        ]);
        pd.constraints.push(Constraint::new(
            "resource",
            Expression::linear(vec![(2.0, "x1"), (3.0, "x2")]),
            Relation::Le,
            100.0,
        ));
        pd.constraints.push(Constraint::new(
            "demand1",
            Expression::linear(vec![(1.0, "x1")]),
            Relation::Le,
            50.0,
        ));
        pd.constraints.push(Constraint::new(
            "demand2",
            Expression::linear(vec![(1.0, "x2")]),
            Relation::Le,
            30.0,
        ));
        // Minimum production when activated, in expanded Big-M form:
        // x1 - 100 y1 >= 5 - 100, and likewise for product 2.
        pd.constraints.push(Constraint::new(
            "min1",
            Expression::linear(vec![(1.0, "x1"), (-100.0, "y1")]),
            Relation::Ge,
            -95.0,
        ));
        pd.constraints.push(Constraint::new(
            "min2",
            Expression::linear(vec![(1.0, "x2"), (-100.0, "y2")]),
            Relation::Ge,
            -97.0,
        ));
        pd.constraints.push(Constraint::new(
            "inventory_cost",
            Expression::from_terms(vec![
                Term::linear(1.0, "z"),
                Term::power(-0.5, "x1", 2),
                Term::power(-0.3, "x2", 2),
            ]),
            Relation::Ge,
            0.0,
        ));
        pd.constraints.push(Constraint::new(
            "efficiency",
            Expression::from_terms(vec![Term {
                coeff: 1.0,
                factors: vec![
                    Factor::new("x1", 1),
                    Factor::transcendental("x2", Transcendental::Exp),
                ],
            }]),
            Relation::Le,
            100.0,
        ));
        pd
    }

    /// Same model with the minimum-production rows in guard form instead.
    fn planning_example_guarded() -> ProblemData {
        let mut pd = planning_example();
        pd.constraints[3] =
            Constraint::new("min1", Expression::linear(vec![(1.0, "x1")]), Relation::Ge, 5.0)
                .with_guard("y1", 1);
        pd.constraints[4] =
            Constraint::new("min2", Expression::linear(vec![(1.0, "x2")]), Relation::Ge, 3.0)
                .with_guard("y2", 1);
        pd
    }

    #[test]
    fn worked_example_counts_and_score() {
        let pd = planning_example();
        assert!(pd.validate().is_empty());
        let report = score(&pd, &ComplexityWeights::default(), 100.0).unwrap();
        assert_eq!(
            (report.n_bin, report.n_int, report.n_cont),
            (2, 2, 1),
            "variable counts"
        );
        assert_eq!(
            (report.n_lin, report.n_indic, report.n_quad, report.n_gen),
            (3, 2, 1, 1),
            "constraint counts"
        );
        assert_eq!(report.f_bigm, 2);
        assert!((report.avg_terms - 2.625).abs() < 1e-12);
        assert!((report.score - 16.625).abs() < 1e-9);
    }

    #[test]
    fn bigm_counting_respects_threshold_and_guards() {
        let pd = planning_example();
        assert_eq!(count_bigm(&pd, 100.0), 2);
        assert_eq!(count_bigm(&pd, 101.0), 0);

        // Guard-form indicators are not expanded and never counted.
        let guarded = planning_example_guarded();
        assert_eq!(count_bigm(&guarded, 100.0), 0);
        let report = score(&guarded, &ComplexityWeights::default(), 100.0).unwrap();
        assert_eq!(report.n_indic, 2);
        assert_eq!(report.f_bigm, 0);

        // Pure LP with no binaries.
        let mut lp = ProblemData::new("lp", Sense::Maximize);
        lp.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        lp.objective = Expression::linear(vec![(1.0, "x")]);
        lp.constraints.push(Constraint::new(
            "c",
            Expression::linear(vec![(500.0, "x")]),
            Relation::Le,
            1.0,
        ));
        assert_eq!(count_bigm(&lp, 100.0), 0);
    }

    #[test]
    fn bigm_needs_a_non_binary_term() {
        // All-binary rows (bin-packing capacity style) never match, whatever
        // the coefficient.
        let mut pd = ProblemData::new("bp", Sense::Minimize);
        pd.variables.push(Variable::binary("x"));
        pd.variables.push(Variable::binary("y"));
        pd.objective = Expression::linear(vec![(1.0, "y")]);
        pd.constraints.push(Constraint::new(
            "cap",
            Expression::linear(vec![(40.0, "x"), (-100.0, "y")]),
            Relation::Le,
            0.0,
        ));
        assert_eq!(count_bigm(&pd, 100.0), 0);
        assert_eq!(count_bigm(&pd, 1000.0), 0);
    }

    #[test]
    fn average_terms_convention() {
        let pd = planning_example();
        assert!((avg_expression_terms(&pd).unwrap() - 2.625).abs() < 1e-12);

        // Objective "x" plus one constraint "x <= 1" -> (1 + 2) / 2.
        let mut small = ProblemData::new("s", Sense::Minimize);
        small.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        small.objective = Expression::linear(vec![(1.0, "x")]);
        small.constraints.push(Constraint::new(
            "c",
            Expression::linear(vec![(1.0, "x")]),
            Relation::Le,
            1.0,
        ));
        assert_eq!(avg_expression_terms(&small).unwrap(), 1.5);

        // No constraints, empty objective: undefined.
        let empty = ProblemData::new("e", Sense::Minimize);
        assert!(matches!(
            avg_expression_terms(&empty),
            Err(ComplexityError::UndefinedAverage)
        ));
    }

    #[test]
    fn score_of_bare_minimization() {
        let mut pd = ProblemData::new("bare", Sense::Minimize);
        pd.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        pd.objective = Expression::linear(vec![(1.0, "x")]);
        let w = ComplexityWeights { alpha_cont: 3.0, delta_expr: 7.0, ..Default::default() };
        let report = score(&pd, &w, 100.0).unwrap();
        assert_eq!(report.score, 3.0 + 7.0);
    }

    #[test]
    fn score_is_linear_in_weights() {
        let pd = planning_example();
        let w1 = ComplexityWeights::default();
        let w2 = ComplexityWeights {
            alpha_bin: 2.0,
            alpha_int: 2.0,
            alpha_cont: 2.0,
            beta_lin: 2.0,
            beta_indic: 2.0,
            beta_quad: 2.0,
            beta_gen: 2.0,
            gamma_bigm: 2.0,
            delta_expr: 2.0,
        };
        let s1 = score(&pd, &w1, 100.0).unwrap().score;
        let s2 = score(&pd, &w2, 100.0).unwrap().score;
        assert!((s2 - 2.0 * s1).abs() < 1e-12);
    }

    #[test]
    fn expand_matches_bigm_algebra() {
        let guarded = planning_example_guarded();
        let expanded = big_m_expand(&guarded, 100.0);
        let reference = planning_example();
        assert!(expanded.structurally_eq(&reference));

        // Equality indicators expand into a pair.
        let mut pd = ProblemData::new("eq", Sense::Minimize);
        pd.variables.push(Variable::binary("g"));
        pd.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        pd.objective = Expression::linear(vec![(1.0, "x")]);
        pd.constraints.push(
            Constraint::new("fix", Expression::linear(vec![(1.0, "x")]), Relation::Eq, 4.0)
                .with_guard("g", 1),
        );
        let expanded = big_m_expand(&pd, 50.0);
        assert_eq!(expanded.constraints.len(), 2);
        assert_eq!(expanded.constraints[0].name, "fix_ub");
        assert_eq!(expanded.constraints[0].relation, Relation::Le);
        assert_eq!(expanded.constraints[0].rhs, 54.0);
        assert_eq!(expanded.constraints[1].name, "fix_lb");
        assert_eq!(expanded.constraints[1].rhs, -46.0);
    }

    #[test]
    fn tier_membership_is_closed_interval() {
        let tiers = default_tiers();
        let names = |s: f64| tier_names(s, &tiers);
        assert_eq!(names(60.0), vec!["easy", "medium_easy"]);
        assert!(names(10.0).is_empty());
        assert_eq!(names(130.0), vec!["medium_hard", "hard"]);
        assert_eq!(names(25.0), vec!["easy"]);
        assert_eq!(names(75.0), vec!["easy", "medium_easy", "medium"]);
        assert_eq!(names(175.0), vec!["hard"]);
    }

    #[test]
    fn adding_structure_never_decreases_counts() {
        let base = planning_example();
        let base_report = score(&base, &ComplexityWeights::default(), 100.0).unwrap();
        let mut grown = base.clone();
        grown.variables.push(Variable::binary("extra"));
        grown.constraints.push(Constraint::new(
            "more",
            Expression::linear(vec![(1.0, "x1"), (1.0, "extra")]),
            Relation::Le,
            10.0,
        ));
        let grown_report = score(&grown, &ComplexityWeights::default(), 100.0).unwrap();
        let b = base_report.components();
        let g = grown_report.components();
        for i in 0..8 {
            assert!(g[i] >= b[i], "component {i} decreased");
        }
    }
}
