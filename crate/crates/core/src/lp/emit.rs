//! LP document writer.

use std::collections::HashMap;

use super::{needs_sanitization, sanitize_name, LpDialectOptions, LpEmitError, NameSanitization};
use crate::model::{Constraint, ConstraintKind, Expression, ProblemData, Sense, Term, Variable};

/// Token-buffered line writer: two-space indent for the first line of a
/// group, four-space for wrapped continuations.
struct LineWriter {
    out: String,
    width: usize,
    line: String,
}

impl LineWriter {
    fn new(width: usize) -> Self {
        LineWriter { out: String::new(), width, line: String::new() }
    }

    fn header(&mut self, text: &str) {
        self.flush();
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn comment(&mut self, text: &str) {
        self.flush();
        self.out.push_str("\\ ");
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn start(&mut self) {
        self.flush();
        self.line.push_str("  ");
    }

    fn token(&mut self, tok: &str) {
        let sep = if self.line.trim_end().is_empty() { 0 } else { 1 };
        if !self.line.is_empty() && self.line.len() + sep + tok.len() > self.width {
            self.out.push_str(self.line.trim_end());
            self.out.push('\n');
            self.line = "    ".to_string();
        } else if sep == 1 {
            self.line.push(' ');
        }
        self.line.push_str(tok);
    }

    fn flush(&mut self) {
        if !self.line.is_empty() {
            self.out.push_str(self.line.trim_end());
            self.out.push('\n');
            self.line.clear();
        }
    }

    fn finish(mut self) -> String {
        self.flush();
        self.out
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn push_factor_tokens(term: &Term, w: &mut LineWriter) {
    for (i, f) in term.factors.iter().enumerate() {
        if i > 0 {
            w.token("*");
        }
        w.token(&f.var);
        if f.exp > 1 {
            w.token("^");
            w.token(&fmt_num(f.exp as f64));
        }
    }
}

/// Emits `sign magnitude factors` for one term; positive leading terms omit
/// the `+`.
fn push_term_tokens(term: &Term, first: bool, w: &mut LineWriter) {
    if term.coeff < 0.0 {
        w.token("-");
    } else if !first {
        w.token("+");
    }
    let mag = term.coeff.abs();
    if term.is_constant() || mag != 1.0 {
        w.token(&fmt_num(mag));
    }
    push_factor_tokens(term, w);
}

fn push_expression_tokens(expr: &Expression, w: &mut LineWriter) {
    let (linear, quadratic): (Vec<&Term>, Vec<&Term>) =
        expr.terms.iter().partition(|t| t.degree() <= 1);
    let mut first = true;
    for t in &linear {
        push_term_tokens(t, first, w);
        first = false;
    }
    if !quadratic.is_empty() {
        if !first {
            w.token("+");
        }
        w.token("[");
        let mut qfirst = true;
        for t in &quadratic {
            push_term_tokens(t, qfirst, w);
            qfirst = false;
        }
        w.token("]");
    } else if first {
        w.token("0");
    }
}

struct Renamer {
    map: HashMap<String, String>,
}

impl Renamer {
    fn build<'a>(
        names: impl Iterator<Item = &'a str>,
        mode: NameSanitization,
    ) -> Result<Renamer, LpEmitError> {
        let mut map = HashMap::new();
        let mut taken: HashMap<String, String> = HashMap::new();
        for name in names {
            if needs_sanitization(name) && mode == NameSanitization::Strict {
                return Err(LpEmitError::StrictSanitization { original: name.to_string() });
            }
            let sanitized = sanitize_name(name);
            if let Some(prev) = taken.get(&sanitized) {
                if prev != name {
                    return Err(LpEmitError::NameCollision {
                        a: prev.clone(),
                        b: name.to_string(),
                        sanitized,
                    });
                }
            } else {
                taken.insert(sanitized.clone(), name.to_string());
            }
            map.insert(name.to_string(), sanitized);
        }
        Ok(Renamer { map })
    }

    fn get(&self, name: &str) -> String {
        self.map.get(name).cloned().unwrap_or_else(|| sanitize_name(name))
    }
}

fn rename_expression(expr: &Expression, vars: &Renamer) -> Expression {
    let mut out = expr.clone();
    for t in &mut out.terms {
        for f in &mut t.factors {
            f.var = vars.get(&f.var);
        }
    }
    out
}

fn check_constraint(c: &Constraint, opts: &LpDialectOptions) -> Result<(), LpEmitError> {
    match c.kind() {
        ConstraintKind::General => Err(LpEmitError::UnsupportedConstruct {
            name: c.name.clone(),
            what: "general nonlinear body (degree above 2 or transcendental factor)".into(),
        }),
        ConstraintKind::Indicator if !opts.emit_indicators => {
            Err(LpEmitError::IndicatorsDisabled(c.name.clone()))
        }
        ConstraintKind::Indicator if !c.body.is_linear() => {
            Err(LpEmitError::UnsupportedConstruct {
                name: c.name.clone(),
                what: "nonlinear indicator body".into(),
            })
        }
        ConstraintKind::Quadratic if !opts.emit_quadratics => {
            Err(LpEmitError::QuadraticsDisabled(format!("constraint {}", c.name)))
        }
        _ => Ok(()),
    }
}

fn bounds_line(v: &Variable, name: &str, w: &mut LineWriter) {
    w.start();
    match (v.lower.is_finite(), v.upper.is_finite()) {
        (false, false) => {
            w.token(name);
            w.token("free");
        }
        (true, true) if v.lower == v.upper => {
            w.token(name);
            w.token("=");
            w.token(&fmt_num(v.lower));
        }
        (true, true) => {
            w.token(&fmt_num(v.lower));
            w.token("<=");
            w.token(name);
            w.token("<=");
            w.token(&fmt_num(v.upper));
        }
        (true, false) => {
            w.token(name);
            w.token(">=");
            w.token(&fmt_num(v.lower));
        }
        (false, true) => {
            w.token("-inf");
            w.token("<=");
            w.token(name);
            w.token("<=");
            w.token(&fmt_num(v.upper));
        }
    }
}

/// Writes a valid, normalized instance as LP text. General nonlinear
/// constraints are rejected; indicator and quadratic constructs are emitted
/// only when enabled by `opts`.
pub fn emit_lp(pd: &ProblemData, opts: &LpDialectOptions) -> Result<String, LpEmitError> {
    if opts.max_line_width < 64 {
        return Err(LpEmitError::WidthTooSmall(opts.max_line_width));
    }
    if pd.objective.has_transcendental() || pd.objective.degree() > 2 {
        return Err(LpEmitError::UnsupportedConstruct {
            name: "objective".into(),
            what: "general nonlinear objective".into(),
        });
    }
    if pd.objective.degree() == 2 && !opts.emit_quadratics {
        return Err(LpEmitError::QuadraticsDisabled("objective".into()));
    }
    for c in &pd.constraints {
        check_constraint(c, opts)?;
    }

    let vars = Renamer::build(pd.variables.iter().map(|v| v.name.as_str()), opts.name_sanitization)?;
    let cons =
        Renamer::build(pd.constraints.iter().map(|c| c.name.as_str()), opts.name_sanitization)?;

    let mut w = LineWriter::new(opts.max_line_width);
    w.comment(&format!("Problem: {}", pd.name.replace('\n', " ")));
    for (k, v) in &pd.metadata {
        w.comment(&format!("meta {} = {}", k.replace('\n', " "), v.replace('\n', " ")));
    }

    w.header(match pd.sense {
        Sense::Minimize => "Minimize",
        Sense::Maximize => "Maximize",
    });
    w.start();
    w.token("obj:");
    push_expression_tokens(&rename_expression(&pd.objective, &vars), &mut w);

    w.header("Subject To");
    for c in &pd.constraints {
        w.start();
        w.token(&format!("{}:", cons.get(&c.name)));
        if let Some(g) = &c.guard {
            w.token(&vars.get(&g.var));
            w.token("=");
            w.token(&fmt_num(f64::from(g.value)));
            w.token("->");
        }
        push_expression_tokens(&rename_expression(&c.body, &vars), &mut w);
        w.token(&c.relation.to_string());
        w.token(&fmt_num(c.rhs));
    }

    let bounded: Vec<&Variable> = pd
        .variables
        .iter()
        .filter(|v| !(v.is_binary_default()))
        .collect();
    if !bounded.is_empty() {
        w.header("Bounds");
        for v in bounded {
            bounds_line(v, &vars.get(&v.name), &mut w);
        }
    }

    let binaries: Vec<String> = pd
        .variables
        .iter()
        .filter(|v| v.kind == crate::model::VariableKind::Binary)
        .map(|v| vars.get(&v.name))
        .collect();
    if !binaries.is_empty() {
        w.header("Binaries");
        w.start();
        for name in binaries {
            w.token(&name);
        }
    }

    let generals: Vec<String> = pd
        .variables
        .iter()
        .filter(|v| v.kind == crate::model::VariableKind::Integer)
        .map(|v| vars.get(&v.name))
        .collect();
    if !generals.is_empty() {
        w.header("Generals");
        w.start();
        for name in generals {
            w.token(&name);
        }
    }

    w.header("End");
    Ok(w.finish())
}

impl Variable {
    /// Binary with the default `[0, 1]` box needs no Bounds line.
    fn is_binary_default(&self) -> bool {
        self.kind == crate::model::VariableKind::Binary && self.lower == 0.0 && self.upper == 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Factor, Relation, Term, Transcendental, VariableKind};

    fn small_milp() -> ProblemData {
        let mut pd = ProblemData::new("demo", Sense::Maximize);
        pd.variables.push(Variable::continuous("x1", 0.0, f64::INFINITY));
        pd.variables.push(Variable::continuous("x2", 0.0, f64::INFINITY));
        pd.objective = Expression::linear(vec![(1.0, "x1"), (1.0, "x2")]);
        pd.constraints.push(Constraint::new(
            "c0",
            Expression::linear(vec![(2.0, "x1"), (3.0, "x2")]),
            Relation::Le,
            100.0,
        ));
        pd
    }

    #[test]
    fn emits_expected_constraint_line() {
        let text = emit_lp(&small_milp(), &LpDialectOptions::default()).unwrap();
        assert!(text.contains("Subject To\n  c0: 2 x1 + 3 x2 <= 100\n"), "got:\n{text}");
        assert!(text.starts_with("\\ Problem: demo\n"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn rejects_general_nonlinear() {
        let mut pd = small_milp();
        pd.constraints.push(Constraint::new(
            "coupling",
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
        let err = emit_lp(&pd, &LpDialectOptions::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("coupling"), "error should name the constraint: {msg}");
    }

    #[test]
    fn indicator_and_quadratic_toggles() {
        let mut pd = small_milp();
        pd.variables.push(Variable::binary("y"));
        pd.constraints.push(
            Constraint::new("ind", Expression::linear(vec![(1.0, "x1")]), Relation::Ge, 5.0)
                .with_guard("y", 1),
        );
        let opts = LpDialectOptions { emit_indicators: false, ..Default::default() };
        assert!(matches!(emit_lp(&pd, &opts), Err(LpEmitError::IndicatorsDisabled(_))));
        let text = emit_lp(&pd, &LpDialectOptions::default()).unwrap();
        assert!(text.contains("ind: y = 1 -> x1 >= 5"));

        let mut qp = small_milp();
        qp.constraints.push(Constraint::new(
            "q",
            Expression::from_terms(vec![Term::power(1.0, "x1", 2)]),
            Relation::Le,
            4.0,
        ));
        let opts = LpDialectOptions { emit_quadratics: false, ..Default::default() };
        assert!(matches!(emit_lp(&qp, &opts), Err(LpEmitError::QuadraticsDisabled(_))));
        let text = emit_lp(&qp, &LpDialectOptions::default()).unwrap();
        assert!(text.contains("q: [ x1 ^ 2 ] <= 4"));
    }

    #[test]
    fn collision_after_sanitization_is_an_error() {
        let mut pd = small_milp();
        pd.variables.push(Variable::continuous("a-b", 0.0, 1.0));
        pd.variables.push(Variable::continuous("a.b", 0.0, 1.0));
        assert!(matches!(
            emit_lp(&pd, &LpDialectOptions::default()),
            Err(LpEmitError::NameCollision { .. })
        ));
    }

    #[test]
    fn long_constraints_wrap_between_tokens() {
        let mut pd = ProblemData::new("wide", Sense::Minimize);
        let mut terms = Vec::new();
        for i in 0..40 {
            let name = format!("flow_var_{i}");
            pd.variables.push(Variable::continuous(&name, 0.0, f64::INFINITY));
            terms.push((1.5, name));
        }
        pd.objective = Expression::linear(terms.clone());
        pd.constraints.push(Constraint::new("wide0", Expression::linear(terms), Relation::Le, 9.0));
        let opts = LpDialectOptions { max_line_width: 64, ..Default::default() };
        let text = emit_lp(&pd, &opts).unwrap();
        for line in text.lines() {
            assert!(line.len() <= 64, "line too long: {line:?}");
        }
        assert!(text.contains("\n    "), "expected a continuation line");
        let _ = VariableKind::Continuous;
    }
}
