//! In-memory representation of optimization problem instances.
//!
//! A [`ProblemData`] is a concrete, solver-ready instance: declared variables,
//! an objective, and a list of constraints over polynomial terms with optional
//! unary transcendental factors (`exp`, `log`, `sin`, `cos`). All types are
//! immutable value objects once built and can be shared freely across threads.

mod schema;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Domain of a decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableKind {
    Binary,
    Integer,
    Continuous,
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableKind::Binary => write!(f, "binary"),
            VariableKind::Integer => write!(f, "integer"),
            VariableKind::Continuous => write!(f, "continuous"),
        }
    }
}

/// A decision variable with extended-real bounds (`±f64::INFINITY` sentinels).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VariableKind,
    #[serde(with = "schema::extended_real")]
    pub lower: f64,
    #[serde(with = "schema::extended_real")]
    pub upper: f64,
}

impl Variable {
    pub fn binary(name: impl Into<String>) -> Self {
        Variable { name: name.into(), kind: VariableKind::Binary, lower: 0.0, upper: 1.0 }
    }

    pub fn integer(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        Variable { name: name.into(), kind: VariableKind::Integer, lower, upper }
    }

    pub fn continuous(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        Variable { name: name.into(), kind: VariableKind::Continuous, lower, upper }
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.kind, VariableKind::Binary | VariableKind::Integer)
    }
}

/// Unary transcendental function tag carried by a single factor of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transcendental {
    Exp,
    Log,
    Sin,
    Cos,
}

impl fmt::Display for Transcendental {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transcendental::Exp => write!(f, "exp"),
            Transcendental::Log => write!(f, "log"),
            Transcendental::Sin => write!(f, "sin"),
            Transcendental::Cos => write!(f, "cos"),
        }
    }
}

/// One multiplicative factor `var^exp`, optionally wrapped by a transcendental
/// function (in which case the exponent must be 1, e.g. `exp(x)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub var: String,
    #[serde(default = "schema::one")]
    pub exp: u32,
    #[serde(rename = "fn", default, skip_serializing_if = "Option::is_none")]
    pub func: Option<Transcendental>,
}

impl Factor {
    pub fn new(var: impl Into<String>, exp: u32) -> Self {
        Factor { var: var.into(), exp, func: None }
    }

    pub fn transcendental(var: impl Into<String>, func: Transcendental) -> Self {
        Factor { var: var.into(), exp: 1, func: Some(func) }
    }
}

/// An additive term: `coeff * Π factors`. Empty factors means a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    #[serde(default)]
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn constant(coeff: f64) -> Self {
        Term { coeff, factors: Vec::new() }
    }

    pub fn linear(coeff: f64, var: impl Into<String>) -> Self {
        Term { coeff, factors: vec![Factor::new(var, 1)] }
    }

    pub fn power(coeff: f64, var: impl Into<String>, exp: u32) -> Self {
        Term { coeff, factors: vec![Factor::new(var, exp)] }
    }

    pub fn bilinear(coeff: f64, a: impl Into<String>, b: impl Into<String>) -> Self {
        Term { coeff, factors: vec![Factor::new(a, 1), Factor::new(b, 1)] }
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of factor exponents.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.exp).sum()
    }

    pub fn has_transcendental(&self) -> bool {
        self.factors.iter().any(|f| f.func.is_some())
    }

    /// Canonical multiplicative signature used for merging duplicate terms.
    fn signature(&self) -> Vec<(String, u32, Option<Transcendental>)> {
        let mut sig: Vec<_> =
            self.factors.iter().map(|f| (f.var.clone(), f.exp, f.func)).collect();
        sig.sort();
        sig
    }
}

/// A sum of terms. Construction through [`Expression::from_terms`] merges
/// terms with identical factor signatures and drops exact-zero coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Expression {
    pub terms: Vec<Term>,
}

impl Expression {
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut order: Vec<Vec<(String, u32, Option<Transcendental>)>> = Vec::new();
        let mut merged: HashMap<Vec<(String, u32, Option<Transcendental>)>, Term> =
            HashMap::new();
        for term in terms {
            let sig = term.signature();
            match merged.get_mut(&sig) {
                Some(existing) => existing.coeff += term.coeff,
                None => {
                    order.push(sig.clone());
                    merged.insert(sig, term);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|sig| merged.remove(&sig))
            .filter(|t| t.coeff != 0.0)
            .collect();
        Expression { terms }
    }

    /// Convenience constructor for a linear combination `Σ coeff_i · var_i`.
    pub fn linear<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (f64, S)>,
        S: Into<String>,
    {
        Expression::from_terms(pairs.into_iter().map(|(c, v)| Term::linear(c, v)).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max over terms of the sum of factor exponents; 0 for constants/empty.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    pub fn has_transcendental(&self) -> bool {
        self.terms.iter().any(Term::has_transcendental)
    }

    pub fn is_linear(&self) -> bool {
        self.degree() <= 1 && !self.has_transcendental()
    }

    /// Names of all variables referenced by this expression.
    pub fn variables(&self) -> BTreeSet<&str> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.var.as_str()))
            .collect()
    }

    /// Evaluate at a point; missing variables evaluate as 0.
    pub fn evaluate(&self, point: &BTreeMap<String, f64>) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = t.coeff;
                for f in &t.factors {
                    let x = point.get(&f.var).copied().unwrap_or(0.0);
                    let base = x.powi(f.exp as i32);
                    v *= match f.func {
                        None => base,
                        Some(Transcendental::Exp) => x.exp(),
                        Some(Transcendental::Log) => x.ln(),
                        Some(Transcendental::Sin) => x.sin(),
                        Some(Transcendental::Cos) => x.cos(),
                    };
                }
                v
            })
            .sum()
    }

    fn merged(&self) -> Expression {
        Expression::from_terms(self.terms.clone())
    }

    /// Order-insensitive equality on merged terms with exact coefficients.
    pub fn same_terms(&self, other: &Expression) -> bool {
        let key = |e: &Expression| {
            let mut m: Vec<_> = e
                .merged()
                .terms
                .into_iter()
                .map(|t| (t.signature(), t.coeff))
                .collect();
            m.sort_by(|a, b| a.0.cmp(&b.0));
            m
        };
        key(self) == key(other)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let coeff = t.coeff;
            if i == 0 {
                if coeff < 0.0 {
                    write!(f, "-")?;
                }
            } else if coeff < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            if t.is_constant() {
                write!(f, "{mag}")?;
            } else {
                if mag != 1.0 {
                    write!(f, "{mag} ")?;
                }
                for (j, factor) in t.factors.iter().enumerate() {
                    if j > 0 {
                        write!(f, " * ")?;
                    }
                    match factor.func {
                        Some(func) => write!(f, "{func}({})", factor.var)?,
                        None if factor.exp == 1 => write!(f, "{}", factor.var)?,
                        None => write!(f, "{}^{}", factor.var, factor.exp)?,
                    }
                }
            }
        }
        Ok(())
    }
}

/// Constraint relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Le => write!(f, "<="),
            Relation::Eq => write!(f, "="),
            Relation::Ge => write!(f, ">="),
        }
    }
}

/// Indicator guard: the constraint is enforced when `var` (binary) equals
/// `value`. The guard variable must not appear in the constraint body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Guard {
    pub var: String,
    pub value: u8,
}

/// Structural kind of a constraint, derived rather than stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Linear,
    Indicator,
    Quadratic,
    General,
}

/// `body relation rhs`, optionally guarded by a binary indicator variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub body: Expression,
    #[serde(with = "schema::relation")]
    pub relation: Relation,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<Guard>,
}

impl Constraint {
    pub fn new(
        name: impl Into<String>,
        body: Expression,
        relation: Relation,
        rhs: f64,
    ) -> Self {
        Constraint { name: name.into(), body, relation, rhs, guard: None }
    }

    pub fn with_guard(mut self, var: impl Into<String>, value: u8) -> Self {
        self.guard = Some(Guard { var: var.into(), value });
        self
    }

    /// Derivation rule: guard present ⇒ indicator; else degree-2 without
    /// transcendental ⇒ quadratic; else degree > 2 or transcendental ⇒
    /// general; else linear.
    pub fn kind(&self) -> ConstraintKind {
        if self.guard.is_some() {
            return ConstraintKind::Indicator;
        }
        let degree = self.body.degree();
        let transcendental = self.body.has_transcendental();
        if degree == 2 && !transcendental {
            ConstraintKind::Quadratic
        } else if degree > 2 || transcendental {
            ConstraintKind::General
        } else {
            ConstraintKind::Linear
        }
    }

    /// Whether a point satisfies this constraint within `tol`. Guarded
    /// constraints are vacuously satisfied when the guard is inactive.
    pub fn satisfied_by(&self, point: &BTreeMap<String, f64>, tol: f64) -> bool {
        if let Some(g) = &self.guard {
            let v = point.get(&g.var).copied().unwrap_or(0.0);
            if (v - f64::from(g.value)).abs() > 0.5 {
                return true;
            }
        }
        let lhs = self.body.evaluate(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs + tol,
            Relation::Ge => lhs >= self.rhs - tol,
            Relation::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = &self.guard {
            write!(f, "{}: {} = {} -> ", self.name, g.var, g.value)?;
        } else {
            write!(f, "{}: ", self.name)?;
        }
        write!(f, "{} {} {}", self.body, self.relation, self.rhs)
    }
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// A complete problem instance. The serialized form is the canonical JSON
/// exchange document with exactly the fields `name`, `sense`, `objective`,
/// `variables`, `constraints`, `metadata` (see [`ProblemData::to_json`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemData {
    pub name: String,
    pub sense: Sense,
    pub objective: Expression,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

/// A single validation finding, pointing at the offending element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { location: location.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Error for operations that require a structurally valid instance.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("validation failed: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("model document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl ProblemData {
    pub fn new(name: impl Into<String>, sense: Sense) -> Self {
        ProblemData {
            name: name.into(),
            sense,
            objective: Expression::default(),
            variables: Vec::new(),
            constraints: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Map from variable name to its index in declaration order.
    pub fn variable_index(&self) -> HashMap<&str, usize> {
        self.variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect()
    }

    /// Checks every structural invariant and returns one diagnostic per
    /// violation; an empty list means the instance is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.variables.is_empty() {
            out.push(Diagnostic::new("problem", "instance declares no variables"));
        }
        let mut seen: HashSet<&str> = HashSet::new();
        for v in &self.variables {
            let loc = format!("variable {}", v.name);
            if !seen.insert(v.name.as_str()) {
                out.push(Diagnostic::new(&loc, "duplicate variable name"));
            }
            if v.lower.is_nan() || v.upper.is_nan() {
                out.push(Diagnostic::new(&loc, "bound is NaN"));
            } else if v.lower > v.upper {
                out.push(Diagnostic::new(
                    &loc,
                    format!("lower bound {} exceeds upper bound {}", v.lower, v.upper),
                ));
            }
            if v.kind == VariableKind::Binary && (v.lower < 0.0 || v.upper > 1.0) {
                out.push(Diagnostic::new(&loc, "bound violates binary domain [0,1]"));
            }
        }
        let declared: HashSet<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
        self.check_expression(&self.objective, "objective", &declared, &mut out);
        let mut cnames: HashSet<&str> = HashSet::new();
        for c in &self.constraints {
            let loc = format!("constraint {}", c.name);
            if !cnames.insert(c.name.as_str()) {
                out.push(Diagnostic::new(&loc, "duplicate constraint name"));
            }
            if !c.rhs.is_finite() {
                out.push(Diagnostic::new(&loc, "right-hand side is not finite"));
            }
            self.check_expression(&c.body, &loc, &declared, &mut out);
            if let Some(g) = &c.guard {
                if g.value > 1 {
                    out.push(Diagnostic::new(&loc, "guard activation value must be 0 or 1"));
                }
                match self.variable(&g.var) {
                    None => out.push(Diagnostic::new(
                        &loc,
                        format!("unknown variable {} in guard", g.var),
                    )),
                    Some(v) if v.kind != VariableKind::Binary => out.push(Diagnostic::new(
                        &loc,
                        format!("guard variable {} is not binary", g.var),
                    )),
                    Some(_) => {}
                }
                if c.body.variables().contains(g.var.as_str()) {
                    out.push(Diagnostic::new(
                        &loc,
                        format!("guard variable {} appears in constraint body", g.var),
                    ));
                }
            }
        }
        out
    }

    fn check_expression(
        &self,
        expr: &Expression,
        loc: &str,
        declared: &HashSet<&str>,
        out: &mut Vec<Diagnostic>,
    ) {
        let mut sigs = HashSet::new();
        for t in &expr.terms {
            if !t.coeff.is_finite() {
                out.push(Diagnostic::new(loc, "coefficient is not finite"));
            }
            let mut tagged = 0;
            for f in &t.factors {
                if f.exp == 0 {
                    out.push(Diagnostic::new(loc, format!("factor {} has zero exponent", f.var)));
                }
                if f.func.is_some() {
                    tagged += 1;
                    if f.exp != 1 {
                        out.push(Diagnostic::new(
                            loc,
                            format!("transcendental factor {} must have exponent 1", f.var),
                        ));
                    }
                }
                if !declared.contains(f.var.as_str()) {
                    out.push(Diagnostic::new(loc, format!("unknown variable {}", f.var)));
                }
            }
            if tagged > 1 {
                out.push(Diagnostic::new(loc, "term carries more than one transcendental tag"));
            }
            if !sigs.insert(t.signature()) {
                out.push(Diagnostic::new(loc, "duplicate term signature"));
            }
        }
    }

    /// Rewrites every constraint so all variable terms sit on the body side
    /// and the right-hand side is a plain constant: duplicate terms are
    /// merged, zero coefficients dropped, and constant body terms folded into
    /// the rhs. Idempotent.
    pub fn normalize(&self) -> Result<ProblemData, ModelError> {
        let declared: HashSet<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
        let mut refs = Vec::new();
        self.check_expression(&self.objective, "objective", &declared, &mut refs);
        for c in &self.constraints {
            self.check_expression(&c.body, &format!("constraint {}", c.name), &declared, &mut refs);
        }
        let refs: Vec<Diagnostic> =
            refs.into_iter().filter(|d| d.message.starts_with("unknown variable")).collect();
        if !refs.is_empty() {
            return Err(ModelError::Invalid(refs));
        }

        let mut pd = self.clone();
        pd.objective = self.objective.merged();
        pd.constraints = self
            .constraints
            .iter()
            .map(|c| {
                let merged = c.body.merged();
                let (constants, variable_terms): (Vec<Term>, Vec<Term>) =
                    merged.terms.into_iter().partition(Term::is_constant);
                let shift: f64 = constants.iter().map(|t| t.coeff).sum();
                Constraint {
                    name: c.name.clone(),
                    body: Expression { terms: variable_terms },
                    relation: c.relation,
                    rhs: c.rhs - shift,
                    guard: c.guard.clone(),
                }
            })
            .collect();
        Ok(pd)
    }

    /// Order-insensitive structural equality: identical name, sense and
    /// metadata, the same variables (as a name-keyed set) and the same
    /// constraints matched by name with equal term multisets.
    pub fn structurally_eq(&self, other: &ProblemData) -> bool {
        if self.name != other.name
            || self.sense != other.sense
            || self.metadata != other.metadata
            || self.variables.len() != other.variables.len()
            || self.constraints.len() != other.constraints.len()
        {
            return false;
        }
        if !self.objective.same_terms(&other.objective) {
            return false;
        }
        for v in &self.variables {
            match other.variable(&v.name) {
                Some(o) if o.kind == v.kind && o.lower == v.lower && o.upper == v.upper => {}
                _ => return false,
            }
        }
        for c in &self.constraints {
            let Some(o) = other.constraints.iter().find(|o| o.name == c.name) else {
                return false;
            };
            if o.relation != c.relation
                || o.rhs != c.rhs
                || o.guard != c.guard
                || !o.body.same_terms(&c.body)
            {
                return false;
            }
        }
        true
    }

    /// Serializes the canonical JSON document (pretty, stable field order).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serialization cannot fail")
    }

    /// Parses and validates a canonical JSON document.
    pub fn from_json(text: &str) -> Result<ProblemData, ModelError> {
        let pd: ProblemData = serde_json::from_str(text)?;
        let diags = pd.validate();
        if diags.is_empty() {
            Ok(pd)
        } else {
            Err(ModelError::Invalid(diags))
        }
    }
}

/// Free-function form of [`Constraint::kind`].
pub fn classify(c: &Constraint) -> ConstraintKind {
    c.kind()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_var_problem() -> ProblemData {
        let mut pd = ProblemData::new("p", Sense::Minimize);
        pd.variables.push(Variable::continuous("x", 0.0, f64::INFINITY));
        pd.variables.push(Variable::binary("y"));
        pd.objective = Expression::linear(vec![(1.0, "x")]);
        pd
    }

    #[test]
    fn classify_follows_derivation_rule() {
        let linear = Constraint::new(
            "c",
            Expression::linear(vec![(2.0, "x1"), (3.0, "x2")]),
            Relation::Le,
            100.0,
        );
        assert_eq!(linear.kind(), ConstraintKind::Linear);

        let quad = Constraint::new(
            "q",
            Expression::from_terms(vec![
                Term::linear(1.0, "z"),
                Term::power(-0.5, "x1", 2),
                Term::power(-0.3, "x2", 2),
            ]),
            Relation::Ge,
            0.0,
        );
        assert_eq!(quad.kind(), ConstraintKind::Quadratic);

        let general = Constraint::new(
            "g",
            Expression::from_terms(vec![Term {
                coeff: 1.0,
                factors: vec![
                    Factor::new("x1", 1),
                    Factor::transcendental("x2", Transcendental::Exp),
                ],
            }]),
            Relation::Le,
            100.0,
        );
        assert_eq!(general.kind(), ConstraintKind::General);

        let indicator = Constraint::new(
            "i",
            Expression::linear(vec![(1.0, "x1")]),
            Relation::Ge,
            5.0,
        )
        .with_guard("y1", 1);
        assert_eq!(indicator.kind(), ConstraintKind::Indicator);

        let cubic =
            Constraint::new("cu", Expression::from_terms(vec![Term::power(1.0, "x", 3)]), Relation::Le, 8.0);
        assert_eq!(cubic.kind(), ConstraintKind::General);
    }

    #[test]
    fn normalize_moves_constants_and_merges() {
        // x >= -95 + 100 y encoded with the constant still in the body:
        // body x - 100 y + 95, rhs 0.
        let mut pd = two_var_problem();
        pd.constraints.push(Constraint::new(
            "c0",
            Expression::from_terms(vec![
                Term::linear(1.0, "x"),
                Term::linear(-100.0, "y"),
                Term::constant(95.0),
            ]),
            Relation::Ge,
            0.0,
        ));
        let normalized = pd.normalize().unwrap();
        let c = &normalized.constraints[0];
        assert_eq!(c.rhs, -95.0);
        assert!(c.body.same_terms(&Expression::linear(vec![(1.0, "x"), (-100.0, "y")])));

        // Idempotence.
        let again = normalized.normalize().unwrap();
        assert_eq!(again, normalized);
    }

    #[test]
    fn normalize_merges_duplicate_terms() {
        let mut pd = two_var_problem();
        pd.constraints.push(Constraint::new(
            "dup",
            Expression {
                terms: vec![Term::linear(1.0, "x"), Term::linear(1.0, "x")],
            },
            Relation::Le,
            2.0,
        ));
        let normalized = pd.normalize().unwrap();
        let c = &normalized.constraints[0];
        assert_eq!(c.body.terms.len(), 1);
        assert_eq!(c.body.terms[0].coeff, 2.0);
        assert_eq!(c.rhs, 2.0);
        assert!(normalized
            .validate()
            .iter()
            .all(|d| !d.message.contains("duplicate term")));
    }

    #[test]
    fn normalize_rejects_unknown_reference() {
        let mut pd = two_var_problem();
        pd.constraints.push(Constraint::new(
            "bad",
            Expression::linear(vec![(1.0, "ghost")]),
            Relation::Le,
            0.0,
        ));
        let err = pd.normalize().unwrap_err();
        assert!(err.to_string().contains("bad"));
        assert!(err.to_string().contains("ghost"));
    }

    #[test]
    fn validate_reports_each_violation() {
        let mut pd = two_var_problem();
        pd.variables.push(Variable { name: "b".into(), kind: VariableKind::Binary, lower: 0.0, upper: 2.0 });
        pd.constraints.push(Constraint::new(
            "c",
            Expression::linear(vec![(1.0, "ghost")]),
            Relation::Le,
            1.0,
        ));
        let diags = pd.validate();
        assert!(diags.iter().any(|d| d.message.contains("binary domain")));
        assert!(diags.iter().any(|d| d.message.contains("unknown variable ghost")));

        let clean = two_var_problem();
        assert!(clean.validate().is_empty());
    }

    #[test]
    fn validate_guard_rules() {
        let mut pd = two_var_problem();
        pd.constraints.push(
            Constraint::new("i", Expression::linear(vec![(1.0, "x")]), Relation::Le, 1.0)
                .with_guard("x", 1),
        );
        let diags = pd.validate();
        assert!(diags.iter().any(|d| d.message.contains("not binary")));

        let mut pd2 = two_var_problem();
        pd2.constraints.push(
            Constraint::new("i", Expression::linear(vec![(1.0, "y")]), Relation::Le, 1.0)
                .with_guard("y", 1),
        );
        assert!(pd2
            .validate()
            .iter()
            .any(|d| d.message.contains("appears in constraint body")));
    }

    #[test]
    fn json_roundtrip_preserves_structure() {
        let mut pd = two_var_problem();
        pd.variables.push(Variable::continuous("free", f64::NEG_INFINITY, f64::INFINITY));
        pd.constraints.push(
            Constraint::new("c0", Expression::linear(vec![(2.5, "x")]), Relation::Le, 10.0)
                .with_guard("y", 0),
        );
        pd.metadata.insert("class_id".into(), "demo".into());
        let text = pd.to_json();
        let back = ProblemData::from_json(&text).unwrap();
        assert_eq!(back, pd);
        assert!(text.contains("\"-inf\""));
    }

    #[test]
    fn json_accepts_strict_and_loose_relations() {
        let doc = r#"{
            "name": "t", "sense": "maximize",
            "objective": {"terms": [{"coeff": 1.0, "factors": [{"var": "x"}]}]},
            "variables": [{"name": "x", "kind": "continuous", "lower": 0.0, "upper": 5.0}],
            "constraints": [
                {"name": "a", "body": {"terms": [{"coeff": 1.0, "factors": [{"var": "x"}]}]}, "relation": "<", "rhs": 4.0},
                {"name": "b", "body": {"terms": [{"coeff": 1.0, "factors": [{"var": "x"}]}]}, "relation": ">", "rhs": 0.0}
            ],
            "metadata": {}
        }"#;
        let pd = ProblemData::from_json(doc).unwrap();
        assert_eq!(pd.constraints[0].relation, Relation::Le);
        assert_eq!(pd.constraints[1].relation, Relation::Ge);
    }
}
