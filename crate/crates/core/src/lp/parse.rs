//! LP document reader.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::LpParseError;
use crate::model::{
    Constraint, Expression, Factor, Guard, ProblemData, Relation, Sense, Term, Variable,
    VariableKind,
};

const INF_CUTOFF: f64 = 1e30;

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Word,
    Num(f64),
    Op,
}

#[derive(Debug, Clone)]
struct Tok {
    text: String,
    kind: TokKind,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, LpParseError> {
    let mut toks = Vec::new();
    for (li, raw_line) in text.lines().enumerate() {
        let line = li + 1;
        let content = match raw_line.find('\\') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                toks.push(Tok { text: word, kind: TokKind::Word, line, col });
                continue;
            }
            if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).map_or(false, |d| d.is_ascii_digit())) {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let raw: String = chars[start..i].iter().collect();
                let value: f64 = raw.parse().map_err(|_| {
                    LpParseError::new(line, col, format!("invalid number {raw:?}"))
                })?;
                toks.push(Tok { text: raw, kind: TokKind::Num(value), line, col });
                continue;
            }
            let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let op = match two.as_str() {
                "<=" | ">=" | "=<" | "=>" | "->" => {
                    i += 2;
                    two
                }
                _ => match c {
                    '<' | '>' | '=' | '+' | '-' | '*' | '^' | '[' | ']' | '/' | ':' => {
                        i += 1;
                        c.to_string()
                    }
                    other => {
                        return Err(LpParseError::new(
                            line,
                            col,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                },
            };
            toks.push(Tok { text: op, kind: TokKind::Op, line, col });
        }
    }
    Ok(toks)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    Objective(Sense),
    SubjectTo,
    Bounds,
    Binaries,
    Generals,
    End,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    last_line: usize,
}

/// Variable registry preserving first-appearance order.
#[derive(Default)]
struct VarTable {
    order: Vec<String>,
    index: HashMap<String, usize>,
    lower: HashMap<String, f64>,
    upper: HashMap<String, f64>,
    binaries: HashSet<String>,
    generals: HashSet<String>,
}

impl VarTable {
    fn touch(&mut self, name: &str) {
        if !self.index.contains_key(name) {
            self.index.insert(name.to_string(), self.order.len());
            self.order.push(name.to_string());
        }
    }

    fn finish(self) -> Vec<Variable> {
        self.order
            .into_iter()
            .map(|name| {
                let kind = if self.binaries.contains(&name) {
                    VariableKind::Binary
                } else if self.generals.contains(&name) {
                    VariableKind::Integer
                } else {
                    VariableKind::Continuous
                };
                let default_upper = if kind == VariableKind::Binary { 1.0 } else { f64::INFINITY };
                Variable {
                    lower: self.lower.get(&name).copied().unwrap_or(0.0),
                    upper: self.upper.get(&name).copied().unwrap_or(default_upper),
                    name,
                    kind,
                }
            })
            .collect()
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if let Some(t) = &t {
            self.last_line = t.line;
        }
        self.pos += 1;
        t
    }

    fn error_here(&self, message: impl Into<String>) -> LpParseError {
        match self.peek() {
            Some(t) => LpParseError::new(t.line, t.col, message),
            None => LpParseError::new(self.last_line, 0, message),
        }
    }

    fn eof_error(&self) -> LpParseError {
        LpParseError::new(self.last_line, 0, "unexpected end of input (missing End?)")
    }

    /// Matches a section header at the cursor without consuming it.
    fn peek_section(&self) -> Option<(Section, usize)> {
        let word = match self.peek() {
            Some(Tok { kind: TokKind::Word, text, .. }) => text.to_ascii_lowercase(),
            _ => return None,
        };
        let next_word = match self.peek_at(1) {
            Some(Tok { kind: TokKind::Word, text, .. }) => Some(text.to_ascii_lowercase()),
            _ => None,
        };
        match word.as_str() {
            "minimize" | "minimise" | "min" => Some((Section::Objective(Sense::Minimize), 1)),
            "maximize" | "maximise" | "max" => Some((Section::Objective(Sense::Maximize), 1)),
            "subject" if next_word.as_deref() == Some("to") => Some((Section::SubjectTo, 2)),
            "such" if next_word.as_deref() == Some("that") => Some((Section::SubjectTo, 2)),
            "st" => Some((Section::SubjectTo, 1)),
            "bounds" | "bound" => Some((Section::Bounds, 1)),
            "binaries" | "binary" | "bin" => Some((Section::Binaries, 1)),
            "generals" | "general" | "gen" => Some((Section::Generals, 1)),
            "end" => Some((Section::End, 1)),
            _ => None,
        }
    }

    fn take_section(&mut self) -> Option<Section> {
        let (section, len) = self.peek_section()?;
        self.pos += len;
        if let Some(t) = self.toks.get(self.pos.saturating_sub(1)) {
            self.last_line = t.line;
        }
        Some(section)
    }

    fn at_relation(&self) -> Option<Relation> {
        match self.peek() {
            Some(Tok { kind: TokKind::Op, text, .. }) => match text.as_str() {
                "<=" | "=<" | "<" => Some(Relation::Le),
                ">=" | "=>" | ">" => Some(Relation::Ge),
                "=" => Some(Relation::Eq),
                _ => None,
            },
            _ => None,
        }
    }

    fn parse_signed_number(&mut self) -> Result<f64, LpParseError> {
        let mut sign = 1.0;
        if let Some(Tok { kind: TokKind::Op, text, .. }) = self.peek() {
            if text == "-" {
                sign = -1.0;
                self.next();
            } else if text == "+" {
                self.next();
            }
        }
        match self.next() {
            Some(Tok { kind: TokKind::Num(v), .. }) => Ok(sign * v),
            Some(t) => Err(LpParseError::new(t.line, t.col, format!("expected a number, found {:?}", t.text))),
            None => Err(self.eof_error()),
        }
    }

    fn parse_factor(&mut self, vars: &mut VarTable) -> Result<Factor, LpParseError> {
        let var = match self.next() {
            Some(Tok { kind: TokKind::Word, text, .. }) => text,
            Some(t) => {
                return Err(LpParseError::new(
                    t.line,
                    t.col,
                    format!("expected a variable name, found {:?}", t.text),
                ))
            }
            None => return Err(self.eof_error()),
        };
        vars.touch(&var);
        let mut exp = 1u32;
        if matches!(self.peek(), Some(Tok { kind: TokKind::Op, text, .. }) if text == "^") {
            self.next();
            let n = self.parse_signed_number()?;
            if n < 1.0 || n.fract() != 0.0 {
                return Err(
                    self.error_here(format!("exponent must be a positive integer (got {n})"))
                );
            }
            exp = n as u32;
        }
        Ok(Factor::new(var, exp))
    }

    /// One multiplicative chain: `[num] [var [^ n] (* var [^ n])*]`.
    /// Factors join only through an explicit `*`.
    fn parse_term(&mut self, vars: &mut VarTable) -> Result<Term, LpParseError> {
        let mut coeff = 1.0;
        let mut saw_num = false;
        if let Some(Tok { kind: TokKind::Num(v), .. }) = self.peek() {
            coeff = *v;
            saw_num = true;
            self.next();
        }
        let mut factors = Vec::new();
        if matches!(self.peek(), Some(Tok { kind: TokKind::Word, .. }))
            && self.peek_section().is_none()
        {
            factors.push(self.parse_factor(vars)?);
            while matches!(self.peek(), Some(Tok { kind: TokKind::Op, text, .. }) if text == "*") {
                self.next();
                factors.push(self.parse_factor(vars)?);
            }
        }
        if factors.is_empty() && !saw_num {
            return Err(self.error_here("expected a term"));
        }
        Ok(Term { coeff, factors })
    }

    /// Sum of terms and bracketed quadratic blocks; stops at a relation,
    /// section keyword, `]`, or constraint label.
    fn parse_expression(&mut self, vars: &mut VarTable) -> Result<Expression, LpParseError> {
        let mut terms: Vec<Term> = Vec::new();
        let mut sign = 1.0;
        let mut explicit_sign = false;
        let mut first = true;
        loop {
            if self.at_relation().is_some() && !explicit_sign {
                break;
            }
            match self.peek() {
                None => break,
                Some(Tok { kind: TokKind::Op, text, .. }) if text == "+" || text == "-" => {
                    if explicit_sign {
                        return Err(self.error_here("consecutive sign operators"));
                    }
                    sign = if text == "-" { -1.0 } else { 1.0 };
                    explicit_sign = true;
                    self.next();
                }
                Some(Tok { kind: TokKind::Op, text, .. }) if text == "[" => {
                    self.next();
                    let block_sign = sign;
                    let mut block = Vec::new();
                    let mut bsign = 1.0;
                    let mut bfirst = true;
                    loop {
                        match self.peek() {
                            Some(Tok { kind: TokKind::Op, text, .. }) if text == "]" => {
                                self.next();
                                break;
                            }
                            Some(Tok { kind: TokKind::Op, text, .. })
                                if text == "+" || text == "-" =>
                            {
                                bsign = if text == "-" { -1.0 } else { 1.0 };
                                self.next();
                            }
                            Some(_) => {
                                if !bfirst && bsign == 1.0 {
                                    // sign already consumed above or implicit +
                                }
                                let mut t = self.parse_term(vars)?;
                                t.coeff *= bsign;
                                block.push(t);
                                bsign = 1.0;
                                bfirst = false;
                            }
                            None => return Err(self.eof_error()),
                        }
                    }
                    // Compatibility divisor: "] / 2".
                    if matches!(self.peek(), Some(Tok { kind: TokKind::Op, text, .. }) if text == "/")
                    {
                        self.next();
                        let d = self.parse_signed_number()?;
                        if d == 0.0 {
                            return Err(self.error_here("division by zero after bracket"));
                        }
                        for t in &mut block {
                            t.coeff /= d;
                        }
                    }
                    for mut t in block {
                        t.coeff *= block_sign;
                        terms.push(t);
                    }
                    sign = 1.0;
                    explicit_sign = false;
                    first = false;
                }
                Some(Tok { kind: TokKind::Word, .. }) if self.peek_section().is_some() => break,
                // A label like `name:` starts the next constraint.
                Some(Tok { kind: TokKind::Word, .. })
                    if matches!(
                        self.peek_at(1),
                        Some(Tok { kind: TokKind::Op, text, .. }) if text == ":"
                    ) && !explicit_sign =>
                {
                    break
                }
                Some(_) => {
                    if !first && !explicit_sign {
                        return Err(self.error_here("expected '+', '-', or a relation"));
                    }
                    let mut t = self.parse_term(vars)?;
                    t.coeff *= sign;
                    terms.push(t);
                    sign = 1.0;
                    explicit_sign = false;
                    first = false;
                }
            }
        }
        if explicit_sign {
            return Err(self.error_here("dangling sign operator"));
        }
        Ok(Expression::from_terms(terms))
    }

    fn parse_bound_value(&mut self) -> Result<f64, LpParseError> {
        let mut sign = 1.0;
        if let Some(Tok { kind: TokKind::Op, text, .. }) = self.peek() {
            if text == "-" || text == "+" {
                sign = if text == "-" { -1.0 } else { 1.0 };
                self.next();
            }
        }
        match self.next() {
            Some(Tok { kind: TokKind::Num(v), .. }) => {
                Ok(if v.abs() >= INF_CUTOFF { sign * f64::INFINITY } else { sign * v })
            }
            Some(Tok { kind: TokKind::Word, text, line, col }) => {
                match text.to_ascii_lowercase().as_str() {
                    "inf" | "infinity" => Ok(sign * f64::INFINITY),
                    other => Err(LpParseError::new(
                        line,
                        col,
                        format!("expected a bound value, found {other:?}"),
                    )),
                }
            }
            Some(t) => Err(LpParseError::new(t.line, t.col, "expected a bound value")),
            None => Err(self.eof_error()),
        }
    }

    fn next_is_value(&self) -> bool {
        match self.peek() {
            Some(Tok { kind: TokKind::Num(_), .. }) => true,
            Some(Tok { kind: TokKind::Word, text, .. }) => {
                matches!(text.to_ascii_lowercase().as_str(), "inf" | "infinity")
            }
            Some(Tok { kind: TokKind::Op, text, .. }) => text == "-" || text == "+",
            None => false,
        }
    }

    fn parse_bounds_line(&mut self, vars: &mut VarTable) -> Result<(), LpParseError> {
        if self.next_is_value() {
            // value rel var [rel value]
            let lhs = self.parse_bound_value()?;
            let rel = self.at_relation().ok_or_else(|| self.error_here("expected a relation"))?;
            self.next();
            let var = match self.next() {
                Some(Tok { kind: TokKind::Word, text, .. }) => text,
                _ => return Err(self.error_here("expected a variable name")),
            };
            vars.touch(&var);
            let (mut lo, mut hi) = (None, None);
            match rel {
                Relation::Le => lo = Some(lhs),
                Relation::Ge => hi = Some(lhs),
                Relation::Eq => {
                    lo = Some(lhs);
                    hi = Some(lhs);
                }
            }
            if let Some(second) = self.at_relation() {
                self.next();
                let rhs = self.parse_bound_value()?;
                if second != rel || rel == Relation::Eq {
                    return Err(self.error_here("inconsistent relation chain in bounds"));
                }
                match second {
                    Relation::Le => hi = Some(rhs),
                    Relation::Ge => lo = Some(rhs),
                    Relation::Eq => unreachable!(),
                }
            }
            if let Some(lo) = lo {
                vars.lower.insert(var.clone(), lo);
            }
            if let Some(hi) = hi {
                vars.upper.insert(var, hi);
            }
            return Ok(());
        }
        // var free | var rel value
        let var = match self.next() {
            Some(Tok { kind: TokKind::Word, text, .. }) => text,
            Some(t) => {
                return Err(LpParseError::new(t.line, t.col, "expected a variable name in bounds"))
            }
            None => return Err(self.eof_error()),
        };
        vars.touch(&var);
        if matches!(self.peek(), Some(Tok { kind: TokKind::Word, text, .. }) if text.eq_ignore_ascii_case("free"))
        {
            self.next();
            vars.lower.insert(var.clone(), f64::NEG_INFINITY);
            vars.upper.insert(var, f64::INFINITY);
            return Ok(());
        }
        let rel = self.at_relation().ok_or_else(|| self.error_here("expected a relation or 'free'"))?;
        self.next();
        let value = self.parse_bound_value()?;
        match rel {
            Relation::Le => {
                vars.upper.insert(var, value);
            }
            Relation::Ge => {
                vars.lower.insert(var, value);
            }
            Relation::Eq => {
                vars.lower.insert(var.clone(), value);
                vars.upper.insert(var, value);
            }
        }
        Ok(())
    }
}

fn scan_comments(text: &str) -> (Option<String>, BTreeMap<String, String>) {
    let mut name = None;
    let mut metadata = BTreeMap::new();
    for line in text.lines() {
        let trimmed = line.trim_start();
        let Some(body) = trimmed.strip_prefix('\\') else { continue };
        let body = body.trim();
        if let Some(rest) = body.strip_prefix("Problem:") {
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = body.strip_prefix("meta ") {
            if let Some((k, v)) = rest.split_once('=') {
                metadata.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
    }
    (name, metadata)
}

/// Parses LP text into a structurally valid instance.
pub fn parse_lp(text: &str) -> Result<ProblemData, LpParseError> {
    let (name, metadata) = scan_comments(text);
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, last_line: 1 };
    let mut vars = VarTable::default();

    let sense = match p.take_section() {
        Some(Section::Objective(sense)) => sense,
        _ => return Err(p.error_here("expected 'Minimize' or 'Maximize'")),
    };
    // Optional objective label.
    if matches!(p.peek(), Some(Tok { kind: TokKind::Word, .. }))
        && matches!(p.peek_at(1), Some(Tok { kind: TokKind::Op, text, .. }) if text == ":")
        && p.peek_section().is_none()
    {
        p.next();
        p.next();
    }
    let objective = p.parse_expression(&mut vars)?;

    match p.take_section() {
        Some(Section::SubjectTo) => {}
        _ => return Err(p.error_here("expected 'Subject To'")),
    }

    let mut constraints: Vec<Constraint> = Vec::new();
    let mut cnames: HashSet<String> = HashSet::new();
    loop {
        if p.peek_section().is_some() {
            break;
        }
        if p.peek().is_none() {
            return Err(p.eof_error());
        }
        // Constraints carry a `name:` label in this dialect; a bare word here
        // is an unrecognized section keyword.
        let name = if matches!(p.peek(), Some(Tok { kind: TokKind::Word, .. }))
            && matches!(p.peek_at(1), Some(Tok { kind: TokKind::Op, text, .. }) if text == ":")
        {
            let t = p.next().unwrap();
            p.next();
            if !cnames.insert(t.text.clone()) {
                return Err(LpParseError::new(
                    t.line,
                    t.col,
                    format!("duplicate constraint name {:?}", t.text),
                ));
            }
            t.text
        } else {
            let near = p.peek().map(|t| t.text.clone()).unwrap_or_default();
            return Err(p.error_here(format!(
                "expected a labeled constraint or unknown section near {near:?}"
            )));
        };
        // Indicator prefix: guard = 0|1 ->
        let guard = if matches!(p.peek(), Some(Tok { kind: TokKind::Word, .. }))
            && matches!(p.peek_at(1), Some(Tok { kind: TokKind::Op, text, .. }) if text == "=")
            && matches!(p.peek_at(2), Some(Tok { kind: TokKind::Num(_), .. }))
            && matches!(p.peek_at(3), Some(Tok { kind: TokKind::Op, text, .. }) if text == "->")
        {
            let gvar = p.next().unwrap().text;
            p.next();
            let vtok = p.next().unwrap();
            let value = match vtok.kind {
                TokKind::Num(v) if v == 0.0 || v == 1.0 => v as u8,
                _ => {
                    return Err(LpParseError::new(
                        vtok.line,
                        vtok.col,
                        "indicator activation value must be 0 or 1",
                    ))
                }
            };
            p.next();
            vars.touch(&gvar);
            Some(Guard { var: gvar, value })
        } else {
            None
        };
        let body = p.parse_expression(&mut vars)?;
        let relation = match p.at_relation() {
            Some(rel) => {
                p.next();
                rel
            }
            None => return Err(p.error_here("expected a relation in constraint")),
        };
        let rhs = p.parse_signed_number()?;
        if p.at_relation().is_some() {
            return Err(p.error_here("ranged constraints are not supported"));
        }
        constraints.push(Constraint { name, body, relation, rhs, guard });
    }

    let mut saw_end = false;
    while let Some(section) = p.take_section() {
        match section {
            Section::End => {
                saw_end = true;
                break;
            }
            Section::Bounds => {
                while p.peek_section().is_none() && p.peek().is_some() {
                    p.parse_bounds_line(&mut vars)?;
                }
            }
            Section::Binaries | Section::Generals => {
                while p.peek_section().is_none() {
                    match p.next() {
                        Some(Tok { kind: TokKind::Word, text, .. }) => {
                            vars.touch(&text);
                            if section == Section::Binaries {
                                vars.binaries.insert(text);
                            } else {
                                vars.generals.insert(text);
                            }
                        }
                        Some(t) => {
                            return Err(LpParseError::new(
                                t.line,
                                t.col,
                                "expected a variable name",
                            ))
                        }
                        None => return Err(p.eof_error()),
                    }
                }
            }
            Section::Objective(_) | Section::SubjectTo => {
                return Err(p.error_here("section out of order"));
            }
        }
    }
    if !saw_end {
        return Err(match p.peek() {
            Some(t) => LpParseError::new(t.line, t.col, format!("unknown section near {:?}", t.text)),
            None => p.eof_error(),
        });
    }

    let pd = ProblemData {
        name: name.unwrap_or_else(|| "problem".to_string()),
        sense,
        objective,
        variables: vars.finish(),
        constraints,
        metadata,
    };
    let diags = pd.validate();
    if !diags.is_empty() {
        return Err(LpParseError::new(
            0,
            0,
            format!(
                "parsed model fails validation: {}",
                diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
            ),
        ));
    }
    Ok(pd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_milp() {
        let text = "\\ Problem: demo\n\\ meta class_id = knapsack\nMaximize\n  obj: 6 x1 + 10 x2 + 12 x3\nSubject To\n  cap: x1 + 2 x2 + 3 x3 <= 5\nBinaries\n  x1 x2 x3\nEnd\n";
        let pd = parse_lp(text).unwrap();
        assert_eq!(pd.name, "demo");
        assert_eq!(pd.metadata.get("class_id").unwrap(), "knapsack");
        assert_eq!(pd.sense, Sense::Maximize);
        assert_eq!(pd.variables.len(), 3);
        assert!(pd.variables.iter().all(|v| v.kind == VariableKind::Binary));
        assert_eq!(pd.constraints.len(), 1);
        assert_eq!(pd.constraints[0].rhs, 5.0);
    }

    #[test]
    fn strict_relation_maps_to_inclusive() {
        let text = "Minimize\n obj: x\nSubject To\n c0: x < 4\n c1: x > 1\nEnd\n";
        let pd = parse_lp(text).unwrap();
        assert_eq!(pd.constraints[0].relation, Relation::Le);
        assert_eq!(pd.constraints[1].relation, Relation::Ge);
    }

    #[test]
    fn missing_end_is_a_syntax_error() {
        let text = "Minimize\n obj: x\nSubject To\n c0: x <= 4\n";
        let err = parse_lp(text).unwrap_err();
        assert!(err.to_string().contains("End"), "got: {err}");
    }

    #[test]
    fn duplicate_constraint_name_rejected() {
        let text = "Minimize\n obj: x\nSubject To\n c: x <= 4\n c: x >= 1\nEnd\n";
        let err = parse_lp(text).unwrap_err();
        assert!(err.to_string().contains("duplicate constraint name"));
        assert_eq!(err.line, 4);
    }

    #[test]
    fn unknown_section_rejected() {
        let text = "Minimize\n obj: x\nSubject To\n c: x <= 4\nRanges\n r: 1\nEnd\n";
        let err = parse_lp(text).unwrap_err();
        assert!(err.to_string().contains("unknown section"), "got: {err}");
    }

    #[test]
    fn bounds_forms() {
        let text = "Minimize\n obj: a + b + c + d\nSubject To\n c0: a + b + c + d >= 1\nBounds\n a free\n -2 <= b <= 7\n c >= 3\n -inf <= d <= 4\nEnd\n";
        let pd = parse_lp(text).unwrap();
        let get = |n: &str| pd.variable(n).unwrap();
        assert_eq!((get("a").lower, get("a").upper), (f64::NEG_INFINITY, f64::INFINITY));
        assert_eq!((get("b").lower, get("b").upper), (-2.0, 7.0));
        assert_eq!((get("c").lower, get("c").upper), (3.0, f64::INFINITY));
        assert_eq!((get("d").lower, get("d").upper), (f64::NEG_INFINITY, 4.0));
    }

    #[test]
    fn indicator_and_quadratic_parse() {
        let text = "Minimize\n obj: x + [ 2 x ^ 2 + x * y ] / 2\nSubject To\n ind: g = 1 -> x >= 5\n q: [ x ^ 2 - y ^ 2 ] <= 9\nBinaries\n g\nEnd\n";
        let pd = parse_lp(text).unwrap();
        assert_eq!(pd.constraints[0].guard, Some(Guard { var: "g".into(), value: 1 }));
        let quad_obj: Vec<&Term> =
            pd.objective.terms.iter().filter(|t| t.degree() == 2).collect();
        assert_eq!(quad_obj.len(), 2);
        assert_eq!(quad_obj[0].coeff, 1.0, "divisor halves bracket coefficients");
        assert_eq!(quad_obj[1].coeff, 0.5);
        assert_eq!(pd.constraints[1].kind(), crate::model::ConstraintKind::Quadratic);
    }

    #[test]
    fn huge_bounds_become_infinite() {
        let text = "Minimize\n obj: x\nSubject To\n c: x >= 0\nBounds\n x <= 1e30\nEnd\n";
        let pd = parse_lp(text).unwrap();
        assert_eq!(pd.variable("x").unwrap().upper, f64::INFINITY);
    }

    #[test]
    fn error_positions_are_reported() {
        let text = "Minimize\n obj: x ?\nSubject To\n c: x <= 1\nEnd\n";
        let err = parse_lp(text).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.col > 0);
    }
}
