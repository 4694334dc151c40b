//! LP text format reader and writer.
//!
//! The dialect is the widely used LP file layout, pinned down precisely so
//! the emitter is bit-exact and the parser accepts everything the emitter
//! produces (plus whitespace/comment variation and `<` / `>` relations):
//!
//! ```text
//! \ Problem: <name>
//! \ meta <key> = <value>
//! Minimize
//!   obj: 2 x1 + 3 x2 + [ 0.5 x1 ^ 2 + x1 * x2 ]
//! Subject To
//!   c0: 2 x1 + 3 x2 <= 100
//!   c1: y1 = 1 -> x1 >= 5
//! Bounds
//!   x1 >= 0
//!   -inf <= x2 <= 30
//! Binaries
//!   y1
//! Generals
//!   x1
//! End
//! ```
//!
//! * Section headers sit flush left; content lines are indented two spaces,
//!   continuation lines four. Lines wrap at `max_line_width`, breaking only
//!   between tokens. One constraint per line group.
//! * Comments run from `\` to end of line. The writer stores the problem
//!   name and metadata in leading comments; the parser restores both.
//! * Quadratic terms live in a bracketed block appended to the linear part;
//!   coefficients are literal (no implicit halving), though a trailing `/ 2`
//!   divisor is accepted on input for compatibility.
//! * Indicator constraints use `guard = 0|1 -> body relation rhs`.
//! * Default bounds on parse: `[0, +inf)` for continuous and general integer
//!   variables, `[0, 1]` for binaries. The writer emits explicit bounds for
//!   every non-binary variable, so emitted files never rely on defaults.
//! * Numbers with magnitude at or above `1e30` parse as infinite bounds.
//! * General nonlinear constraints (degree above two or transcendental
//!   factors) cannot be expressed; the canonical JSON document carries those.
//!
//! Variable and constraint names pass through sanitization: characters
//! outside `[A-Za-z0-9_]` become `_`, and names that start with a digit,
//! look like a number prefix (`e3`), or collide with a reserved keyword gain
//! a `v_` prefix. Strict mode reports an error instead of renaming.

mod emit;
mod parse;

pub use emit::emit_lp;
pub use parse::parse_lp;

use serde::{Deserialize, Serialize};

/// Writer configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpDialectOptions {
    pub max_line_width: usize,
    pub emit_indicators: bool,
    pub emit_quadratics: bool,
    pub name_sanitization: NameSanitization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NameSanitization {
    Strict,
    Permissive,
}

impl Default for LpDialectOptions {
    fn default() -> Self {
        LpDialectOptions {
            max_line_width: 100,
            emit_indicators: true,
            emit_quadratics: true,
            name_sanitization: NameSanitization::Permissive,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LpEmitError {
    #[error("max_line_width must be at least 64 (got {0})")]
    WidthTooSmall(usize),
    #[error("constraint {name}: {what} cannot be expressed in LP format")]
    UnsupportedConstruct { name: String, what: String },
    #[error("constraint {0}: indicator emission is disabled by dialect options")]
    IndicatorsDisabled(String),
    #[error("{0}: quadratic emission is disabled by dialect options")]
    QuadraticsDisabled(String),
    #[error("name {original:?} requires sanitization in strict mode")]
    StrictSanitization { original: String },
    #[error("names {a:?} and {b:?} collide after sanitization as {sanitized:?}")]
    NameCollision { a: String, b: String, sanitized: String },
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct LpParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl LpParseError {
    pub(crate) fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        LpParseError { line, col, message: message.into() }
    }
}

/// Character count of an LP document, the unit used for corpus length
/// statistics.
pub fn lp_length(text: &str) -> usize {
    text.chars().count()
}

pub(crate) const RESERVED: &[&str] = &[
    "minimize", "maximize", "min", "max", "minimise", "maximise", "subject", "to", "st",
    "such", "that", "bounds", "bound", "binaries", "binary", "bin", "generals", "general",
    "gen", "end", "free", "inf", "infinity",
];

pub(crate) fn needs_sanitization(name: &str) -> bool {
    sanitize_name(name) != name
}

/// Permissive-mode renaming rule.
pub(crate) fn sanitize_name(name: &str) -> String {
    let mut cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if cleaned.is_empty() {
        cleaned.push('_');
    }
    let first = cleaned.chars().next().unwrap();
    let looks_numeric = first.is_ascii_digit()
        || ((first == 'e' || first == 'E')
            && cleaned.chars().nth(1).map(|c| c.is_ascii_digit() || c == '.').unwrap_or(false));
    if looks_numeric || RESERVED.contains(&cleaned.to_ascii_lowercase().as_str()) {
        cleaned.insert_str(0, "v_");
    }
    cleaned
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_length_counts_characters() {
        assert_eq!(lp_length(""), 0);
        assert_eq!(lp_length("End\n"), 4);
    }

    #[test]
    fn sanitization_rules() {
        assert_eq!(sanitize_name("x1"), "x1");
        assert_eq!(sanitize_name("x-1"), "x_1");
        assert_eq!(sanitize_name("0x"), "v_0x");
        assert_eq!(sanitize_name("e12"), "v_e12");
        assert_eq!(sanitize_name("End"), "v_End");
        assert!(!needs_sanitization("cost_total"));
    }
}
