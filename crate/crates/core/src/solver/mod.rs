//! Solving: a built-in exact LP/MILP solver for desk-scale instances and a
//! subprocess adapter for external solvers.
//!
//! The built-in path is a bounded-variable primal simplex (two-phase, with a
//! Bland's-rule fallback against cycling) under best-first branch and bound
//! that branches on the most fractional integer variable. Indicator
//! constraints are enforced lazily: a guarded row enters the node LP once
//! branching fixes its guard to the activation value, and an integral point
//! that violates a guarded row triggers a branch on the guard. Quadratic and
//! general nonlinear constraints are never handled here; they route to the
//! external adapter (quadratic) or are verified structurally only (general).

mod branch_bound;
mod external;
mod simplex;

pub use external::{solve_external, ExternalSolverSpec, StatusRule};

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::model::{ConstraintKind, ProblemData};

/// Hard caps for a single solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverLimits {
    /// Wall-clock limit in seconds.
    pub time_limit: f64,
    pub node_limit: usize,
    pub feasibility_tol: f64,
    pub integrality_tol: f64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            time_limit: 60.0,
            node_limit: 1_000_000,
            feasibility_tol: 1e-6,
            integrality_tol: 1e-5,
        }
    }
}

impl SolverLimits {
    pub fn validate(&self) -> Result<(), SolveError> {
        let tol_ok = |t: f64| t > 0.0 && t <= 1e-3;
        if !tol_ok(self.feasibility_tol) || !tol_ok(self.integrality_tol) {
            return Err(SolveError::BadLimits(
                "tolerances must lie in (0, 1e-3]".to_string(),
            ));
        }
        if self.node_limit == 0 {
            return Err(SolveError::BadLimits("node_limit must be positive".to_string()));
        }
        Ok(())
    }
}

/// Terminal status of a solve attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    #[serde(rename = "optimal")]
    Optimal,
    #[serde(rename = "infeasible")]
    Infeasible,
    #[serde(rename = "unbounded")]
    Unbounded,
    #[serde(rename = "time-limit")]
    TimeLimit,
    #[serde(rename = "error")]
    Error,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveStatus::Optimal => write!(f, "optimal"),
            SolveStatus::Infeasible => write!(f, "infeasible"),
            SolveStatus::Unbounded => write!(f, "unbounded"),
            SolveStatus::TimeLimit => write!(f, "time-limit"),
            SolveStatus::Error => write!(f, "error"),
        }
    }
}

/// Result of one solve. `objective` and `solution` are present exactly when
/// the status is optimal; `best_bound` carries the best known dual bound when
/// a limit stopped the search; `note` carries human-readable error context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub solve_time: f64,
    pub solution: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SolveOutcome {
    pub(crate) fn bare(status: SolveStatus) -> Self {
        SolveOutcome {
            status,
            objective: None,
            solve_time: 0.0,
            solution: None,
            best_bound: None,
            note: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("built-in solver cannot handle this instance ({reason}); use the external solver adapter")]
    Capability { reason: String },
    #[error("invalid solver limits: {0}")]
    BadLimits(String),
    #[error("instance failed validation: {0}")]
    BadModel(String),
    #[error("could not write LP input: {0}")]
    Emit(#[from] crate::lp::LpEmitError),
    #[error("failed to launch external solver: {0}")]
    Spawn(String),
    #[error("external solver output: {0}")]
    Extraction(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Relative tolerance predicate used throughout acceptance and grading:
/// `|predicted - truth| / (|truth| + 1) < eps`, with `truth` the reference
/// value. Deliberately asymmetric in its arguments; non-finite inputs never
/// match.
pub fn values_match(predicted: f64, truth: f64, eps: f64) -> bool {
    if !predicted.is_finite() || !truth.is_finite() {
        return false;
    }
    (predicted - truth).abs() / (truth.abs() + 1.0) < eps
}

/// Built-in solve cap; larger instances must use the external adapter.
pub const DESK_SCALE_CAP: usize = 200;

/// Solves a linear or mixed-integer linear instance exactly.
pub fn solve_builtin(pd: &ProblemData, limits: &SolverLimits) -> Result<SolveOutcome, SolveError> {
    limits.validate()?;
    let diags = pd.validate();
    if !diags.is_empty() {
        return Err(SolveError::BadModel(
            diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        ));
    }
    for c in &pd.constraints {
        match c.kind() {
            ConstraintKind::Quadratic => {
                return Err(SolveError::Capability {
                    reason: format!("constraint {} is quadratic", c.name),
                })
            }
            ConstraintKind::General => {
                return Err(SolveError::Capability {
                    reason: format!("constraint {} is general nonlinear", c.name),
                })
            }
            ConstraintKind::Indicator if !c.body.is_linear() => {
                return Err(SolveError::Capability {
                    reason: format!("indicator constraint {} has a nonlinear body", c.name),
                })
            }
            _ => {}
        }
    }
    if pd.objective.degree() > 1 || pd.objective.has_transcendental() {
        return Err(SolveError::Capability { reason: "objective is nonlinear".to_string() });
    }
    if pd.variables.len() > DESK_SCALE_CAP || pd.constraints.len() > DESK_SCALE_CAP {
        return Err(SolveError::Capability {
            reason: format!(
                "instance exceeds the desk-scale cap of {DESK_SCALE_CAP} variables/constraints"
            ),
        });
    }

    let started = Instant::now();
    let mut outcome = branch_bound::solve(pd, limits, started);
    outcome.solve_time = started.elapsed().as_secs_f64();
    Ok(outcome)
}
