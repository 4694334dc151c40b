//! Core toolkit for synthesizing and checking optimization problem
//! instances: a canonical in-memory model with a documented JSON schema,
//! complexity scoring with difficulty tiers, LP file I/O, exact desk-scale
//! LP/MILP solving plus an external-solver adapter, and a catalog of seeded
//! instance generators.
//!
//! Batch operations run data-parallel on rayon by default; building with
//! `--no-default-features` swaps in a sequential fallback with identical
//! outputs (see [`par`]).

pub mod complexity;
pub mod generators;
pub mod lp;
pub mod model;
pub mod par;
pub mod rng;
pub mod solver;

pub use model::{
    classify, Constraint, ConstraintKind, Diagnostic, Expression, Factor, Guard, ModelError,
    ProblemData, Relation, Sense, Term, Transcendental, Variable, VariableKind,
};
pub use solver::{solve_builtin, solve_external, values_match, SolveOutcome, SolveStatus, SolverLimits};
