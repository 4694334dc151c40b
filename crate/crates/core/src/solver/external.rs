//! Subprocess adapter for external solvers.
//!
//! The contract: the instance is written as an LP file to a temp directory,
//! `command_template` is split on whitespace and the placeholders `{input}`,
//! `{output}`, `{timelimit}` are substituted per token, the command runs with
//! captured UTF-8 stdout/stderr under the wall-clock limit, and the objective
//! and status are extracted from the combined text (output file first when
//! one was named) by configuration-driven rules — nothing vendor-specific is
//! hard-coded. Temp artifacts are removed unless `keep_artifacts` is set.

use std::collections::BTreeMap;
use std::io::Read;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{SolveError, SolveOutcome, SolveStatus, SolverLimits};
use crate::lp::{emit_lp, LpDialectOptions};
use crate::model::ProblemData;

/// Ordered status-mapping rule: the first regex that matches the solver
/// output decides the status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatusRule {
    pub pattern: String,
    pub status: SolveStatus,
}

/// Configuration for one external solver command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalSolverSpec {
    /// E.g. `"mysolver {input} --timeout {timelimit} --sol {output}"`.
    pub command_template: String,
    /// Regex with one capture group yielding the objective value.
    pub objective_pattern: String,
    /// First match wins; no match plus nonzero exit means an error outcome.
    pub status_mapping: Vec<StatusRule>,
    /// Optional regex with (name, value) captures for solution entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_pattern: Option<String>,
    #[serde(default)]
    pub keep_artifacts: bool,
}

impl ExternalSolverSpec {
    pub fn validate(&self) -> Result<(), SolveError> {
        if !self.command_template.contains("{input}") {
            return Err(SolveError::Spawn(
                "command_template must contain the {input} placeholder".to_string(),
            ));
        }
        Regex::new(&self.objective_pattern)
            .map_err(|e| SolveError::Extraction(format!("bad objective_pattern: {e}")))?;
        for rule in &self.status_mapping {
            Regex::new(&rule.pattern)
                .map_err(|e| SolveError::Extraction(format!("bad status pattern: {e}")))?;
        }
        Ok(())
    }
}

/// Runs the configured command on the emitted LP file and maps its output to
/// a [`SolveOutcome`]. `solve_time` is the subprocess wall clock.
pub fn solve_external(
    pd: &ProblemData,
    spec: &ExternalSolverSpec,
    limits: &SolverLimits,
) -> Result<SolveOutcome, SolveError> {
    spec.validate()?;
    limits.validate()?;

    let dir = tempfile::Builder::new().prefix("optsynth-solve").tempdir()?;
    let input_path = dir.path().join("instance.lp");
    let output_path = dir.path().join("solution.out");
    std::fs::write(&input_path, emit_lp(pd, &LpDialectOptions::default())?)?;

    let uses_output = spec.command_template.contains("{output}");
    let tokens: Vec<String> = spec
        .command_template
        .split_whitespace()
        .map(|tok| {
            tok.replace("{input}", &input_path.to_string_lossy())
                .replace("{output}", &output_path.to_string_lossy())
                .replace("{timelimit}", &format!("{}", limits.time_limit))
        })
        .collect();
    if tokens.is_empty() {
        return Err(SolveError::Spawn("empty command template".to_string()));
    }

    let started = Instant::now();
    let mut child = Command::new(&tokens[0])
        .args(&tokens[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| SolveError::Spawn(format!("{}: {e}", tokens[0])))?;

    // Drain pipes on threads so a chatty solver cannot deadlock on a full pipe.
    let mut stdout_pipe = child.stdout.take().expect("stdout piped");
    let mut stderr_pipe = child.stderr.take().expect("stderr piped");
    let out_thread = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout_pipe.read_to_string(&mut buf);
        buf
    });
    let err_thread = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stderr_pipe.read_to_string(&mut buf);
        buf
    });

    let mut timed_out = false;
    let exit = loop {
        match child.try_wait()? {
            Some(status) => break status,
            None => {
                if started.elapsed().as_secs_f64() > limits.time_limit + 1.0 {
                    let _ = child.kill();
                    timed_out = true;
                    break child.wait()?;
                }
                std::thread::sleep(Duration::from_millis(5));
            }
        }
    };
    let solve_time = started.elapsed().as_secs_f64();
    let stdout = out_thread.join().unwrap_or_default();
    let stderr = err_thread.join().unwrap_or_default();

    let mut combined = String::new();
    if uses_output {
        if let Ok(text) = std::fs::read_to_string(&output_path) {
            combined.push_str(&text);
            combined.push('\n');
        }
    }
    combined.push_str(&stdout);
    combined.push('\n');
    combined.push_str(&stderr);

    if spec.keep_artifacts {
        // Leak the directory handle so the files survive for inspection.
        let path = dir.path().to_path_buf();
        std::mem::forget(dir);
        eprintln!("solver artifacts kept in {}", path.display());
    }

    let mut outcome = SolveOutcome::bare(SolveStatus::Error);
    outcome.solve_time = solve_time;

    if timed_out {
        outcome.status = SolveStatus::TimeLimit;
        outcome.note = Some("subprocess exceeded the wall-clock limit and was killed".to_string());
        return Ok(outcome);
    }

    let mut matched_status = None;
    for rule in &spec.status_mapping {
        let re = Regex::new(&rule.pattern).expect("validated above");
        if re.is_match(&combined) {
            matched_status = Some(rule.status);
            break;
        }
    }
    match matched_status {
        Some(status) => outcome.status = status,
        None => {
            outcome.status = SolveStatus::Error;
            outcome.note = Some(format!(
                "no status rule matched (exit code {:?}); captured output:\n{}",
                exit.code(),
                truncate(&combined, 2000)
            ));
            return Ok(outcome);
        }
    }

    if outcome.status == SolveStatus::Optimal {
        let re = Regex::new(&spec.objective_pattern).expect("validated above");
        let value = re
            .captures(&combined)
            .and_then(|c| c.get(1))
            .and_then(|m| m.as_str().trim().parse::<f64>().ok());
        match value {
            Some(v) => outcome.objective = Some(v),
            None => {
                return Err(SolveError::Extraction(format!(
                    "objective_pattern matched nothing parseable in:\n{}",
                    truncate(&combined, 2000)
                )))
            }
        }
        let mut solution = BTreeMap::new();
        if let Some(pat) = &spec.solution_pattern {
            let re = Regex::new(pat)
                .map_err(|e| SolveError::Extraction(format!("bad solution_pattern: {e}")))?;
            for caps in re.captures_iter(&combined) {
                if let (Some(name), Some(value)) = (caps.get(1), caps.get(2)) {
                    if let Ok(v) = value.as_str().trim().parse::<f64>() {
                        solution.insert(name.as_str().to_string(), v);
                    }
                }
            }
        }
        outcome.solution = Some(solution);
    }
    Ok(outcome)
}

fn truncate(text: &str, cap: usize) -> String {
    if text.len() <= cap {
        return text.to_string();
    }
    let cut = text
        .char_indices()
        .map(|(i, _)| i)
        .take_while(|&i| i <= cap)
        .last()
        .unwrap_or(0);
    format!("{}…", &text[..cut])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraint, Expression, Relation, Sense, Variable};

    fn tiny() -> ProblemData {
        let mut pd = ProblemData::new("tiny", Sense::Maximize);
        pd.variables.push(Variable::continuous("x", 0.0, 2.0));
        pd.objective = Expression::linear(vec![(1.0, "x")]);
        pd.constraints.push(Constraint::new(
            "c",
            Expression::linear(vec![(1.0, "x")]),
            Relation::Le,
            2.0,
        ));
        pd
    }

    fn echo_spec(script: &str) -> ExternalSolverSpec {
        ExternalSolverSpec {
            command_template: format!("sh -c {script}"),
            objective_pattern: r"objective\s*=\s*([-0-9.eE+]+)".to_string(),
            status_mapping: vec![
                StatusRule { pattern: "OPTIMAL".into(), status: SolveStatus::Optimal },
                StatusRule { pattern: "INFEASIBLE".into(), status: SolveStatus::Infeasible },
            ],
            solution_pattern: None,
            keep_artifacts: false,
        }
    }

    #[test]
    fn extracts_objective_from_canned_output() {
        // `sh -c` takes the script as one token; template splitting on
        // whitespace means the script must be a single word, so use printf
        // via a wrapper word with no spaces.
        let spec = ExternalSolverSpec {
            command_template: "printf OPTIMAL\\nobjective=22\\n {input}".to_string(),
            ..echo_spec("unused")
        };
        let out = solve_external(&tiny(), &spec, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.objective, Some(22.0));
    }

    #[test]
    fn absent_binary_is_a_spawn_error() {
        let spec = ExternalSolverSpec {
            command_template: "definitely-not-a-solver-binary {input}".to_string(),
            ..echo_spec("unused")
        };
        let err = solve_external(&tiny(), &spec, &SolverLimits::default()).unwrap_err();
        assert!(matches!(err, SolveError::Spawn(_)), "got {err:?}");
    }

    #[test]
    fn unmatched_status_is_error_outcome_with_output() {
        let spec = ExternalSolverSpec {
            command_template: "printf gibberish {input}".to_string(),
            ..echo_spec("unused")
        };
        let out = solve_external(&tiny(), &spec, &SolverLimits::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Error);
        assert!(out.note.unwrap().contains("gibberish"));
    }

    #[test]
    fn template_must_reference_input() {
        let spec = ExternalSolverSpec {
            command_template: "true".to_string(),
            ..echo_spec("unused")
        };
        assert!(solve_external(&tiny(), &spec, &SolverLimits::default()).is_err());
    }
}
