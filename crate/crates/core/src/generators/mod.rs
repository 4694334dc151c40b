//! Seeded, parameterized instance generators.
//!
//! Each problem class registers a [`GeneratorSchema`] (typed parameter
//! declarations with valid ranges and defaults, plus catalog metadata) and a
//! builder. [`generate`] is a pure function of `(class_id, parameters,
//! seed)`: the same config always yields the same instance, and batches
//! derive per-instance sub-seeds from the master seed so results do not
//! depend on worker count. Draws that produce an unusable instance (for
//! example lot-sizing with less cumulative capacity than demand) retry up to
//! [`MAX_REGENERATION_ATTEMPTS`] times on incremented sub-seeds.

mod classes;

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::model::ProblemData;
use crate::par;
use crate::rng::{sub_seeds, SplitMix64};

pub const MAX_REGENERATION_ATTEMPTS: u64 = 20;

/// A configured parameter value. Scalars fix a quantity; ranges describe the
/// distribution a generator draws from (inclusive endpoints); lists supply a
/// finite choice set.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    IntRange(i64, i64),
    RealRange(f64, f64),
    List(Vec<f64>),
}

impl Serialize for ParamValue {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            ParamValue::Int(v) => ser.serialize_i64(*v),
            ParamValue::Real(v) => ser.serialize_f64(*v),
            ParamValue::IntRange(lo, hi) => [*lo, *hi].serialize(ser),
            ParamValue::RealRange(lo, hi) => [*lo, *hi].serialize(ser),
            ParamValue::List(vs) => vs.serialize(ser),
        }
    }
}

impl ParamValue {
    pub fn type_name(&self) -> &'static str {
        match self {
            ParamValue::Int(_) => "int",
            ParamValue::Real(_) => "real",
            ParamValue::IntRange(..) => "int_range",
            ParamValue::RealRange(..) => "real_range",
            ParamValue::List(_) => "list",
        }
    }

    /// Interprets a JSON value against a declaration (numbers for scalars,
    /// two-element arrays for ranges, arrays for lists).
    pub fn from_json(
        value: &serde_json::Value,
        decl: &ParamDecl,
    ) -> Result<ParamValue, GeneratorError> {
        use serde_json::Value;
        let bad = |why: &str| {
            Err(GeneratorError::Config(format!(
                "parameter {}: {why} (expected {})",
                decl.name,
                decl.ptype.describe()
            )))
        };
        match (decl.ptype, value) {
            (ParamType::Int, Value::Number(n)) => match n.as_i64() {
                Some(v) => Ok(ParamValue::Int(v)),
                None => bad("not an integer"),
            },
            (ParamType::Real, Value::Number(n)) => Ok(ParamValue::Real(n.as_f64().unwrap())),
            (ParamType::IntRange, Value::Array(items)) if items.len() == 2 => {
                let lo = items[0].as_i64();
                let hi = items[1].as_i64();
                match (lo, hi) {
                    (Some(lo), Some(hi)) => Ok(ParamValue::IntRange(lo, hi)),
                    _ => bad("range endpoints must be integers"),
                }
            }
            (ParamType::IntRange, Value::Number(n)) => match n.as_i64() {
                // A scalar fixes the range to a point.
                Some(v) => Ok(ParamValue::IntRange(v, v)),
                None => bad("not an integer"),
            },
            (ParamType::RealRange, Value::Array(items)) if items.len() == 2 => {
                match (items[0].as_f64(), items[1].as_f64()) {
                    (Some(lo), Some(hi)) => Ok(ParamValue::RealRange(lo, hi)),
                    _ => bad("range endpoints must be numbers"),
                }
            }
            (ParamType::RealRange, Value::Number(n)) => {
                let v = n.as_f64().unwrap();
                Ok(ParamValue::RealRange(v, v))
            }
            (ParamType::List, Value::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for item in items {
                    match item.as_f64() {
                        Some(v) => out.push(v),
                        None => return bad("list entries must be numbers"),
                    }
                }
                Ok(ParamValue::List(out))
            }
            _ => bad("wrong JSON shape"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamType {
    Int,
    Real,
    IntRange,
    RealRange,
    List,
}

impl ParamType {
    fn describe(self) -> &'static str {
        match self {
            ParamType::Int => "an integer scalar",
            ParamType::Real => "a real scalar",
            ParamType::IntRange => "an inclusive integer range [lo, hi]",
            ParamType::RealRange => "an inclusive real range [lo, hi]",
            ParamType::List => "a list of numbers",
        }
    }
}

/// Declares one parameter: its type, the valid range for its value (or for
/// range endpoints / list entries), a default, and a short description.
#[derive(Debug, Clone, Serialize)]
pub struct ParamDecl {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub ptype: ParamType,
    pub min: f64,
    pub max: f64,
    pub default: ParamValue,
    pub doc: &'static str,
}

impl ParamDecl {
    /// Scalars given where a range is declared fix the range to a point.
    fn coerce(&self, value: &ParamValue) -> ParamValue {
        match (self.ptype, value) {
            (ParamType::IntRange, ParamValue::Int(v)) => ParamValue::IntRange(*v, *v),
            (ParamType::RealRange, ParamValue::Real(v)) => ParamValue::RealRange(*v, *v),
            _ => value.clone(),
        }
    }

    fn check(&self, value: &ParamValue) -> Result<(), GeneratorError> {
        let err = |why: String| Err(GeneratorError::Config(format!("parameter {}: {why}", self.name)));
        let in_range = |v: f64| v >= self.min && v <= self.max;
        match (self.ptype, value) {
            (ParamType::Int, ParamValue::Int(v)) => {
                if !in_range(*v as f64) {
                    return err(format!("{v} outside valid range [{}, {}]", self.min, self.max));
                }
            }
            (ParamType::Real, ParamValue::Real(v)) => {
                if !v.is_finite() || !in_range(*v) {
                    return err(format!("{v} outside valid range [{}, {}]", self.min, self.max));
                }
            }
            (ParamType::IntRange, ParamValue::IntRange(lo, hi)) => {
                if lo > hi {
                    return err(format!("range low {lo} exceeds high {hi}"));
                }
                if !in_range(*lo as f64) || !in_range(*hi as f64) {
                    return err(format!(
                        "range [{lo}, {hi}] outside valid range [{}, {}]",
                        self.min, self.max
                    ));
                }
            }
            (ParamType::RealRange, ParamValue::RealRange(lo, hi)) => {
                if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                    return err(format!("bad range [{lo}, {hi}]"));
                }
                if !in_range(*lo) || !in_range(*hi) {
                    return err(format!(
                        "range [{lo}, {hi}] outside valid range [{}, {}]",
                        self.min, self.max
                    ));
                }
            }
            (ParamType::List, ParamValue::List(vs)) => {
                if vs.is_empty() {
                    return err("list must not be empty".to_string());
                }
                if vs.iter().any(|v| !v.is_finite() || !in_range(*v)) {
                    return err(format!(
                        "list entries outside valid range [{}, {}]",
                        self.min, self.max
                    ));
                }
            }
            (expected, got) => {
                return err(format!(
                    "expected {}, got {}",
                    expected.describe(),
                    got.type_name()
                ))
            }
        }
        Ok(())
    }
}

/// Catalog entry for one problem class.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorSchema {
    pub class_id: &'static str,
    pub subclass: &'static str,
    /// Symbolic formulation summary (sets, variables, objective, constraints
    /// with numbers unbound).
    pub formulation: &'static str,
    /// Classic literature reference label for the formulation.
    pub reference: &'static str,
    /// Parameter that most directly controls instance size, used by the
    /// rule-based configuration search.
    pub size_parameter: Option<&'static str>,
    pub parameters: Vec<ParamDecl>,
}

impl GeneratorSchema {
    pub fn param(&self, name: &str) -> Option<&ParamDecl> {
        self.parameters.iter().find(|p| p.name == name)
    }

    pub fn defaults(&self) -> BTreeMap<String, ParamValue> {
        self.parameters
            .iter()
            .map(|p| (p.name.to_string(), p.default.clone()))
            .collect()
    }

    /// Rejects unknown names and out-of-range values, then fills defaults.
    pub fn resolve(
        &self,
        given: &BTreeMap<String, ParamValue>,
    ) -> Result<BTreeMap<String, ParamValue>, GeneratorError> {
        let mut resolved = self.defaults();
        for (name, value) in given {
            let decl = self.param(name).ok_or_else(|| {
                GeneratorError::Config(format!(
                    "class {} declares no parameter named {name}",
                    self.class_id
                ))
            })?;
            let value = decl.coerce(value);
            decl.check(&value)?;
            resolved.insert(name.clone(), value);
        }
        Ok(resolved)
    }
}

/// The registered classes.
pub struct SeedClassCatalog {
    pub schemas: Vec<GeneratorSchema>,
}

impl SeedClassCatalog {
    pub fn schema(&self, class_id: &str) -> Option<&GeneratorSchema> {
        self.schemas.iter().find(|s| s.class_id == class_id)
    }

    pub fn class_ids(&self) -> Vec<&'static str> {
        self.schemas.iter().map(|s| s.class_id).collect()
    }
}

/// Returns the full catalog.
pub fn list_classes() -> SeedClassCatalog {
    SeedClassCatalog { schemas: classes::registry().into_iter().map(|(s, _)| s).collect() }
}

/// A concrete run request: class, parameter overrides, and master seed.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub class_id: String,
    pub parameters: BTreeMap<String, ParamValue>,
    pub seed: u64,
}

impl Serialize for GeneratorConfig {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(3))?;
        map.serialize_entry("class_id", &self.class_id)?;
        map.serialize_entry("parameters", &self.parameters)?;
        map.serialize_entry("seed", &self.seed)?;
        map.end()
    }
}

impl GeneratorConfig {
    pub fn new(class_id: impl Into<String>, seed: u64) -> Self {
        GeneratorConfig { class_id: class_id.into(), parameters: BTreeMap::new(), seed }
    }

    pub fn with(mut self, name: &str, value: ParamValue) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    /// Parses the `parameters` member of a JSON document against the schema.
    pub fn parameters_from_json(
        schema: &GeneratorSchema,
        object: &serde_json::Value,
    ) -> Result<BTreeMap<String, ParamValue>, GeneratorError> {
        let map = object.as_object().ok_or_else(|| {
            GeneratorError::Config("parameters must be a JSON object".to_string())
        })?;
        let mut out = BTreeMap::new();
        for (name, value) in map {
            let decl = schema.param(name).ok_or_else(|| {
                GeneratorError::Config(format!(
                    "class {} declares no parameter named {name}",
                    schema.class_id
                ))
            })?;
            out.insert(name.clone(), ParamValue::from_json(value, decl)?);
        }
        Ok(out)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GeneratorError {
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("draw produced an unusable instance after {attempts} attempts: {reason}")]
    Degenerate { attempts: u64, reason: String },
    #[error("generated instance failed validation: {0}")]
    InvalidInstance(String),
}

/// Per-attempt draw context handed to class builders. Draw helpers record
/// the resolved top-level values so instance metadata documents the draw.
pub struct DrawCtx<'a> {
    pub rng: SplitMix64,
    params: &'a BTreeMap<String, ParamValue>,
    pub record: BTreeMap<String, String>,
}

impl<'a> DrawCtx<'a> {
    fn new(seed: u64, params: &'a BTreeMap<String, ParamValue>) -> Self {
        DrawCtx { rng: SplitMix64::new(seed), params, record: BTreeMap::new() }
    }

    fn value(&self, name: &str) -> &ParamValue {
        self.params
            .get(name)
            .unwrap_or_else(|| panic!("builder asked for undeclared parameter {name}"))
    }

    /// Resolves an integer-valued parameter (drawing from a range) and
    /// records the outcome.
    pub fn int(&mut self, name: &str) -> i64 {
        let v = match self.value(name) {
            ParamValue::Int(v) => *v,
            ParamValue::IntRange(lo, hi) => {
                let (lo, hi) = (*lo, *hi);
                self.rng.int_range(lo, hi)
            }
            other => panic!("parameter {name} is not integer-valued ({})", other.type_name()),
        };
        self.record.insert(name.to_string(), v.to_string());
        v
    }

    pub fn real(&mut self, name: &str) -> f64 {
        let v = match self.value(name) {
            ParamValue::Real(v) => *v,
            ParamValue::RealRange(lo, hi) => {
                let (lo, hi) = (*lo, *hi);
                self.rng.real_range(lo, hi)
            }
            ParamValue::List(vs) => {
                let vs = vs.clone();
                *self.rng.choose(&vs)
            }
            other => panic!("parameter {name} is not real-valued ({})", other.type_name()),
        };
        self.record.insert(name.to_string(), format!("{v}"));
        v
    }

    /// One draw from an integer-range distribution parameter, unrecorded
    /// (used for per-entity values like item weights).
    pub fn draw_int(&mut self, name: &str) -> i64 {
        match self.value(name) {
            ParamValue::Int(v) => *v,
            ParamValue::IntRange(lo, hi) => {
                let (lo, hi) = (*lo, *hi);
                self.rng.int_range(lo, hi)
            }
            other => panic!("parameter {name} is not integer-valued ({})", other.type_name()),
        }
    }

    pub fn draw_real(&mut self, name: &str) -> f64 {
        match self.value(name) {
            ParamValue::Real(v) => *v,
            ParamValue::RealRange(lo, hi) => {
                let (lo, hi) = (*lo, *hi);
                self.rng.real_range(lo, hi)
            }
            other => panic!("parameter {name} is not real-valued ({})", other.type_name()),
        }
    }

    /// Signals an unusable draw; the harness retries with the next sub-seed.
    pub fn degenerate<T>(&self, reason: impl Into<String>) -> Result<T, GeneratorError> {
        Err(GeneratorError::Degenerate { attempts: 0, reason: reason.into() })
    }
}

type Builder = fn(&mut DrawCtx) -> Result<ProblemData, GeneratorError>;

fn lookup(class_id: &str) -> Result<(GeneratorSchema, Builder), GeneratorError> {
    classes::registry()
        .into_iter()
        .find(|(s, _)| s.class_id == class_id)
        .ok_or_else(|| GeneratorError::UnknownClass(class_id.to_string()))
}

/// Generates one instance: deterministic in `(class_id, parameters, seed)`.
/// The returned instance is normalized and valid, and its metadata records
/// the class, seed, and resolved parameter draws.
pub fn generate(cfg: &GeneratorConfig) -> Result<ProblemData, GeneratorError> {
    let (schema, builder) = lookup(&cfg.class_id)?;
    let params = schema.resolve(&cfg.parameters)?;
    let mut last_reason = String::new();
    for attempt in 0..=MAX_REGENERATION_ATTEMPTS {
        let mut ctx = DrawCtx::new(cfg.seed.wrapping_add(attempt), &params);
        match builder(&mut ctx) {
            Ok(pd) => {
                let mut pd = pd
                    .normalize()
                    .map_err(|e| GeneratorError::InvalidInstance(e.to_string()))?;
                let diags = pd.validate();
                if !diags.is_empty() {
                    return Err(GeneratorError::InvalidInstance(
                        diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                    ));
                }
                pd.metadata.insert("class_id".to_string(), cfg.class_id.clone());
                pd.metadata.insert("seed".to_string(), cfg.seed.to_string());
                if attempt > 0 {
                    pd.metadata.insert("regeneration_attempts".to_string(), attempt.to_string());
                }
                for (k, v) in ctx.record {
                    pd.metadata.insert(format!("param.{k}"), v);
                }
                return Ok(pd);
            }
            Err(GeneratorError::Degenerate { reason, .. }) => last_reason = reason,
            Err(other) => return Err(other),
        }
    }
    Err(GeneratorError::Degenerate {
        attempts: MAX_REGENERATION_ATTEMPTS,
        reason: last_reason,
    })
}

/// Generates `n` instances on per-instance sub-seeds derived from
/// `cfg.seed` (see [`crate::rng::sub_seeds`]). Failures are collected per
/// instance rather than aborting the batch. Output order is by instance
/// index regardless of worker count.
pub fn generate_batch(
    cfg: &GeneratorConfig,
    n: usize,
) -> Vec<Result<ProblemData, GeneratorError>> {
    let seeds = sub_seeds(cfg.seed, n);
    par::map_indices(n, |i| {
        let sub = GeneratorConfig {
            class_id: cfg.class_id.clone(),
            parameters: cfg.parameters.clone(),
            seed: seeds[i],
        };
        generate(&sub).map(|mut pd| {
            pd.metadata.insert("batch_master_seed".to_string(), cfg.seed.to_string());
            pd.metadata.insert("batch_index".to_string(), i.to_string());
            pd
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VariableKind;

    #[test]
    fn catalog_has_the_twelve_classes() {
        let catalog = list_classes();
        let ids = catalog.class_ids();
        for required in [
            "knapsack",
            "bin_packing",
            "assignment",
            "transportation",
            "set_cover",
            "capacitated_facility_location",
            "tsp_mtz",
            "capacitated_lot_sizing",
            "diet",
            "production_planning_bigm",
            "multicommodity_flow",
            "portfolio_qp",
        ] {
            assert!(ids.contains(&required), "missing class {required}");
        }
        assert!(ids.len() >= 12);
        // Unique ids.
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }

    #[test]
    fn every_schema_default_validates() {
        for schema in list_classes().schemas {
            for p in &schema.parameters {
                p.check(&p.default)
                    .unwrap_or_else(|e| panic!("{}: default invalid: {e}", schema.class_id));
            }
            // And generates a valid instance.
            let cfg = GeneratorConfig::new(schema.class_id, 7);
            let pd = generate(&cfg).unwrap_or_else(|e| panic!("{}: {e}", schema.class_id));
            assert!(pd.validate().is_empty());
            assert_eq!(pd.metadata.get("class_id").unwrap(), schema.class_id);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GeneratorConfig::new("bin_packing", 1234);
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a, b);
        let batch1 = generate_batch(&cfg, 5);
        let batch2 = generate_batch(&cfg, 5);
        let unwrap = |v: Vec<Result<ProblemData, GeneratorError>>| {
            v.into_iter().map(Result::unwrap).collect::<Vec<_>>()
        };
        assert_eq!(unwrap(batch1), unwrap(batch2));
    }

    #[test]
    fn batch_instances_differ_and_record_seeds() {
        let cfg = GeneratorConfig::new("knapsack", 42);
        let batch: Vec<ProblemData> =
            generate_batch(&cfg, 5).into_iter().map(Result::unwrap).collect();
        for pd in &batch {
            assert!(pd.metadata.contains_key("seed"));
            assert_eq!(pd.metadata.get("batch_master_seed").unwrap(), "42");
        }
        let distinct = batch
            .iter()
            .map(|pd| format!("{pd:?}"))
            .collect::<std::collections::HashSet<_>>();
        assert_eq!(distinct.len(), 5, "sub-seeded draws should differ");
    }

    #[test]
    fn single_batch_equals_first_subseed() {
        let cfg = GeneratorConfig::new("assignment", 9);
        let batch = generate_batch(&cfg, 1);
        let sub = GeneratorConfig { seed: sub_seeds(9, 1)[0], ..cfg.clone() };
        let direct = generate(&sub).unwrap();
        let mut from_batch = batch.into_iter().next().unwrap().unwrap();
        from_batch.metadata.remove("batch_master_seed");
        from_batch.metadata.remove("batch_index");
        assert_eq!(from_batch, direct);
    }

    #[test]
    fn out_of_range_parameter_is_a_config_error() {
        let cfg = GeneratorConfig::new("bin_packing", 1)
            .with("n_items", ParamValue::IntRange(0, 5));
        assert!(matches!(generate(&cfg), Err(GeneratorError::Config(_))));
        let cfg = GeneratorConfig::new("bin_packing", 1)
            .with("no_such_param", ParamValue::Int(1));
        assert!(matches!(generate(&cfg), Err(GeneratorError::Config(_))));
        assert!(matches!(
            generate(&GeneratorConfig::new("mystery_class", 1)),
            Err(GeneratorError::UnknownClass(_))
        ));
    }

    #[test]
    fn bin_packing_structure() {
        let cfg = GeneratorConfig::new("bin_packing", 3).with("n_items", ParamValue::Int(3));
        let pd = generate(&cfg).unwrap();
        let binaries =
            pd.variables.iter().filter(|v| v.kind == VariableKind::Binary).count();
        assert_eq!(binaries, 12, "n^2 assignment binaries plus n bin binaries");
        assert_eq!(pd.variables.len(), 12);
        assert_eq!(pd.constraints.len(), 6, "2n constraints");
        assert_eq!(pd.objective.terms.len(), 3, "sum of bin-use binaries");
    }
}
