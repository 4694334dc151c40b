//! Serde helpers for the canonical JSON model document.
//!
//! Extended-real bounds serialize as a JSON number or the strings `"inf"` /
//! `"-inf"` (JSON has no literal for infinities, and omission would be
//! ambiguous). Relations serialize as `"<="`, `"="`, `">="`; the strict forms
//! `"<"` and `">"` are accepted on input and mapped to their inclusive
//! counterparts, matching LP-format convention.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

pub(crate) fn one() -> u32 {
    1
}

pub(crate) mod extended_real {
    use super::*;

    pub fn serialize<S: Serializer>(value: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            ser.serialize_f64(*value)
        } else if *value > 0.0 {
            ser.serialize_str("inf")
        } else {
            ser.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Number(v) => Ok(v),
            Raw::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => Err(D::Error::custom(format!("invalid bound value {other:?}"))),
            },
        }
    }
}

pub(crate) mod relation {
    use super::*;
    use crate::model::Relation;

    pub fn serialize<S: Serializer>(value: &Relation, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(match value {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Relation, D::Error> {
        let raw = String::deserialize(de)?;
        match raw.trim() {
            "<=" | "=<" | "<" => Ok(Relation::Le),
            ">=" | "=>" | ">" => Ok(Relation::Ge),
            "=" | "==" => Ok(Relation::Eq),
            other => Err(D::Error::custom(format!("invalid relation {other:?}"))),
        }
    }
}
