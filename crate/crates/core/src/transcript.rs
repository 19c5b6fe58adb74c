//! Named computation steps recorded while deciding a problem, plus JSON helpers
//! for exact values.

use serde_json::{json, Value};

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// How much detail a step carries; `Trace` steps are dropped from default reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Default,
    Trace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub name: String,
    pub level: Level,
    pub data: Value,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcript {
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, data: Value) {
        self.steps.push(Step {
            name: name.to_string(),
            level: Level::Default,
            data,
        });
    }

    pub fn trace(&mut self, name: &str, data: Value) {
        self.steps.push(Step {
            name: name.to_string(),
            level: Level::Trace,
            data,
        });
    }

    pub fn extend(&mut self, other: Transcript) {
        self.steps.extend(other.steps);
    }

    pub fn to_json(&self, max_level: Level) -> Value {
        Value::Array(
            self.steps
                .iter()
                .filter(|s| s.level <= max_level)
                .map(|s| json!({ "step": s.name, "data": s.data }))
                .collect(),
        )
    }
}

pub fn q_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn qs_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_json).collect())
}

pub fn elem_json(e: &Element) -> Value {
    qs_json(&e.0)
}

pub fn elems_json(es: &[Element]) -> Value {
    Value::Array(es.iter().map(elem_json).collect())
}

pub fn qss_json(vs: &[Vec<Q>]) -> Value {
    Value::Array(vs.iter().map(|v| qs_json(v)).collect())
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Reads a rational from a JSON string `"p/q"` or an integer number.
pub fn q_from_json(v: &Value, path: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(crate::rational::q(i)),
            None => match n.as_u64() {
                Some(u) => parse_q(&u.to_string()),
                None => Err(Error::RationalParse { text: n.to_string() }),
            },
        },
        _ => Err(schema(path, "expected a rational as string or integer")),
    }
}

pub fn qs_from_json(v: &Value, path: &str) -> Result<Vec<Q>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of rationals"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| q_from_json(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn qss_from_json(v: &Value, path: &str) -> Result<Vec<Vec<Q>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of vectors"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| qs_from_json(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn elems_from_json(v: &Value, path: &str) -> Result<Vec<Element>> {
    Ok(qss_from_json(v, path)?.into_iter().map(Element).collect())
}

pub(crate) fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| schema(&format!("{path}.{key}"), "missing field"))
}

pub(crate) fn schema_error(path: &str, message: impl Into<String>) -> Error {
    schema(path, message)
}
