//! JSON file formats for vectors, operators and reports.
//!
//! ```text
//! vector:   {"N": 2, "coeffs": [[re, im], ...]}                     // n = -N..N
//! operator: {"N": 3, "mode": "exact", "valid": [lo, hi],
//!            "diagonals": {"-1": [["1/2", "0/1"], ...]}}            // q = lo..hi
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Mode, Result};
use crate::fourier::{FourierVector, Window};
use crate::inductive::VerificationReport;
use crate::operators::{BandedOperator, ValidRange};
use crate::scalar::{ExactScalar, ModeScalar};

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn half_width(obj: &Value) -> Result<Window> {
    let n = field(obj, "N")?
        .as_u64()
        .ok_or_else(|| Error::Parse("\"N\" must be a positive integer".into()))?;
    Window::new(n as usize).map_err(|e| Error::Parse(e.to_string()))
}

pub fn vector_to_json(f: &FourierVector) -> Value {
    json!({
        "N": f.window().half_width(),
        "coeffs": f.coeffs().iter().map(|c| c.encode()).collect::<Vec<_>>(),
    })
}

pub fn vector_from_json(v: &Value) -> Result<FourierVector> {
    let window = half_width(v)?;
    let coeffs = field(v, "coeffs")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"coeffs\" must be an array".into()))?
        .iter()
        .map(Complex64::decode)
        .collect::<Result<Vec<_>>>()?;
    FourierVector::new(window, coeffs).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_vector(text: &str) -> Result<FourierVector> {
    vector_from_json(&parse_json(text)?)
}

pub fn operator_to_json<S: ModeScalar>(t: &BandedOperator<S>) -> Value {
    let diagonals: Map<String, Value> = t
        .diagonals()
        .iter()
        .map(|(d, v)| (d.to_string(), Value::Array(v.iter().map(S::encode).collect())))
        .collect();
    json!({
        "N": t.window().half_width(),
        "mode": S::MODE,
        "valid": [t.valid().lo, t.valid().hi],
        "diagonals": diagonals,
    })
}

/// The `"mode"` field of an operator file.
pub fn operator_mode(v: &Value) -> Result<Mode> {
    serde_json::from_value(field(v, "mode")?.clone()).map_err(|e| Error::Parse(format!("bad mode: {e}")))
}

pub fn operator_from_json<S: ModeScalar>(v: &Value) -> Result<BandedOperator<S>> {
    let found = operator_mode(v)?;
    if found != S::MODE {
        return Err(Error::ModeMismatch {
            expected: S::MODE,
            found,
        });
    }
    let window = half_width(v)?;
    let bounds = field(v, "valid")?
        .as_array()
        .filter(|a| a.len() == 2)
        .and_then(|a| Some((a[0].as_i64()?, a[1].as_i64()?)))
        .ok_or_else(|| Error::Parse("\"valid\" must be [lo, hi]".into()))?;
    let valid = ValidRange::new(bounds.0, bounds.1).map_err(|e| Error::Parse(e.to_string()))?;
    let mut diagonals = BTreeMap::new();
    let entries = field(v, "diagonals")?
        .as_object()
        .ok_or_else(|| Error::Parse("\"diagonals\" must be an object".into()))?;
    for (key, coeffs) in entries {
        let d: i64 = key
            .parse()
            .map_err(|_| Error::Parse(format!("diagonal key {key:?} is not an integer")))?;
        let coeffs = coeffs
            .as_array()
            .ok_or_else(|| Error::Parse(format!("diagonal {d} must be an array")))?
            .iter()
            .map(S::decode)
            .collect::<Result<Vec<_>>>()?;
        diagonals.insert(d, coeffs);
    }
    BandedOperator::from_diagonals(window, valid, diagonals).map_err(|e| Error::Parse(e.to_string()))
}

/// An operator file in either mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyOperator {
    Numeric(BandedOperator<Complex64>),
    Exact(BandedOperator<ExactScalar>),
}

impl AnyOperator {
    pub fn mode(&self) -> Mode {
        match self {
            AnyOperator::Numeric(_) => Mode::Numeric,
            AnyOperator::Exact(_) => Mode::Exact,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyOperator::Numeric(t) => operator_to_json(t),
            AnyOperator::Exact(t) => operator_to_json(t),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match operator_mode(v)? {
            Mode::Numeric => operator_from_json(v).map(AnyOperator::Numeric),
            Mode::Exact => operator_from_json(v).map(AnyOperator::Exact),
        }
    }
}

pub fn read_operator(text: &str) -> Result<AnyOperator> {
    AnyOperator::from_json(&parse_json(text)?)
}

/// Pretty-printed JSON followed by a newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn reports_to_json(reports: &[VerificationReport]) -> Value {
    serde_json::to_value(reports).expect("reports always serialize")
}

pub fn read_reports(text: &str) -> Result<Vec<VerificationReport>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
