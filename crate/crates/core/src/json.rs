//! Helpers for reading and writing exact integers as JSON numbers.
//!
//! Integers are emitted as bare JSON number tokens of any length, which
//! relies on `serde_json`'s `arbitrary_precision` feature.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::Serializer;
use serde_json::{Number, Value};
use thiserror::Error;

/// A JSON value that does not have the expected shape. Every variant names
/// the offending field with a path such as `matrices[1][0][1].num[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("missing field `{field}`")]
    Missing { field: String },
    #[error("field `{field}` has the wrong type: expected {expected}")]
    WrongType { field: String, expected: &'static str },
    #[error("field `{field}` must be an integer")]
    NonInteger { field: String },
    #[error("field `{field}` must be a positive integer denominator")]
    BadDenominator { field: String },
}

pub(crate) fn int_to_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("decimal integer is a valid JSON number")
}

pub(crate) fn uint_to_number(x: &BigUint) -> Number {
    Number::from_str(&x.to_string()).expect("decimal integer is a valid JSON number")
}

pub(crate) fn serialize_biguint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&uint_to_number(x), s)
}

/// Parses an exact integer; rejects `1.5`, `1e3`, strings, and so on.
pub(crate) fn integer(value: &Value, field: &str) -> Result<BigInt, JsonError> {
    match value {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| JsonError::NonInteger {
            field: field.to_string(),
        }),
        _ => Err(JsonError::NonInteger {
            field: field.to_string(),
        }),
    }
}

pub(crate) fn unsigned(value: &Value, field: &str) -> Result<u64, JsonError> {
    let n = integer(value, field)?;
    u64::try_from(n).map_err(|_| JsonError::WrongType {
        field: field.to_string(),
        expected: "nonnegative integer",
    })
}
