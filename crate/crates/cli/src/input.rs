use std::path::Path;

use ksumlab::{Error, NumberMultiset, Rational, Result};
use serde_json::Value;

/// An argument naming an existing file yields one set per nonblank,
/// non-`#` line; anything else is parsed as a single set literal.
pub fn read_sets(arg: &str) -> Result<Vec<NumberMultiset>> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(vec![arg.parse()?]);
    }
    let text = std::fs::read_to_string(path)?;
    let sets: Vec<NumberMultiset> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect::<Result<_>>()?;
    if sets.is_empty() {
        return Err(Error::Parse(format!("{arg}: no sets found")));
    }
    Ok(sets)
}

pub fn read_one_set(arg: &str) -> Result<NumberMultiset> {
    let mut sets = read_sets(arg)?;
    if sets.len() != 1 {
        return Err(Error::Parse(format!("{arg}: expected one set, found {}", sets.len())));
    }
    Ok(sets.remove(0))
}

/// Integers that fit in `i64` become JSON numbers; everything else a
/// `"p/q"` (or big-integer) string, so no precision is lost.
pub fn rational_json(x: &Rational) -> Value {
    if x.is_integer() {
        if let Ok(v) = i64::try_from(x.numer()) {
            return Value::from(v);
        }
    }
    Value::from(x.to_string())
}

pub fn rationals_json<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(xs.into_iter().map(rational_json).collect())
}
