//! JSON payloads for the field commands.
//!
//! Wherever a section's twist is determined by its position, it may be given
//! as a bare coefficient list (`[2, 0, 0]`) or a single constant (`2`)
//! instead of `{"twist": 2, "coeffs": [...]}`.

use std::io::Read;

use serde_json::{json, Value};

use cohiggs::{Error, Result};

/// A JSON literal, `@path` for a file, or `-` for stdin.
pub fn read(arg: &str) -> Result<Value> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        s
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("payload: {e}")))
}

pub fn section(v: Value, twist: i64) -> Value {
    match v {
        Value::Array(coeffs) => json!({ "twist": twist, "coeffs": coeffs }),
        Value::Number(_) | Value::String(_) => {
            let mut coeffs = vec![v];
            coeffs.resize((twist + 1).max(1) as usize, json!(0));
            json!({ "twist": twist, "coeffs": coeffs })
        }
        other => other,
    }
}

fn field(mut v: Value, name: &str, twist: i64) -> Result<Value> {
    let obj = v.as_object_mut().ok_or_else(|| Error::Parse("payload must be a JSON object".into()))?;
    let x = obj.remove(name).ok_or_else(|| Error::Parse(format!("payload is missing {name:?}")))?;
    obj.insert(name.into(), section(x, twist));
    Ok(v)
}

/// Fields `(name, twist)` of a rank-2 payload.
pub fn fields(mut v: Value, slots: &[(&str, i64)]) -> Result<Value> {
    for &(name, twist) in slots {
        v = field(v, name, twist)?;
    }
    Ok(v)
}

/// Entries of a matrix with `(i, j)` entry in `O(m_i - m_j + 2)`.
pub fn higgs(mut v: Value) -> Result<Value> {
    let m: Vec<i64> = v
        .get("splitting")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("payload is missing \"splitting\"".into()))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::Parse("splitting entries must be integers".into())))
        .collect::<Result<_>>()?;
    let mut sorted = m.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if sorted != m {
        return Err(Error::Parse("splitting must be listed in non-increasing order".into()));
    }
    if let Some(Value::Array(rows)) = v.get_mut("entries") {
        for (i, row) in rows.iter_mut().enumerate() {
            if let Value::Array(row) = row {
                for (j, e) in row.iter_mut().enumerate() {
                    if let (Some(mi), Some(mj)) = (m.get(i), m.get(j)) {
                        *e = section(e.take(), mi - mj + 2);
                    }
                }
            }
        }
    }
    Ok(v)
}

/// `[rho_1, ..., rho_r]` with `rho_k` in `O(2k)`.
pub fn char_coeffs(v: Value) -> Result<Value> {
    match v {
        Value::Array(xs) => Ok(Value::Array(
            xs.into_iter().enumerate().map(|(k, x)| section(x, 2 * (k as i64 + 1))).collect(),
        )),
        _ => Err(Error::Parse("expected a list of characteristic coefficients".into())),
    }
}

/// Four entries, all in `O(2)`.
pub fn e0(mut v: Value) -> Result<Value> {
    let rows = v
        .get_mut("entries")
        .and_then(Value::as_array_mut)
        .ok_or_else(|| Error::Parse("payload is missing \"entries\"".into()))?;
    for row in rows.iter_mut() {
        if let Value::Array(row) = row {
            for e in row.iter_mut() {
                *e = section(e.take(), 2);
            }
        }
    }
    Ok(v)
}

pub fn decode<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}
