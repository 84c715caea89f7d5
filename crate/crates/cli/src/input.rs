//! Reading JSON inputs. Documents are parsed to a `serde_json::Value` first
//! so that bad values can be reported with the path of the offending field.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gwcalc_core::{GenusSequence, Rational};
use serde_json::Value;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = read_text(path)?;
    serde_json::from_str(&text).with_context(|| format!("{}: malformed JSON", path.display()))
}

fn rational_at(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse::<Rational>().map_err(|e| anyhow!("{field}: {e}")),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap())),
        other => bail!("{field}: expected a rational string such as \"-1/12\", found {other}"),
    }
}

/// `{"label": ..., "c1_pairing": ..., "values": ["p/q", ...]}`; only
/// `values` is required.
pub fn genus_sequence(v: &Value) -> Result<GenusSequence> {
    let obj = v.as_object().ok_or_else(|| anyhow!("expected a JSON object"))?;
    let values = obj
        .get("values")
        .ok_or_else(|| anyhow!("values: missing field"))?
        .as_array()
        .ok_or_else(|| anyhow!("values: expected an array"))?;
    if values.is_empty() {
        bail!("values: must not be empty");
    }
    let values = values
        .iter()
        .enumerate()
        .map(|(i, x)| rational_at(x, &format!("values[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let label = match obj.get("label") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => bail!("label: expected a string"),
    };
    let c1 = match obj.get("c1_pairing") {
        None => 0,
        Some(x) => x.as_i64().ok_or_else(|| anyhow!("c1_pairing: expected an integer"))?,
    };
    Ok(GenusSequence::new(label, c1, values))
}

pub fn genus_sequence_file(path: &Path) -> Result<GenusSequence> {
    let v = read_json(path)?;
    genus_sequence(&v).with_context(|| path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_bad_field() {
        let v: Value = serde_json::from_str(r#"{"values": ["1", "0", "1/2", "1/0"]}"#).unwrap();
        let err = genus_sequence(&v).unwrap_err().to_string();
        assert!(err.starts_with("values[3]: invalid rational"), "{err}");
        assert!(err.contains("1/0"));
    }

    #[test]
    fn accepts_integers_and_metadata() {
        let v: Value = serde_json::from_str(r#"{"label": "H", "c1_pairing": 4, "values": [1, "-1/12"]}"#).unwrap();
        let s = genus_sequence(&v).unwrap();
        assert_eq!(s.label, "H");
        assert_eq!(s.c1_pairing, 4);
        assert_eq!(s.values[1], Rational::new(-1, 12));
    }
}
