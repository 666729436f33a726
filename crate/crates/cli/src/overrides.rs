//! `key.path=value` overrides applied to a parsed scenario document.
//!
//! Path segments name table keys, or index arrays when numeric
//! (`agents.0.position=[1.0, 0.0]`). Values are TOML; anything that does
//! not parse as a TOML value is taken as a bare string.

use toml::{Table, Value};

pub fn apply_override(doc: &mut Table, spec: &str) -> Result<(), String> {
    let (path, raw) = spec.split_once('=').ok_or("expected KEY=VALUE")?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(format!("bad key path {path:?}"));
    }
    let value = parse_value(raw.trim());
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut root = Value::Table(std::mem::take(doc));
    let result = walk(&mut root, parents).and_then(|v| set(v, last, value));
    if let Value::Table(t) = root {
        *doc = t;
    }
    result
}

fn walk<'a>(mut here: &'a mut Value, keys: &[&str]) -> Result<&'a mut Value, String> {
    for k in keys {
        here = step(here, k)?;
    }
    Ok(here)
}

fn parse_value(raw: &str) -> Value {
    let doc = format!("v = {raw}");
    match toml::from_str::<Table>(&doc) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => Value::String(raw.to_string()),
    }
}

fn step<'a>(v: &'a mut Value, key: &str) -> Result<&'a mut Value, String> {
    match v {
        Value::Table(t) => Ok(t.entry(key.to_string()).or_insert_with(|| Value::Table(Table::new()))),
        Value::Array(a) => {
            let i: usize = key.parse().map_err(|_| format!("{key:?} is not an array index"))?;
            let n = a.len();
            a.get_mut(i).ok_or_else(|| format!("index {i} out of range (length {n})"))
        }
        _ => Err(format!("{key:?} is below a non-table value")),
    }
}

fn set(v: &mut Value, key: &str, value: Value) -> Result<(), String> {
    match v {
        Value::Table(t) => {
            t.insert(key.to_string(), value);
            Ok(())
        }
        Value::Array(a) => {
            let i: usize = key.parse().map_err(|_| format!("{key:?} is not an array index"))?;
            let n = a.len();
            *a.get_mut(i).ok_or_else(|| format!("index {i} out of range (length {n})"))? = value;
            Ok(())
        }
        _ => Err(format!("{key:?} is below a non-table value")),
    }
}
