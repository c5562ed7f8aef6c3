use std::fmt::Write;

use serde_json::Value;

/// `key: value` lines; nested objects are indented, vectors print as `(a,b)`.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    lines(&mut out, v, 0);
    out
}

fn lines(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                if val.is_null() {
                    continue;
                }
                if is_block(val) {
                    writeln!(out, "{pad}{key}:").unwrap();
                    lines(out, val, depth + 1);
                } else {
                    writeln!(out, "{pad}{key}: {}", inline(val)).unwrap();
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_block(item) {
                    writeln!(out, "{pad}-").unwrap();
                    lines(out, item, depth + 1);
                } else {
                    writeln!(out, "{pad}- {}", inline(item)).unwrap();
                }
            }
        }
        other => writeln!(out, "{pad}{}", inline(other)).unwrap(),
    }
}

fn is_block(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(|i| i.is_object() || is_matrix(i)),
        _ => false,
    }
}

fn is_matrix(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if rows.iter().any(|r| r.as_array().is_some_and(|r| r.iter().any(Value::is_array))))
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            format!("({})", items.iter().map(inline).collect::<Vec<_>>().join(","))
        }
        Value::Array(items) => items.iter().map(inline).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
