//! Byte-stable JSON: keys sorted, floats in `{:.12e}`, non-finite floats as
//! strings, every report stamped with the schema version.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::spec::SCHEMA_VERSION;
use crate::transport::Trajectory;
use crate::Real;

/// Format a float the way every report does.
pub fn float_text(v: f64) -> String {
    if v.is_nan() {
        "\"NaN\"".into()
    } else if v.is_infinite() {
        if v > 0.0 { "\"inf\"" } else { "\"-inf\"" }.into()
    } else {
        format!("{v:.12e}")
    }
}

fn escape(s: &str, out: &mut String) {
    out.push_str(&Value::String(s.to_string()).to_string());
}

fn emit(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                out.push_str(&n.to_string());
            } else {
                out.push_str(&float_text(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => escape(s, out),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(indent + 2, out);
                emit(item, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(indent + 2, out);
                escape(k, out);
                out.push_str(": ");
                emit(&map[*k], indent + 2, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
    }
}

/// Serialize through `serde_json::Value` and print deterministically.
pub fn to_json<S: Serialize + ?Sized>(value: &S) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    emit(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

/// A named report body wrapped with the schema version and the command that
/// produced it.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            fields: Map::new(),
        }
    }

    pub fn set<S: Serialize + ?Sized>(
        &mut self,
        key: &str,
        value: &S,
    ) -> serde_json::Result<&mut Self> {
        self.fields.insert(key.into(), serde_json::to_value(value)?);
        Ok(self)
    }

    pub fn to_value(&self) -> Value {
        let mut m = self.fields.clone();
        m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        m.insert("command".into(), Value::from(self.command.clone()));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        to_json(&self.to_value()).expect("values serialize")
    }
}

/// Write through a temporary sibling and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

/// `t,x1..xn,v1..vn`, one row per recorded sample.
pub fn trajectory_csv<T: Real>(traj: &Trajectory<T>) -> String {
    let n = traj.x.first().map_or(0, Vec::len);
    let mut out = String::from("t");
    for i in 1..=n {
        let _ = write!(out, ",x{i}");
    }
    for i in 1..=n {
        let _ = write!(out, ",v{i}");
    }
    out.push('\n');
    let num = |v: T| format!("{:.12e}", v.to_f64().unwrap_or(f64::NAN));
    for ((t, x), v) in traj.t.iter().zip(&traj.x).zip(&traj.v) {
        out.push_str(&num(*t));
        for c in x.iter().chain(v) {
            out.push(',');
            out.push_str(&num(*c));
        }
        out.push('\n');
    }
    out
}
