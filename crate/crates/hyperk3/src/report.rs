//! Reports and their three renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use hyperk3_core::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

/// JSON number when it fits in `i64`, decimal string otherwise.
pub fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn big_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(big).collect())
}

pub fn big_rows(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| big_vec(r)).collect())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), if other.is_array() { other.to_string() } else { scalar(other) })),
    }
}

/// Rows of `result.rows` under the given column names.
fn table(v: &Value, columns: &[&str]) -> Option<Vec<Vec<String>>> {
    let rows = v.get("rows")?.as_array()?;
    Some(rows.iter().map(|r| columns.iter().map(|c| r.get(*c).map_or("-".into(), scalar)).collect()).collect())
}

/// Columns for the tabular commands.
pub fn table_columns(report: &Report) -> Option<Vec<&'static str>> {
    match report.command.as_str() {
        "catalog" => Some(vec!["k", "degree", "unramified", "ct"]),
        "scan" => match report.result.get("family").and_then(Value::as_str) {
            Some("deg22") => Some(vec!["psi", "case", "k", "st", "sh"]),
            Some("lehmerA") => Some(vec!["psi", "k", "st", "dynkin", "chi1_tilde", "trace", "sh"]),
            _ => Some(vec!["psi", "case", "k", "st", "dynkin", "chi1_tilde", "trace", "sh"]),
        },
        _ => None,
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        if let Some(cols) = table_columns(self) {
            let _ = writeln!(s, "# {}", cols.join("\t"));
            for r in table(&self.result, &cols).unwrap_or_default() {
                let _ = writeln!(s, "{}", r.join("\t"));
            }
            return s;
        }
        let mut kv = Vec::new();
        flatten("", &self.result, &mut kv);
        for (k, v) in kv {
            let _ = writeln!(s, "{k}\t{v}");
        }
        s
    }

    pub fn to_pretty(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "hyperk3 {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "  {k} = {v}");
        }
        if let Some(cols) = table_columns(self) {
            let rows = table(&self.result, &cols).unwrap_or_default();
            let widths: Vec<usize> = (0..cols.len())
                .map(|i| rows.iter().map(|r| r[i].len()).chain([cols[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
            };
            let _ = writeln!(s, "{}", line(cols.clone()));
            for r in &rows {
                let _ = writeln!(s, "{}", line(r.iter().map(String::as_str).collect()));
            }
            let _ = writeln!(s, "({} rows)", rows.len());
        } else {
            let mut kv = Vec::new();
            flatten("", &self.result, &mut kv);
            let w = kv.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in kv {
                let _ = writeln!(s, "{k:<w$}  {v}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut j = self.to_json();
                j.push('\n');
                j
            }
            Format::Tsv => self.to_tsv(),
            Format::Pretty => self.to_pretty(),
        }
    }
}
