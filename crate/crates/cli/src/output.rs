//! Result records and their JSON and CSV renderings.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::commands::Summary;
use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Value>,
}

impl Provenance {
    pub fn new(seed: Option<u64>, details: &Map<String, Value>) -> Self {
        Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            grid: details.get("grid").cloned(),
            samples: details.get("samples").cloned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub command: String,
    pub config_hash: String,
    pub timestamp: String,
    pub payload: Value,
    pub provenance: Provenance,
    pub notes: Vec<String>,
}

/// One row of a sweep table.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: Value,
    pub summary: Summary,
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// `x` rounded to 12 significant digits, printed in its shortest form.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float syntax");
    rounded.to_string()
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => sig12(n.as_f64().expect("f64")),
        other => other.to_string(),
    }
}

/// Dotted paths to every scalar leaf of `v`; array indices are path segments.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(o) => o.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        leaf => out.push((prefix.to_string(), scalar_text(leaf))),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

pub fn render(record: &ResultRecord, sweep: Option<&[SweepRow]>, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(record).map_err(|e| CliError::Validation(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            let io = |e: csv::Error| CliError::Validation(e.to_string());
            match sweep {
                Some(rows) => {
                    w.write_record(["param", "value", "stderr", "reference", "ratio", "ratio_stderr"]).map_err(io)?;
                    for row in rows {
                        let s = &row.summary;
                        w.write_record([
                            scalar_text(&row.param),
                            sig12(s.value),
                            opt(s.stderr),
                            opt(s.reference),
                            opt(s.ratio),
                            opt(s.ratio_stderr),
                        ])
                        .map_err(io)?;
                    }
                }
                None => {
                    let mut cells = vec![
                        ("command".to_string(), record.command.clone()),
                        ("config_hash".to_string(), record.config_hash.clone()),
                        ("timestamp".to_string(), record.timestamp.clone()),
                    ];
                    flatten("payload", &record.payload, &mut cells);
                    let prov = serde_json::to_value(&record.provenance).expect("serializable");
                    flatten("provenance", &prov, &mut cells);
                    w.write_record(["key", "value"]).map_err(io)?;
                    for (k, v) in cells {
                        w.write_record([k, v]).map_err(io)?;
                    }
                }
            }
            let bytes = w.into_inner().map_err(|e| CliError::Validation(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Validation(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(2.0), "2");
        assert_eq!(sig12(1e-20 / 3.0), "0.00000000000000000000333333333333");
    }

    #[test]
    fn flattening() {
        let mut out = vec![];
        flatten("p", &json!({"a": [1, 2.5], "b": {"c": "x"}, "d": null}), &mut out);
        let keys: Vec<_> = out.iter().map(|(k, v)| format!("{k}={v}")).collect();
        assert_eq!(keys, ["p.a.0=1", "p.a.1=2.5", "p.b.c=x", "p.d="]);
    }
}
