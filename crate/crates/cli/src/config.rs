//! Experiment configurations: one JSON object per run, parsed strictly.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Dim,
    Jets,
    Morse,
    Bounded,
    Closure,
    Gg,
    Certify,
}

impl Command {
    pub const ALL: [Command; 7] =
        [Command::Dim, Command::Jets, Command::Morse, Command::Bounded, Command::Closure, Command::Gg, Command::Certify];

    pub fn name(self) -> &'static str {
        match self {
            Command::Dim => "dim",
            Command::Jets => "jets",
            Command::Morse => "morse",
            Command::Bounded => "bounded",
            Command::Closure => "closure",
            Command::Gg => "gg",
            Command::Certify => "certify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::key("command", format!("unknown command {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::key("format", format!("expected json or csv, got {other:?}"))),
        }
    }
}

/// A parsed experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub params: Map<String, Value>,
    pub seed: Option<u64>,
    pub output: Option<String>,
    pub format: Option<Format>,
}


impl ExperimentConfig {
    /// Parses a config document. `command` (from the command line) must agree
    /// with the document's `command` key when both are present.
    pub fn parse(text: &str, command: Option<Command>) -> CliResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config is not valid JSON: {e}")))?;
        Self::from_value(value, command)
    }

    pub fn from_value(value: Value, command: Option<Command>) -> CliResult<Self> {
        let Value::Object(mut map) = value else {
            return Err(CliError::Validation("config must be a JSON object".into()));
        };
        let declared = match map.remove("command") {
            Some(Value::String(s)) => Some(s.parse::<Command>()?),
            Some(_) => return Err(CliError::key("command", "must be a string")),
            None => None,
        };
        let command = match (declared, command) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::key("command", format!("config is for `{a}` but `{b}` was requested")))
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => return Err(CliError::key("command", "missing")),
        };
        let seed = match map.remove("seed") {
            None => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| CliError::key("seed", "must be a nonnegative 64-bit integer"))?),
        };
        let (output, format) = match map.remove("output") {
            None => (None, None),
            Some(Value::Object(mut o)) => {
                let path = match o.remove("path") {
                    None => None,
                    Some(Value::String(s)) => Some(s),
                    Some(_) => return Err(CliError::key("output.path", "must be a string")),
                };
                let format = match o.remove("format") {
                    None => None,
                    Some(Value::String(s)) => Some(s.parse()?),
                    Some(_) => return Err(CliError::key("output.format", "must be a string")),
                };
                if let Some(k) = o.keys().next() {
                    return Err(CliError::key(format!("output.{k}"), "unknown key"));
                }
                (path, format)
            }
            Some(_) => return Err(CliError::key("output", "must be an object with `path` and `format`")),
        };
        Ok(ExperimentConfig { command, params: map, seed, output, format })
    }

    /// The canonical document: command, seed and parameters with sorted keys.
    pub fn canonical(&self) -> Value {
        let mut map = self.params.clone();
        map.insert("command".into(), Value::String(self.command.name().into()));
        if let Some(seed) = self.seed {
            map.insert("seed".into(), Value::from(seed));
        }
        Value::Object(map)
    }

    /// SHA-256 of the canonical document, independent of key order and of
    /// output settings.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(&self.canonical()).expect("serializable");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Parameters given as `{"range": [a, b]}` or `{"values": [...]}`.
    pub fn ranged(&self) -> CliResult<Option<(String, Vec<Value>)>> {
        let mut found = None;
        for (key, v) in &self.params {
            if let Some(values) = range_values(key, v)? {
                if let Some((first, _)) = &found {
                    return Err(CliError::key(key, format!("only one parameter may be ranged, `{first}` already is")));
                }
                found = Some((key.clone(), values));
            }
        }
        Ok(found)
    }

    /// The config with the ranged parameter set to `value`.
    pub fn with_param(&self, key: &str, value: Value) -> Self {
        let mut out = self.clone();
        out.params.insert(key.to_string(), value);
        out
    }
}

fn range_values(key: &str, v: &Value) -> CliResult<Option<Vec<Value>>> {
    let Value::Object(o) = v else { return Ok(None) };
    let bad = |m: &str| CliError::key(key, m.to_string());
    match (o.get("range"), o.get("values"), o.len()) {
        (Some(Value::Array(r)), None, 1) => {
            let ends: Vec<i64> = r.iter().filter_map(Value::as_i64).collect();
            match ends.as_slice() {
                [a, b] if a <= b && r.len() == 2 => Ok(Some((*a..=*b).map(Value::from).collect())),
                _ => Err(bad("range must be [from, to] with integers from <= to")),
            }
        }
        (None, Some(Value::Array(vals)), 1) if !vals.is_empty() => Ok(Some(vals.clone())),
        (Some(_), _, _) | (_, Some(_), _) => Err(bad("a ranged parameter is {\"range\": [a, b]} or {\"values\": [...]}")),
        _ => Ok(None),
    }
}

/// Command parameters, consumed key by key; leftovers are rejected.
pub struct Params {
    map: Map<String, Value>,
    used: BTreeSet<String>,
}

impl Params {
    pub fn new(map: Map<String, Value>) -> Self {
        Params { map, used: BTreeSet::new() }
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        self.used.insert(key.to_string());
        self.map.get(key).cloned()
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn value(&mut self, key: &str) -> CliResult<Value> {
        self.take(key).ok_or_else(|| CliError::key(key, "missing"))
    }

    pub fn opt_value(&mut self, key: &str) -> Option<Value> {
        self.take(key)
    }

    pub fn uint(&mut self, key: &str) -> CliResult<u64> {
        let v = self.value(key)?;
        v.as_u64().ok_or_else(|| CliError::key(key, format!("expected a nonnegative integer, got {v}")))
    }

    pub fn uint_or(&mut self, key: &str, default: u64) -> CliResult<u64> {
        if self.has(key) {
            self.uint(key)
        } else {
            self.used.insert(key.to_string());
            Ok(default)
        }
    }

    pub fn int(&mut self, key: &str) -> CliResult<i64> {
        let v = self.value(key)?;
        v.as_i64().ok_or_else(|| CliError::key(key, format!("expected an integer, got {v}")))
    }

    pub fn float_or(&mut self, key: &str, default: f64) -> CliResult<f64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| CliError::key(key, format!("expected a number, got {v}"))),
        }
    }

    pub fn bool_or(&mut self, key: &str, default: bool) -> CliResult<bool> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v.as_bool().ok_or_else(|| CliError::key(key, format!("expected true or false, got {v}"))),
        }
    }

    pub fn string(&mut self, key: &str) -> CliResult<String> {
        match self.value(key)? {
            Value::String(s) => Ok(s),
            v => Err(CliError::key(key, format!("expected a string, got {v}"))),
        }
    }

    pub fn opt_string(&mut self, key: &str) -> CliResult<Option<String>> {
        if self.has(key) {
            self.string(key).map(Some)
        } else {
            self.used.insert(key.to_string());
            Ok(None)
        }
    }

    pub fn rational(&mut self, key: &str) -> CliResult<BigRational> {
        let v = self.value(key)?;
        rational_value(key, &v)
    }

    pub fn rational_or(&mut self, key: &str, default: BigRational) -> CliResult<BigRational> {
        if self.has(key) {
            self.rational(key)
        } else {
            self.used.insert(key.to_string());
            Ok(default)
        }
    }

    /// Errors on the first key that no accessor asked for.
    pub fn finish(self) -> CliResult<()> {
        match self.map.keys().find(|k| !self.used.contains(*k)) {
            Some(k) => Err(CliError::key(k, "unknown key")),
            None => Ok(()),
        }
    }
}

/// An exact rational from an integer or a string `"a"` / `"a/b"`.
pub fn rational_value(key: &str, v: &Value) -> CliResult<BigRational> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap_or(0).into())),
        Value::String(s) => jetmorse::scalar::parse_rational(s).map_err(|e| CliError::key(key, e.to_string())),
        other => Err(CliError::key(key, format!("expected an integer or a rational string \"a/b\", got {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_ignores_key_order() {
        let a = ExperimentConfig::parse(r#"{"command":"dim","k":2,"m":3,"r":1}"#, None).unwrap();
        let b = ExperimentConfig::parse(r#"{"r":1,"m":3,"k":2,"command":"dim"}"#, None).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig::parse(r#"{"r":1,"m":4,"k":2,"command":"dim"}"#, None).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn command_must_agree() {
        assert!(ExperimentConfig::parse(r#"{"command":"dim"}"#, Some(Command::Morse)).is_err());
        assert_eq!(ExperimentConfig::parse(r#"{"k":1}"#, Some(Command::Dim)).unwrap().command, Command::Dim);
        assert!(ExperimentConfig::parse(r#"{"k":1}"#, None).is_err());
        assert!(ExperimentConfig::parse(r#"[1]"#, None).is_err());
    }

    #[test]
    fn ranges() {
        let c = ExperimentConfig::parse(r#"{"command":"dim","k":2,"m":{"range":[1,3]},"r":1}"#, None).unwrap();
        assert_eq!(c.ranged().unwrap(), Some(("m".to_string(), vec![json!(1), json!(2), json!(3)])));
        let c = ExperimentConfig::parse(r#"{"command":"dim","k":{"values":[2,3]},"m":{"range":[1,3]},"r":1}"#, None).unwrap();
        assert!(c.ranged().is_err());
        let c = ExperimentConfig::parse(r#"{"command":"dim","m":{"range":[3,1]}}"#, None).unwrap();
        assert!(c.ranged().is_err());
    }

    #[test]
    fn strict_params() {
        let mut p = Params::new(json!({"k": 2, "extra": 1}).as_object().unwrap().clone());
        assert_eq!(p.uint("k").unwrap(), 2);
        match p.finish() {
            Err(CliError::Key { key, .. }) => assert_eq!(key, "extra"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rationals() {
        assert!(rational_value("p", &json!("1/0")).is_err());
        assert_eq!(rational_value("p", &json!("3/2")).unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(rational_value("p", &json!(4)).unwrap(), BigRational::from_integer(4.into()));
        assert!(rational_value("p", &json!(1.5)).is_err());
    }
}
