//! Versioned reports and their JSON, CSV and text encodings.
//!
//! CSV rows are `path,value` where `path` addresses a leaf of the JSON tree
//! (`results.lengths[0].constant`) and `value` is that leaf as a JSON literal,
//! so both encodings carry identical numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The property being checked, in words.
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(config: &RunConfig, results: Value, checks: Vec<CheckResult>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: config.command.name().to_string(),
            config: config.clone(),
            results,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut out = serde_json::to_string_pretty(self).map_err(CliError::serialize)?;
        out.push('\n');
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Report, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed report: {e}")))
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let tree = serde_json::to_value(self).map_err(CliError::serialize)?;
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["path", "value"]).map_err(CliError::serialize)?;
        for (path, leaf) in flatten(&tree) {
            let literal = serde_json::to_string(&leaf).map_err(CliError::serialize)?;
            writer.write_record([path.as_str(), literal.as_str()]).map_err(CliError::serialize)?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::serialize(e.into_error()))?;
        String::from_utf8(bytes).map_err(CliError::serialize)
    }

    pub fn from_csv(text: &str) -> Result<Report, CliError> {
        let malformed = |e: String| CliError::Usage(format!("malformed CSV report: {e}"));
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut root = Value::Null;
        for row in reader.records() {
            let row = row.map_err(|e| malformed(e.to_string()))?;
            let (path, literal) = (row.get(0).unwrap_or(""), row.get(1).unwrap_or(""));
            let leaf: Value = serde_json::from_str(literal).map_err(|e| malformed(e.to_string()))?;
            insert(&mut root, &parse_path(path).map_err(malformed)?, leaf).map_err(malformed)?;
        }
        serde_json::from_value(root).map_err(|e| malformed(e.to_string()))
    }

    pub fn to_text(&self) -> Result<String, CliError> {
        let tree = serde_json::to_value(self).map_err(CliError::serialize)?;
        let mut out = String::new();
        for (path, leaf) in flatten(&tree) {
            let shown = match &leaf {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{path} = {shown}\n"));
        }
        let verdict = if self.passed() { "all checks passed" } else { "some checks FAILED" };
        out.push_str(&format!("# {} checks, {verdict}\n", self.checks.len()));
        Ok(out)
    }
}

/// Leaves of a JSON tree in document order; empty containers count as leaves.
pub fn flatten(tree: &Value) -> Vec<(String, Value)> {
    fn walk(v: &Value, path: &mut String, out: &mut Vec<(String, Value)>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, child) in map {
                    let len = path.len();
                    if !path.is_empty() {
                        path.push('.');
                    }
                    path.push_str(k);
                    walk(child, path, out);
                    path.truncate(len);
                }
            }
            Value::Array(items) if !items.is_empty() => {
                for (i, child) in items.iter().enumerate() {
                    let len = path.len();
                    path.push_str(&format!("[{i}]"));
                    walk(child, path, out);
                    path.truncate(len);
                }
            }
            leaf => out.push((path.clone(), leaf.clone())),
        }
    }
    let mut out = Vec::new();
    walk(tree, &mut String::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Key(String),
    Index(usize),
}

fn parse_path(path: &str) -> Result<Vec<Segment>, String> {
    let mut out = Vec::new();
    let mut rest = path;
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix('[') {
            let close = after.find(']').ok_or_else(|| format!("unclosed index in {path:?}"))?;
            let index = after[..close].parse().map_err(|_| format!("bad index in {path:?}"))?;
            out.push(Segment::Index(index));
            rest = &after[close + 1..];
        } else {
            let body = if out.is_empty() { rest } else { rest.strip_prefix('.').ok_or_else(|| format!("bad path {path:?}"))? };
            let end = body.find(['.', '[']).unwrap_or(body.len());
            if end == 0 {
                return Err(format!("empty key in {path:?}"));
            }
            out.push(Segment::Key(body[..end].to_string()));
            rest = &body[end..];
        }
    }
    Ok(out)
}

fn insert(root: &mut Value, path: &[Segment], leaf: Value) -> Result<(), String> {
    let Some((head, tail)) = path.split_first() else {
        if !root.is_null() {
            return Err("duplicate path".into());
        }
        *root = leaf;
        return Ok(());
    };
    match head {
        Segment::Key(k) => {
            if root.is_null() {
                *root = Value::Object(Map::new());
            }
            let map = root.as_object_mut().ok_or("key under a non-object")?;
            insert(map.entry(k.clone()).or_insert(Value::Null), tail, leaf)
        }
        Segment::Index(i) => {
            if root.is_null() {
                *root = Value::Array(Vec::new());
            }
            let items = root.as_array_mut().ok_or("index under a non-array")?;
            if *i > items.len() {
                return Err(format!("index {i} out of order"));
            }
            if *i == items.len() {
                items.push(Value::Null);
            }
            insert(&mut items[*i], tail, leaf)
        }
    }
}

/// `"p/q"`, always with an explicit denominator.
pub fn rational(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn rationals(values: &[BigRational]) -> Value {
    Value::Array(values.iter().map(rational).collect())
}

pub fn parse_rational(text: &str) -> Option<BigRational> {
    let (p, q) = text.split_once('/')?;
    let (p, q): (BigInt, BigInt) = (p.parse().ok()?, q.parse().ok()?);
    (q != BigInt::from(0)).then(|| BigRational::new(p, q))
}
