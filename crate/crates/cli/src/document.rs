//! The JSON problem format.
//!
//! A document is one object with `"kind": "schedule" | "raw" | "hours"`.
//! Schedule documents mirror [`ScheduleProblem`] field for field. Raw documents
//! list contract labels and give each side's choice map as a quota spec or an
//! explicit table. Hours documents rank counterparts with maximum hours.
//!
//! Parsing is two-phase: the text is read into a JSON value first (syntax
//! errors carry line and column), then each part is deserialized with its
//! field path tracked (semantic errors carry the path).

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use schedmatch::schedule::{AgentSpec, HoursAgent, HoursEncoding, ScheduleProblem};

use crate::error::{CliError, Result};

/// A non-negative quota. Negative numbers are rejected while parsing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quota(pub usize);

impl Serialize for Quota {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.0 as u64)
    }
}

impl<'de> Deserialize<'de> for Quota {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct QuotaVisitor;

        impl Visitor<'_> for QuotaVisitor {
            type Value = Quota;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer quota")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Quota, E> {
                usize::try_from(v).map(Quota).map_err(|_| E::custom("quota is too large"))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Quota, E> {
                if v < 0 {
                    return Err(E::custom("quota must be ≥ 0"));
                }
                self.visit_u64(v as u64)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Quota, E> {
                if v < 0.0 {
                    return Err(E::custom("quota must be ≥ 0"));
                }
                Err(E::custom("quota must be a whole number"))
            }

            // Quotas written as strings, e.g. "3".
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Quota, E> {
                match v.trim().parse::<i64>() {
                    Ok(n) => self.visit_i64(n),
                    Err(_) => Err(E::custom(format!("quota must be a whole number, got {v:?}"))),
                }
            }
        }

        deserializer.deserialize_any(QuotaVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemDocument {
    Schedule(ScheduleDocument),
    Raw(RawDocument),
    Hours(HoursDocument),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDocument {
    pub workers: Vec<String>,
    pub firms: Vec<String>,
    pub days: Vec<String>,
    #[serde(default)]
    pub worker_specs: Vec<AgentDocument>,
    #[serde(default)]
    pub firm_specs: Vec<AgentDocument>,
    /// Restricts the market to these `(worker, firm, day)` triples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contracts: Option<Vec<(String, String, String)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentDocument {
    pub agent: String,
    /// `(counterpart, day)`, most preferred first.
    #[serde(default)]
    pub preferences: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quota: Option<Quota>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub day_quotas: Vec<(String, Quota)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterpart_quotas: Vec<(String, Quota)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub labels: Vec<String>,
    pub worker_choice: ChoiceDocument,
    pub firm_choice: ChoiceDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ChoiceDocument {
    Quota(QuotaDocument),
    Table(TableDocument),
}

impl Default for ChoiceDocument {
    fn default() -> Self {
        ChoiceDocument::Table(TableDocument::default())
    }
}

impl<'de> Deserialize<'de> for ChoiceDocument {
    // Only reached when a raw document is deserialized in one piece; the
    // path-tracking parser splits the tag off itself.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        choice_from_value(value, "").map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotaDocument {
    /// Acceptable contracts, most preferred first.
    pub preference: Vec<String>,
    /// Overall quota; absent means no cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Quota>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupDocument>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_overlap: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    pub members: Vec<String>,
    pub q: Quota,
}

/// Offered set to chosen set, both written as comma-separated labels
/// (`""` is the empty set).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub entries: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoursDocument {
    pub workers: Vec<HoursAgentDocument>,
    pub firms: Vec<HoursAgentDocument>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoursAgentDocument {
    pub agent: String,
    /// `(counterpart, maximum hours)`, most preferred first.
    #[serde(default)]
    pub ranking: Vec<(String, Quota)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<Quota>,
}

fn join_path(prefix: &str, path: &str) -> String {
    match (prefix.is_empty(), path == "." || path.is_empty()) {
        (true, true) => "document".to_string(),
        (true, false) => path.to_string(),
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}.{path}"),
    }
}

/// Deserialize `value` with field paths prefixed by `prefix`.
fn from_value<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = join_path(prefix, &e.path().to_string());
        CliError::invalid(path, e.into_inner())
    })
}

/// Split the tag field off an object.
fn split_tag(value: Value, tag: &str, prefix: &str) -> Result<(String, Value)> {
    let Value::Object(mut map) = value else {
        return Err(CliError::invalid(join_path(prefix, ""), "expected an object"));
    };
    let tag_path = join_path(prefix, tag);
    match map.remove(tag) {
        Some(Value::String(name)) => Ok((name, Value::Object(map))),
        Some(_) => Err(CliError::invalid(tag_path, "expected a string")),
        None => Err(CliError::invalid(tag_path, "missing field")),
    }
}

fn choice_from_value(value: Value, prefix: &str) -> Result<ChoiceDocument> {
    let (kind, body) = split_tag(value, "type", prefix)?;
    match kind.as_str() {
        "quota" => Ok(ChoiceDocument::Quota(from_value(body, prefix)?)),
        "table" => Ok(ChoiceDocument::Table(from_value(body, prefix)?)),
        other => Err(CliError::invalid(
            join_path(prefix, "type"),
            format!("unknown choice map type {other:?}, expected \"quota\" or \"table\""),
        )),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWire {
    labels: Vec<String>,
    worker_choice: Value,
    firm_choice: Value,
}

/// Parse a document without validating it against the model.
pub fn parse_document(text: &str) -> Result<ProblemDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Syntax(format!("invalid JSON: {e}")))?;
    let (kind, body) = split_tag(value, "kind", "")?;
    match kind.as_str() {
        "schedule" => Ok(ProblemDocument::Schedule(from_value(body, "")?)),
        "hours" => Ok(ProblemDocument::Hours(from_value(body, "")?)),
        "raw" => {
            let wire: RawWire = from_value(body, "")?;
            Ok(ProblemDocument::Raw(RawDocument {
                labels: wire.labels,
                worker_choice: choice_from_value(wire.worker_choice, "worker_choice")?,
                firm_choice: choice_from_value(wire.firm_choice, "firm_choice")?,
            }))
        }
        other => Err(CliError::invalid(
            "kind",
            format!("unknown problem kind {other:?}, expected \"schedule\", \"raw\" or \"hours\""),
        )),
    }
}

/// JSON with a trailing newline. Arrays of plain values such as
/// `["f1", "d1"]` stay on one line; everything else is indented.
pub fn render_document(doc: &ProblemDocument) -> String {
    let value = serde_json::to_value(doc).expect("documents always serialize");
    let mut text = String::new();
    write_value(&value, 0, &mut text);
    text.push('\n');
    text
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

impl From<&AgentSpec> for AgentDocument {
    fn from(spec: &AgentSpec) -> Self {
        AgentDocument {
            agent: spec.agent.clone(),
            preferences: spec.preferences.clone(),
            quota: spec.quota.map(Quota),
            day_quotas: spec.day_quotas.iter().map(|(d, q)| (d.clone(), Quota(*q))).collect(),
            counterpart_quotas: spec.counterpart_quotas.iter().map(|(c, q)| (c.clone(), Quota(*q))).collect(),
        }
    }
}

impl From<&AgentDocument> for AgentSpec {
    fn from(doc: &AgentDocument) -> Self {
        AgentSpec {
            agent: doc.agent.clone(),
            preferences: doc.preferences.clone(),
            quota: doc.quota.map(|q| q.0),
            day_quotas: doc.day_quotas.iter().map(|(d, q)| (d.clone(), q.0)).collect(),
            counterpart_quotas: doc.counterpart_quotas.iter().map(|(c, q)| (c.clone(), q.0)).collect(),
        }
    }
}

impl From<&ScheduleProblem> for ScheduleDocument {
    fn from(p: &ScheduleProblem) -> Self {
        ScheduleDocument {
            workers: p.workers.clone(),
            firms: p.firms.clone(),
            days: p.days.clone(),
            worker_specs: p.worker_specs.iter().map(AgentDocument::from).collect(),
            firm_specs: p.firm_specs.iter().map(AgentDocument::from).collect(),
            contracts: p.contracts.clone(),
        }
    }
}

impl From<&ScheduleDocument> for ScheduleProblem {
    fn from(d: &ScheduleDocument) -> Self {
        ScheduleProblem {
            workers: d.workers.clone(),
            firms: d.firms.clone(),
            days: d.days.clone(),
            worker_specs: d.worker_specs.iter().map(AgentSpec::from).collect(),
            firm_specs: d.firm_specs.iter().map(AgentSpec::from).collect(),
            contracts: d.contracts.clone(),
        }
    }
}

impl From<&HoursAgent> for HoursAgentDocument {
    fn from(a: &HoursAgent) -> Self {
        HoursAgentDocument {
            agent: a.agent.clone(),
            ranking: a.ranking.iter().map(|(c, h)| (c.clone(), Quota(*h))).collect(),
            total: a.total.map(Quota),
        }
    }
}

impl From<&HoursAgentDocument> for HoursAgent {
    fn from(d: &HoursAgentDocument) -> Self {
        HoursAgent {
            agent: d.agent.clone(),
            ranking: d.ranking.iter().map(|(c, h)| (c.clone(), h.0)).collect(),
            total: d.total.map(|q| q.0),
        }
    }
}

impl From<&HoursEncoding> for HoursDocument {
    fn from(e: &HoursEncoding) -> Self {
        HoursDocument {
            workers: e.workers.iter().map(HoursAgentDocument::from).collect(),
            firms: e.firms.iter().map(HoursAgentDocument::from).collect(),
        }
    }
}

impl From<&HoursDocument> for HoursEncoding {
    fn from(d: &HoursDocument) -> Self {
        HoursEncoding {
            workers: d.workers.iter().map(HoursAgent::from).collect(),
            firms: d.firms.iter().map(HoursAgent::from).collect(),
        }
    }
}
