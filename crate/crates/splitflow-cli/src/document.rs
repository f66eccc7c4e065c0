//! Result documents and their JSON/text rendering.
//!
//! Every rational is serialized as an exact `num/den` string and maps keep
//! sorted key order, so identical inputs always produce identical bytes.
//! Timing is opt-in to keep the default output reproducible.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use splitflow::approx::SplittableFlow;
use splitflow::cuts::CutValue;
use splitflow::{format_rational, serialize_instance, Instance, Rational};

pub const DOCUMENT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct ResultDocument {
    pub version: &'static str,
    pub command: &'static str,
    pub mode: String,
    pub instance_digest: String,
    pub parameters: Value,
    pub outputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl ResultDocument {
    pub fn new(
        command: &'static str,
        mode: impl Into<String>,
        instance: &Instance,
        parameters: Value,
        outputs: Value,
    ) -> Self {
        ResultDocument {
            version: DOCUMENT_VERSION,
            command,
            mode: mode.into(),
            instance_digest: instance_digest(instance),
            parameters,
            outputs,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }

    /// Compact human-readable form: one `key: value` line per output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {} --mode {}\n", self.command, self.mode));
        out.push_str(&format!("instance: {}\n", self.instance_digest));
        if let Value::Object(map) = &self.outputs {
            render_map(&mut out, map, 0);
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("timing_ms: {ms}\n"));
        }
        out
    }
}

fn render_map(out: &mut String, map: &Map<String, Value>, depth: usize) {
    for (key, value) in map {
        let pad = "  ".repeat(depth);
        match value {
            Value::Object(inner) => {
                out.push_str(&format!("{pad}{key}:\n"));
                render_map(out, inner, depth + 1);
            }
            Value::Array(items) if key == "paths" => {
                out.push_str(&format!("{pad}{key}:\n"));
                for item in items {
                    out.push_str(&format!("{}- {}\n", "  ".repeat(depth + 1), compact(item)));
                }
            }
            other => out.push_str(&format!("{pad}{key}: {}\n", compact(other))),
        }
    }
}

fn compact(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn instance_digest(inst: &Instance) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize_instance(inst).as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

pub fn rational_value(r: Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn cut_json(cut: &CutValue) -> Value {
    json!({
        "value": rational_value(cut.value),
        "members": cut.members,
        // Edge ids are 1-based in documents, matching file line order.
        "boundary_edges": cut.boundary.iter().map(|e| e + 1).collect::<Vec<_>>(),
        "packing": cut
            .boundary
            .iter()
            .zip(&cut.packing)
            .map(|(e, n)| json!([e + 1, n]))
            .collect::<Vec<_>>(),
    })
}

pub fn flow_json(flow: &SplittableFlow) -> Value {
    let uniformity = match flow.uniformity {
        splitflow::Uniformity::None => "none",
        splitflow::Uniformity::Bi => "bi",
        splitflow::Uniformity::Total => "total",
    };
    json!({
        "uniformity": uniformity,
        "splits": [flow.splits.0, flow.splits.1],
        "total": rational_value(flow.total_value()),
        "paths": flow
            .paths
            .iter()
            .map(|p| {
                json!({
                    "commodity": p.commodity,
                    "value": rational_value(p.value),
                    "vertices": p.path.vertices,
                    "edges": p.path.edges.iter().map(|e| e + 1).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}
