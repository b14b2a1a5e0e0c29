//! The JSON config file and `key=value` overrides.

use std::path::Path;

use ocrgen_core::dataset::{DatasetPlan, ExternalOptions};
use ocrgen_core::metrics::BleuConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub plan: DatasetPlan,
    pub metrics: BleuConfig,
    pub external: ExternalOptions,
}

impl Config {
    /// Reads `path` (or the defaults), applies dotted overrides, then the seed.
    pub fn load(
        path: Option<&Path>,
        overrides: &[String],
        seed: Option<u64>,
    ) -> Result<Self, CliError> {
        let mut value = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::data("io", format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::data("config", format!("{}: {e}", p.display())))?
            }
            None => Value::Object(Default::default()),
        };
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let mut cfg: Config =
            serde_json::from_value(value).map_err(|e| CliError::data("config", e.to_string()))?;
        if let Some(seed) = seed {
            cfg.plan.master_seed = seed;
        }
        Ok(cfg)
    }
}

/// Sets a dotted key. The value is parsed as JSON, falling back to a string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("override `{assignment}` is not key=value")))?;
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_owned()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::usage(format!("malformed key `{key}`")));
    }
    for part in &parts[..parts.len() - 1] {
        if !node.is_object() {
            *node = Value::Object(Default::default());
        }
        node = node
            .as_object_mut()
            .expect("object")
            .entry(part.to_string())
            .or_insert(Value::Null);
    }
    if !node.is_object() {
        *node = Value::Object(Default::default());
    }
    node.as_object_mut()
        .expect("object")
        .insert(parts[parts.len() - 1].to_owned(), parsed);
    Ok(())
}

/// Every leaf key of the default config with its JSON default.
pub fn key_listing() -> String {
    let mut lines = Vec::new();
    flatten(
        "",
        &serde_json::to_value(Config::default()).expect("config serializes"),
        &mut lines,
    );
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    lines
        .iter()
        .map(|(k, v)| format!("  {k:<width$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}
