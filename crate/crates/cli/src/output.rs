//! Output helpers: every artifact embeds the run configuration and the
//! artifact version so a run can be reproduced from its own files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn run_config(subcommand: &str, fields: Value) -> Value {
    json!({
        "artifact_version": ARTIFACT_VERSION,
        "subcommand": subcommand,
        "params": fields,
    })
}

/// Floats in CSV payloads carry 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn write_csv(
    path: &Path,
    config: &Value,
    header: &str,
    rows: impl Iterator<Item = String>,
) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    writeln!(f, "# config: {config}")?;
    writeln!(f, "{header}")?;
    for row in rows {
        writeln!(f, "{row}")?;
    }
    Ok(())
}

pub fn write_json(path: &Path, value: &Value) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    writeln!(f, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

pub fn write_jsonl(path: &Path, values: &[Value]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    for v in values {
        writeln!(f, "{v}")?;
    }
    Ok(())
}

/// Cache directory from SCARGRAPH_CACHE_DIR, when configured.
pub fn cache_dir() -> Option<std::path::PathBuf> {
    std::env::var_os("SCARGRAPH_CACHE_DIR").map(std::path::PathBuf::from)
}

/// Load a cached JSON value by key, if caching is enabled and present.
pub fn cache_load(key: &str) -> Option<Value> {
    let path = cache_dir()?.join(format!("{key}.json"));
    let text = fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

/// Store a JSON value under a cache key (best effort).
pub fn cache_store(key: &str, value: &Value) {
    if let Some(dir) = cache_dir() {
        if fs::create_dir_all(&dir).is_ok() {
            let _ = fs::write(dir.join(format!("{key}.json")), value.to_string());
        }
    }
}
