//! Report writers. CSV uses '.' decimals, '\n' line endings, a header row
//! and 17 significant digits so doubles round-trip exactly; every output
//! embeds the config hash, tool version and timestamp (the timestamp on its
//! own line so CSV bodies stay byte-identical across runs).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub timestamp: String,
}

impl Meta {
    pub fn new(config_bytes: &[u8]) -> Meta {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(config_bytes);
        let digest = hasher.finalize();
        Meta {
            tool: "fracwell".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_sha256: hex_string(&digest),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// One CSV cell; floats are printed with 17 significant digits.
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Text(t) => t.clone(),
            Cell::Bool(b) => format!("{b}"),
        }
    }
}

pub fn write_csv(
    dir: &Path,
    name: &str,
    meta: &Meta,
    header: &[&str],
    rows: &[Vec<Cell>],
) -> Result<PathBuf, CliError> {
    let mut out = String::new();
    out.push_str(&format!(
        "# {} v{} config_sha256={}\n",
        meta.tool, meta.version, meta.config_sha256
    ));
    out.push_str(&format!("# timestamp={}\n", meta.timestamp));
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    let path = dir.join(name);
    fs::write(&path, out).map_err(|e| CliError::Io(format!("writing {path:?}: {e}")))?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let body = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serializing {name}: {e}")))?;
    fs::write(&path, body).map_err(|e| CliError::Io(format!("writing {path:?}: {e}")))?;
    Ok(path)
}
