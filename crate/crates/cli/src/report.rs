use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

/// Column-oriented result table. The CSV body is a pure function of the
/// study configuration and seed; timestamps live only in the JSON sidecar.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "columns": self.columns,
            "rows": self.rows,
        })
    }
}

pub fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Provenance record emitted as the JSON sidecar next to every table.
#[derive(Serialize)]
pub struct ResultRecord {
    pub study: String,
    pub parameters: serde_json::Value,
    /// Effective merged configuration, reproducing the run verbatim.
    pub config: String,
    pub seed: u64,
    pub version: &'static str,
    pub created_unix_ms: u128,
    pub summary: serde_json::Value,
}

impl ResultRecord {
    pub fn new(study: &str, parameters: serde_json::Value, seed: u64) -> ResultRecord {
        ResultRecord {
            study: study.to_string(),
            parameters,
            config: String::new(),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            created_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0),
            summary: serde_json::Value::Null,
        }
    }

    pub fn with_config(mut self, cfg: &crate::config::StudyConfig) -> ResultRecord {
        self.config = cfg.emit().unwrap_or_default();
        self
    }
}

/// Write the table to `out` (or stdout) in the requested format and, when a
/// path is given, a `<path>.json` provenance sidecar.
pub fn emit(out: Option<&Path>, format: &str, table: &Table, record: &ResultRecord) -> Result<()> {
    let body = match format {
        "json" => {
            let mut doc = table.to_json();
            doc["parameters"] = record.parameters.clone();
            doc["seed"] = record.seed.into();
            doc["summary"] = record.summary.clone();
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        _ => table.to_csv(),
    };
    match out {
        None => {
            print!("{body}");
        }
        Some(path) => {
            std::fs::write(path, &body)
                .with_context(|| format!("writing {}", path.display()))?;
            let sidecar = path.with_file_name(format!(
                "{}.json",
                path.file_name().unwrap_or_default().to_string_lossy()
            ));
            let json = serde_json::to_string_pretty(record)? + "\n";
            std::fs::write(&sidecar, json)
                .with_context(|| format!("writing {}", sidecar.display()))?;
        }
    }
    Ok(())
}
