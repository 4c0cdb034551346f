use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::LoadedConfig;
use crate::CliError;

/// 17 significant digits, exponent form, dot decimal separator.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table written below a `#` comment line.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells.join(","));
    }

    pub fn push_numbers(&mut self, values: &[f64]) {
        self.push(values.iter().map(|&v| fmt(v)).collect());
    }

    pub fn render(&self, comment: &str) -> String {
        let mut out = format!("{comment}\n{}\n", self.columns.join(","));
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}

/// Owns the output directory and records every file written.
pub struct Writer<'a> {
    dir: PathBuf,
    loaded: &'a LoadedConfig,
    pub written: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    pub fn new(dir: &Path, loaded: &'a LoadedConfig) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            loaded,
            written: Vec::new(),
        })
    }

    fn put(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(format!("{}{name}", self.loaded.config.outputs.prefix));
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        log::info!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }

    pub fn table(&mut self, name: &str, table: &Table, extra: &[(&str, String)]) -> Result<(), CliError> {
        let text = table.render(&self.loaded.header(extra));
        self.put(name, &text)
    }

    /// Prepends the comment line to an already rendered CSV body.
    pub fn raw_csv(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let text = format!("{}\n{body}", self.loaded.header(&[]));
        self.put(name, &text)
    }

    /// Writes `body` as a JSON object with an added `header` field holding
    /// the config hash and seed.
    pub fn json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<(), CliError> {
        let mut value = serde_json::to_value(body).expect("report types serialize");
        let header = json!({
            "config_hash": self.loaded.hash,
            "seed": self.loaded.seed(),
        });
        match value {
            Value::Object(ref mut map) => {
                map.insert("header".into(), header);
            }
            other => value = json!({ "header": header, "body": other }),
        }
        let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
        text.push('\n');
        self.put(name, &text)
    }
}
