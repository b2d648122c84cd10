//! Table emission: CSV with a `#`-prefixed metadata header, or JSON behind
//! `--format json`. The metadata echoes the resolved run parameters (never a
//! timestamp), so re-running a command reproduces its output byte-exactly.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One output table: metadata key/values, column names, rows of cells.
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Extra free-form comment lines appended after the metadata block.
    pub comments: Vec<String>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            meta: vec![(
                "version".into(),
                env!("CARGO_PKG_VERSION").to_string(),
            )],
            columns,
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn comment(&mut self, line: impl ToString) {
        self.comments.push(line.to_string());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                for (k, v) in &self.meta {
                    out.push_str(&format!("# {k} = {v}\n"));
                }
                for line in &self.comments {
                    out.push_str(&format!("# {line}\n"));
                }
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let meta: serde_json::Map<String, serde_json::Value> = self
                    .meta
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: serde_json::Map<String, serde_json::Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, cell)| {
                                let value = cell
                                    .parse::<f64>()
                                    .ok()
                                    .filter(|v| v.is_finite())
                                    .map(serde_json::Value::from)
                                    .unwrap_or_else(|| {
                                        serde_json::Value::String(cell.clone())
                                    });
                                (c.to_string(), value)
                            })
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({
                    "meta": meta,
                    "comments": self.comments,
                    "rows": rows,
                });
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
            }
        }
    }

    /// Write to the given file, or standard output when `out` is None.
    pub fn emit(&self, out: &Option<PathBuf>, format: Format) -> std::io::Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => fs::write(path, text),
            None => std::io::stdout().write_all(text.as_bytes()),
        }
    }
}

pub fn fmt_g(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.12e}")
    }
}
