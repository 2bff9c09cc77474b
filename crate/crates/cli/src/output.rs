//! Output files: a JSON header followed by CSV rows, or a single JSON document.
//!
//! In CSV files the header is written as `# `-prefixed lines ahead of the
//! column row, so `pandas.read_csv(path, comment="#")` reads the data
//! directly and `dicke --config path` reruns the command.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::{CliError, CliResult};

pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            name,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn records(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect();
                Value::Object(obj)
            })
            .collect()
    }
}

/// Header recorded with every output.
pub fn header(command: &str, config: &impl Serialize, extra: Map<String, Value>) -> CliResult<Value> {
    let config = serde_json::to_value(config).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut h = json!({
        "tool": "dicke",
        "version": dicke_core::VERSION,
        "command": command,
        "units": {
            "length": "lambda0",
            "rate": "gamma0",
            "wavevector": "k0 = 2*pi/lambda0",
        },
        "config": config,
    });
    if let Value::Object(map) = &mut h {
        map.extend(extra);
    }
    Ok(h)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

fn write_csv_block(w: &mut dyn Write, header: &Value, table: &Table) -> CliResult<()> {
    let text = serde_json::to_string_pretty(header).map_err(|e| CliError::Numerical(e.to_string()))?;
    for line in text.lines() {
        writeln!(w, "# {line}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&table.columns)?;
    for row in &table.rows {
        csv.write_record(row.iter().map(cell))?;
    }
    csv.flush()?;
    Ok(())
}

/// Companion path `<stem>.<name>.<ext>` next to `primary`.
pub fn companion_path(primary: &Path, name: &str) -> PathBuf {
    let stem = primary.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = primary.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    primary.with_file_name(format!("{stem}.{name}.{ext}"))
}

fn open(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes `tables` with `header`. In CSV mode the first table goes to `out`
/// and the others to companion files (or consecutively to stdout); in JSON
/// mode everything goes into one document keyed by table name.
pub fn write(out: Option<&Path>, format: Format, header: &Value, tables: &[Table]) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    match format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("header".into(), header.clone());
            for t in tables {
                doc.insert(t.name.into(), Value::Array(t.records()));
            }
            let mut w = open(out)?;
            serde_json::to_writer_pretty(&mut w, &Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(w)?;
            w.flush()?;
            written.extend(out.map(Path::to_path_buf));
        }
        Format::Csv => {
            for (i, t) in tables.iter().enumerate() {
                let target = match (out, i) {
                    (Some(p), 0) => Some(p.to_path_buf()),
                    (Some(p), _) => Some(companion_path(p, t.name)),
                    (None, _) => None,
                };
                let mut w = open(target.as_deref())?;
                write_csv_block(&mut w, header, t)?;
                w.flush()?;
                written.extend(target);
            }
        }
    }
    Ok(written)
}

/// Config from a JSON file or from the header of a previous output file.
pub fn read_config(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    let json_text = if trimmed.starts_with('#') {
        text.lines()
            .map_while(|l| l.strip_prefix('#'))
            .map(|l| l.strip_prefix(' ').unwrap_or(l))
            .collect::<Vec<_>>()
            .join("\n")
    } else {
        text
    };
    let value: Value = serde_json::from_str(&json_text)
        .map_err(|e| CliError::validation(format!("config {}: {e}", path.display())))?;
    // a full output header or JSON output document carries the config inside;
    // its `out` is dropped so a rerun never overwrites the file it came from
    let inner = value
        .get("header")
        .and_then(|h| h.get("config"))
        .or_else(|| value.get("config"))
        .cloned();
    Ok(match inner {
        Some(mut config) => {
            if let Some(map) = config.as_object_mut() {
                map.remove("out");
            }
            config
        }
        None => value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let h = header("scan", &json!({"n": 3, "out": "t.csv"}), Map::new()).unwrap();
        let mut t = Table::new("rows", vec!["a", "b"]);
        t.push(vec![json!(0.1f64 + 0.2f64), json!("x,y")]);
        write(Some(&path), Format::Csv, &h, &[t]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("0.30000000000000004"));
        assert!(text.contains("\"x,y\""));
        assert_eq!(read_config(&path).unwrap(), json!({"n": 3}));
    }

    #[test]
    fn companion_naming() {
        assert_eq!(
            companion_path(Path::new("/tmp/spec.csv"), "variance"),
            PathBuf::from("/tmp/spec.variance.csv")
        );
    }
}
