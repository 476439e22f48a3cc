use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::args::{Format, OutputArgs};
use crate::CliError;

pub type Row = Map<String, Value>;

/// Result of one command, before rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Row,
    pub rows: Vec<Row>,
    pub residuals: Row,
    pub slopes: Row,
    /// Human-readable form printed when writing to a terminal-style stdout.
    pub text: Option<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            params: Row::new(),
            rows: Vec::new(),
            residuals: Row::new(),
            slopes: Row::new(),
            text: None,
        }
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "command": self.command,
            "params": self.params,
            "rows": self.rows,
            "diagnostics": { "residuals": self.residuals, "slopes": self.slopes },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut header: Vec<&str> = Vec::new();
        for row in &self.rows {
            for key in row.keys() {
                if !header.contains(&key.as_str()) {
                    header.push(key);
                }
            }
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Io(e.to_string());
        writer.write_record(&header).map_err(fail)?;
        for row in &self.rows {
            let cells = header.iter().map(|k| match row.get(*k) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            });
            writer.write_record(cells).map_err(fail)?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields is UTF-8"))
    }
}

pub fn put_complex(row: &mut Row, key: &str, z: Complex64) {
    row.insert(format!("{key}_re"), json!(z.re));
    row.insert(format!("{key}_im"), json!(z.im));
}

pub fn complex_list(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|z| json!([z.re, z.im])).collect())
}

fn resolved_format(out: &OutputArgs) -> Format {
    out.format
        .unwrap_or_else(|| match out.output.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        })
}

/// Renders completely, then writes via a temporary file in the target
/// directory and a rename, so a failed run leaves no partial file.
pub fn emit(report: &Report, out: &OutputArgs) -> Result<(), CliError> {
    let body = match out.output {
        None if out.format.is_none() && report.text.is_some() => report.text.clone().unwrap(),
        _ => match resolved_format(out) {
            Format::Json => report.to_json(),
            Format::Csv => report.to_csv()?,
        },
    };
    match &out.output {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
            stdout.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        Some(path) => write_atomic(path, body.as_bytes()),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
