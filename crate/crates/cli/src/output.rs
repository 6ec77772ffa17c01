//! Rendering reports as human text, JSON or CSV.
//!
//! JSON floats are written with 17 significant digits so every value
//! round-trips exactly. CSV files start with `#` metadata lines, which
//! gnuplot and most readers skip.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// Float in the fixed 17-significant-digit form used by every output.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Short form for human tables.
pub fn short(v: f64) -> String {
    format!("{v:.3e}")
}

/// Pretty-printed JSON with every float at 17 significant digits.
struct Sig17(PrettyFormatter<'static>);

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(io::Error::other)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(io::Error::other)
}

/// A CSV table: column names and rows of already-formatted cells.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a command produces.
pub trait Report: Serialize {
    fn human(&self) -> String;
    fn table(&self) -> Table;
    /// Summary values written as `# key: value` lines above the CSV table.
    fn notes(&self) -> Vec<(&'static str, String)> {
        Vec::new()
    }
}

pub struct OutputOptions {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub meta: bool,
    pub timestamp: bool,
    pub command_line: String,
}

impl OutputOptions {
    fn meta_pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("tool", format!("unclab {}", env!("CARGO_PKG_VERSION"))),
            ("command", self.command_line.clone()),
            ("units", "hbar = m = 1".to_string()),
        ];
        if self.timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            out.push(("generated_unix", secs.to_string()));
        }
        out
    }
}

pub fn render<R: Report>(report: &R, opts: &OutputOptions) -> io::Result<String> {
    match opts.format {
        Format::Human => Ok(report.human()),
        Format::Json => {
            let mut value = serde_json::to_value(report).map_err(io::Error::other)?;
            if let (true, Value::Object(map)) = (opts.meta, &mut value) {
                let meta: serde_json::Map<String, Value> =
                    opts.meta_pairs().into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect();
                map.insert("meta".to_string(), Value::Object(meta));
            }
            to_json_string(&value)
        }
        Format::Csv => {
            let mut head = String::new();
            if opts.meta {
                for (k, v) in opts.meta_pairs() {
                    head.push_str(&format!("# {k}: {v}\n"));
                }
            }
            for (k, v) in report.notes() {
                head.push_str(&format!("# {k}: {v}\n"));
            }
            let table = report.table();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).map_err(io::Error::other)?;
            for row in &table.rows {
                w.write_record(row).map_err(io::Error::other)?;
            }
            let body = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
            Ok(head + &String::from_utf8(body).map_err(io::Error::other)?)
        }
    }
}

pub fn emit<R: Report>(report: &R, opts: &OutputOptions) -> io::Result<()> {
    let text = render(report, opts)?;
    match &opts.path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = to_json_string(&serde_json::json!({ "u": 1.0f64 / 3.0, "n": 3 })).unwrap();
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
        assert!(s.contains("\"n\": 3"), "{s}");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["u"].as_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn number_cells() {
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(num(f64::NAN), "NaN");
    }
}
