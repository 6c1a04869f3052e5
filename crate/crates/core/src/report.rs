//! Report emission: CSV tables with a comment-safe metadata header, plus a
//! JSON mirror carrying the same metadata as a top-level field.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Run metadata stamped on every artifact (config hash, seeds, tool
/// version). Keys render in insertion order.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ReportMeta(pub Vec<(String, String)>);

impl ReportMeta {
    pub fn new() -> Self {
        ReportMeta(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    /// The `# key=value ...` first line of CSV artifacts.
    pub fn comment_line(&self) -> String {
        let body: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# {}", body.join(" "))
    }

    fn as_map(&self) -> BTreeMap<&str, &str> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect()
    }
}

/// Write a CSV artifact: metadata comment line, header row, then data rows.
pub fn write_csv<P, R>(path: P, meta: &ReportMeta, header: &[&str], rows: R) -> Result<()>
where
    P: AsRef<Path>,
    R: IntoIterator<Item = Vec<String>>,
{
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", meta.comment_line())?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Write the JSON mirror: `{"meta": {...}, "data": <payload>}`.
pub fn write_json<P: AsRef<Path>, T: Serialize>(path: P, meta: &ReportMeta, data: &T) -> Result<()> {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        meta: BTreeMap<&'a str, &'a str>,
        data: &'a T,
    }
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, &Envelope { meta: meta.as_map(), data })?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Render a float for CSV output. Uses the shortest representation that
/// round-trips, so reruns are byte-identical.
pub fn fmt_f64(value: f64) -> String {
    format!("{value}")
}

/// Render an optional float; absent values become the empty cell.
pub fn fmt_opt_f64(value: Option<f64>) -> String {
    value.map(fmt_f64).unwrap_or_default()
}
