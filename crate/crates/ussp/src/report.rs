//! Reports and their text, JSON and CSV renderings.
//!
//! Rendering is a pure function of the report: no clocks, no hash-ordered
//! containers.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::instance::Options;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub kind: String,
    pub options: Options,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    pub witnesses: Vec<String>,
    /// Only filled in when timing is requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str, kind: &str, options: &Options) -> Self {
        Report {
            command: command.to_string(),
            kind: kind.to_string(),
            options: options.clone(),
            verdicts: Vec::new(),
            tables: Vec::new(),
            witnesses: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn verdict(&mut self, name: impl Into<String>, holds: bool) {
        self.verdicts.push(Verdict { name: name.into(), holds });
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn holds(&self, name: &str) -> Option<bool> {
        self.verdicts.iter().find(|v| v.name == name).map(|v| v.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

pub fn render_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Text => render_text(r).into_bytes(),
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(r).expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => render_csv(r),
    }
}

fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} ({})", r.command, r.kind);
    for v in &r.verdicts {
        let _ = writeln!(s, "  [{}] {}", if v.holds { "pass" } else { "FAIL" }, v.name);
    }
    for t in &r.tables {
        let _ = writeln!(s, "\n{}", t.name);
        let mut width: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
        for row in &t.rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&width).map(|(c, &w)| format!("{c:<w$}")).collect();
            format!("  {}", parts.join("  ").trim_end())
        };
        let _ = writeln!(s, "{}", line(&t.columns));
        for row in &t.rows {
            let _ = writeln!(s, "{}", line(row));
        }
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(s, "\nwitnesses");
        for w in &r.witnesses {
            let _ = writeln!(s, "  {w}");
        }
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(s, "\nelapsed: {ms} ms");
    }
    s
}

/// One block per table, separated by blank lines: a header row naming the
/// table and its columns, then one record per row. Verdicts form the first
/// block.
fn render_csv(r: &Report) -> Vec<u8> {
    let mut out = Vec::new();
    let mut blocks: Vec<Table> = Vec::new();
    let mut verdicts = Table::new("verdicts", &["name", "holds"]);
    for v in &r.verdicts {
        verdicts.push(vec![v.name.clone(), v.holds.to_string()]);
    }
    blocks.push(verdicts);
    blocks.extend(r.tables.iter().cloned());
    for (i, t) in blocks.iter().enumerate() {
        if i > 0 {
            out.push(b'\n');
        }
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let mut header = vec!["table".to_string()];
        header.extend(t.columns.iter().cloned());
        w.write_record(&header).expect("in-memory csv");
        for row in &t.rows {
            let mut rec = vec![t.name.clone()];
            rec.extend(row.iter().cloned());
            w.write_record(&rec).expect("in-memory csv");
        }
        out.extend(w.into_inner().expect("in-memory csv"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("pages", "couple", &Options::default());
        r.verdict("d∘d = *", true);
        let mut t = Table::new("page", &["r", "p", "q", "term"]);
        t.push(vec!["1".into(), "0".into(), "0".into(), "Z/2, x".into()]);
        r.tables.push(t);
        r.witness("none");
        r
    }

    #[test]
    fn renders_are_stable() {
        for f in [Format::Text, Format::Json, Format::Csv] {
            assert_eq!(render_report(&sample(), f), render_report(&sample(), f));
        }
    }

    #[test]
    fn json_round_trips() {
        let back: Report = serde_json::from_slice(&render_report(&sample(), Format::Json)).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn csv_quotes_cells_with_commas() {
        let s = String::from_utf8(render_report(&sample(), Format::Csv)).unwrap();
        assert!(s.contains("page,1,0,0,\"Z/2, x\""), "{s}");
        assert!(s.starts_with("table,name,holds\nverdicts,d∘d = *,true\n"));
    }
}
