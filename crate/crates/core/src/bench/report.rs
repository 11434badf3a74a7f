use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "text" | "table" => Ok(ReportFormat::Text),
            other => Err(Error::param(format!("unknown format '{other}' (csv or text)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Output {
    Stdout,
    Path(PathBuf),
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "-" => Output::Stdout,
            p => Output::Path(PathBuf::from(p)),
        })
    }
}

/// A rendered report: `# key=value` comments, a header and string cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub comments: Vec<(String, String)>,
}

impl ReportTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn comment(&mut self, key: impl Into<String>, value: impl ToString) {
        self.comments.push((key.into(), value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn write_report<W: Write>(report: &ReportTable, format: ReportFormat, mut out: W) -> std::io::Result<()> {
    for (k, v) in &report.comments {
        writeln!(out, "# {k}={v}")?;
    }
    match format {
        ReportFormat::Csv => {
            writeln!(out, "{}", report.columns.join(","))?;
            for row in &report.rows {
                writeln!(out, "{}", row.join(","))?;
            }
        }
        ReportFormat::Text => {
            let widths: Vec<usize> = (0..report.columns.len())
                .map(|c| {
                    report
                        .rows
                        .iter()
                        .map(|r| r[c].len())
                        .chain([report.columns[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&report.columns))?;
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            writeln!(out, "{}", rule.join("  "))?;
            for row in &report.rows {
                writeln!(out, "{}", line(row))?;
            }
        }
    }
    out.flush()
}

pub fn emit_report(report: &ReportTable, format: ReportFormat, output: &Output) -> Result<()> {
    match output {
        Output::Stdout => {
            let stdout = std::io::stdout();
            write_report(report, format, stdout.lock()).map_err(|e| Error::io("<stdout>", e))
        }
        Output::Path(path) => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            write_report(report, format, BufWriter::new(file)).map_err(|e| Error::io(path, e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only() {
        let r = ReportTable::new(&["method", "n", "mae_pct"]);
        let mut buf = Vec::new();
        write_report(&r, ReportFormat::Csv, &mut buf).unwrap();
        assert_eq!(buf, b"method,n,mae_pct\n");
    }

    #[test]
    fn text_alignment() {
        let mut r = ReportTable::new(&["a", "value"]);
        r.push_row(vec!["long".into(), "1".into()]);
        let mut buf = Vec::new();
        write_report(&r, ReportFormat::Text, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "   a  value\n----  -----\nlong      1\n");
    }

    #[test]
    fn io_error_has_path() {
        let r = ReportTable::new(&["a"]);
        let err = emit_report(&r, ReportFormat::Csv, &Output::Path("/nonexistent/dir/x.csv".into())).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
    }
}
