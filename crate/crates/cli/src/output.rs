//! Report rendering: pretty JSON, one CSV row per check, gnuplot blocks.

use std::io::Write;
use std::path::Path;

use hardy_core::verify::VerificationReport;
use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;

/// Column order of the flat CSV.
pub const CSV_COLUMNS: [&str; 11] = [
    "check",
    "N",
    "p",
    "s",
    "body",
    "value",
    "bound",
    "margin",
    "sigma_margin",
    "passed",
    "seed",
];

/// One CSV line. Cells that do not apply stay empty.
#[derive(Debug, Clone, Default)]
pub struct Row {
    pub check: String,
    pub dim: Option<usize>,
    pub p: Option<f64>,
    pub s: Option<f64>,
    pub body: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub sigma_margin: Option<f64>,
    pub passed: bool,
    pub seed: Option<u64>,
}

impl From<&VerificationReport> for Row {
    fn from(r: &VerificationReport) -> Self {
        Row {
            check: r.check_name.clone(),
            dim: Some(r.params.dim),
            p: Some(r.params.p),
            s: Some(r.params.s),
            body: r.body.clone(),
            value: r.value,
            bound: r.bound,
            margin: r.margin,
            sigma_margin: r.sigma_margin,
            passed: r.passed,
            seed: Some(r.seed),
        }
    }
}

/// A titled two-column data block.
#[derive(Debug, Clone)]
pub struct PlotBlock {
    pub title: String,
    pub columns: (&'static str, &'static str),
    pub points: Vec<(f64, f64)>,
}

/// Everything one invocation emits.
#[derive(Debug, Clone)]
pub struct Document {
    pub json: Value,
    pub rows: Vec<Row>,
    pub plot: Vec<PlotBlock>,
}

impl Document {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    /// Reports as a JSON array; plot blocks are the traces when present,
    /// otherwise `(s, value)` per `(check, p)`.
    pub fn from_reports(reports: &[VerificationReport]) -> Result<Self, CliError> {
        let mut plot = Vec::new();
        for r in reports.iter().filter(|r| !r.series.is_empty()) {
            plot.push(PlotBlock {
                title: format!(
                    "{} N={} p={} s={} {}",
                    r.check_name, r.params.dim, r.params.p, r.params.s, r.inputs_digest
                ),
                columns: ("x", "value"),
                points: r.series.iter().map(|q| (q.x, q.value)).collect(),
            });
        }
        for r in reports.iter().filter(|r| r.series.is_empty()) {
            let title = format!("{} N={} p={} {}", r.check_name, r.params.dim, r.params.p, r.body);
            match plot.iter_mut().find(|b| b.title == title) {
                Some(b) => b.points.push((r.params.s, r.value)),
                None => plot.push(PlotBlock {
                    title,
                    columns: ("s", "value"),
                    points: vec![(r.params.s, r.value)],
                }),
            }
        }
        Ok(Document {
            json: to_value(reports)?,
            rows: reports.iter().map(Row::from).collect(),
            plot,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).map_err(|e| crate::error::config(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => csv_text(&self.rows),
        }
    }

    pub fn plot_text(&self) -> String {
        let mut out = String::new();
        for (i, b) in self.plot.iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            out.push_str(&format!("# {}\n# {} {}\n", b.title, b.columns.0, b.columns.1));
            for (x, y) in &b.points {
                out.push_str(&format!("{} {}\n", num(*x), num(*y)));
            }
        }
        out
    }
}

pub fn to_value<T: serde::Serialize + ?Sized>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| crate::error::config(format!("cannot serialize the report: {e}")))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(rows: &[Row]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| crate::error::config(format!("cannot write CSV: {e}"));
    w.write_record(CSV_COLUMNS).map_err(err)?;
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.check.clone(),
            r.dim.map(|n| n.to_string()).unwrap_or_default(),
            opt(r.p),
            opt(r.s),
            r.body.clone(),
            num(r.value),
            num(r.bound),
            num(r.margin),
            opt(r.sigma_margin),
            r.passed.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::error::config(format!("cannot write CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| crate::error::config(e.to_string()))
}

/// Writes `text` to `path`, or to stdout without one.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: String::from("<stdout>"),
                    source,
                })
        }
    }
}
