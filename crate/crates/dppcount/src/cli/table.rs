//! Output tables and their CSV/JSON emitters.

use super::config::{Format, RunConfig};
use serde::Serialize;
use std::fmt::Write as _;

/// A finished result table: named columns and rows of optional numbers.  Missing or non-finite
/// values are empty cells in CSV and `null` in JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Column names.
    pub columns: Vec<&'static str>,
    /// Rows, each as long as `columns`.
    pub rows: Vec<Vec<Option<f64>>>,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    config: &'a RunConfig,
    columns: &'a [&'static str],
    rows: &'a [Vec<Option<f64>>],
}

impl Table {
    /// Empty table with the given columns.
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    /// Appends a row; non-finite entries become missing cells and `−0` is written as `0`.
    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row.into_iter().map(|v| v.filter(|x| x.is_finite()).map(|x| x + 0.0)).collect());
    }

    /// CSV text: `# config: <canonical json>`, the column header, then the rows.  Numbers use the
    /// shortest decimal representation that round-trips.
    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut out = format!("# config: {}\n{}\n", config.canonical_json(), self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.map_or_else(String::new, |x| format!("{x}"))).collect();
            writeln!(out, "{}", cells.join(",")).expect("writing to a String");
        }
        out
    }

    /// JSON text `{"config": …, "columns": […], "rows": [[…], …]}` followed by a newline.
    pub fn to_json(&self, config: &RunConfig) -> String {
        let doc = JsonDocument { config, columns: &self.columns, rows: &self.rows };
        let mut s = serde_json::to_string(&doc).expect("tables serialize");
        s.push('\n');
        s
    }

    /// Rendering in the configured format.
    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            Format::Csv => self.to_csv(config),
            Format::Json => self.to_json(config),
        }
    }
}

/// Extracts the embedded configuration from a CSV or JSON output file.
pub fn embedded_config(text: &str) -> Option<RunConfig> {
    if let Some(rest) = text.strip_prefix("# config: ") {
        let line = rest.lines().next()?;
        return serde_json::from_str(line).ok();
    }
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    serde_json::from_value(value.get("config")?.clone()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_agree_to_full_precision() {
        let config = RunConfig::example();
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Some(0.1 + 0.2), Some(1e-300)]);
        t.push(vec![Some(f64::NAN), None]);
        let csv = t.to_csv(&config);
        let json: serde_json::Value = serde_json::from_str(&t.to_json(&config)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "a,b");
        let parsed: Vec<f64> = lines[2].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(parsed, vec![0.1 + 0.2, 1e-300]);
        assert_eq!(json["rows"][0][0].as_f64().unwrap(), parsed[0]);
        assert_eq!(json["rows"][0][1].as_f64().unwrap(), parsed[1]);
        assert_eq!(lines[3], ",");
        assert!(json["rows"][1][0].is_null());
        assert_eq!(embedded_config(&csv).unwrap(), config);
        assert_eq!(embedded_config(&t.to_json(&config)).unwrap(), config);
    }
}
