//! CSV tables and `key = value` summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Result, RunError};

/// Full double precision (17 significant digits).
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_f64(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| RunError::Csv(e.into_error().into()))
    }
}

/// Ordered `key = value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    entries: Vec<(String, String)>,
}

impl Summary {
    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.entries.push((key.into(), format_f64(value)));
        self
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.to_owned(), v.to_owned()))
            .collect();
        Self { entries }
    }
}

/// Everything a scenario produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub stem: String,
    /// `(file stem, table)`; written as `<file stem>.csv`.
    pub tables: Vec<(String, Table)>,
    pub summary: Summary,
}

impl Artifacts {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Writes every table and `<stem>.summary.txt` into `dir`, returning the
    /// paths in write order.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| RunError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut written = Vec::new();
        for (name, table) in &self.tables {
            let path = dir.join(format!("{name}.csv"));
            fs::write(&path, table.to_csv()?).map_err(io(&path))?;
            written.push(path);
        }
        let path = dir.join(format!("{}.summary.txt", self.stem));
        fs::write(&path, self.summary.render()).map_err(io(&path))?;
        written.push(path);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(format_f64(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "flag"]);
        t.push(vec![1.5.into(), "true".into()]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "a,flag\n1.5000000000000000e0,true\n");
        assert_eq!(t.column("a"), Some(vec![1.5]));
        assert_eq!(t.column("flag"), None);
    }

    #[test]
    fn summary_round_trip() {
        let mut s = Summary::default();
        s.num("x", 2.25).text("label", "ok");
        let back = Summary::parse(&s.render());
        assert_eq!(back, s);
        assert_eq!(back.get_f64("x"), Some(2.25));
    }
}
