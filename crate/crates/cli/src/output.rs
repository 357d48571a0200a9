use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

/// A table with a header row and a units row.
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub units: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Table {
            title: None,
            headers: columns.iter().map(|c| c.0.to_string()).collect(),
            units: columns.iter().map(|c| c.1.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: &str) -> Self {
        self.title = Some(title.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut impl Write, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                w.write_record(&self.units)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
            Format::Table => {
                if let Some(t) = &self.title {
                    writeln!(out, "{t}")?;
                }
                let n = self.headers.len();
                let units: Vec<String> = self.units.iter().map(|u| format!("[{u}]")).collect();
                let mut width = vec![0usize; n];
                for r in std::iter::once(&self.headers).chain(std::iter::once(&units)).chain(&self.rows) {
                    for (i, c) in r.iter().enumerate().take(n) {
                        width[i] = width[i].max(c.chars().count());
                    }
                }
                let line = |out: &mut dyn Write, r: &[String]| -> io::Result<()> {
                    let cells: Vec<String> =
                        r.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect();
                    writeln!(out, "{}", cells.join("  ").trim_end())
                };
                line(out, &self.headers)?;
                line(out, &units)?;
                for r in &self.rows {
                    line(out, r)?;
                }
                writeln!(out)
            }
        }
    }
}

pub fn num(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.4e}")
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| "-".into())
}

/// Writes a two-column trace as CSV.
pub fn write_trace(path: &std::path::Path, columns: [&str; 2], rows: &[[f64; 2]]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(columns)?;
    for r in rows {
        w.write_record([format!("{:.9e}", r[0]), format!("{:.9e}", r[1])])?;
    }
    w.flush()
}
