//! Long-format CSV and JSON-lines writers.
//!
//! Floats are written as `{:.16e}` (17 significant digits, exact round
//! trip). Missing or non-finite values become an empty CSV cell or JSON
//! `null`. Lines end in LF.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use firmsim_core::{col, DayRecord, SeriesRow, OBSERVABLE_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "jsonl",
        }
    }
}

/// A single cell of an exported row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Text(String),
    Float(Option<f64>),
}

pub fn format_float(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Float(v) => v.and_then(format_float).unwrap_or_default(),
        }
    }

    fn json_value(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings always serialize"),
            Cell::Float(v) => v.and_then(format_float).unwrap_or_else(|| "null".into()),
        }
    }
}

/// Writes rows under a fixed header in either format.
pub struct TableWriter<W: Write> {
    format: Format,
    header: Vec<String>,
    csv: Option<csv::Writer<W>>,
    json: Option<W>,
}

impl<W: Write> TableWriter<W> {
    pub fn new(out: W, format: Format, header: Vec<String>) -> io::Result<Self> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(&header)?;
                Ok(TableWriter { format, header, csv: Some(w), json: None })
            }
            Format::Json => Ok(TableWriter { format, header, csv: None, json: Some(out) }),
        }
    }

    pub fn write_row(&mut self, cells: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.header.len());
        match self.format {
            Format::Csv => {
                let w = self.csv.as_mut().expect("csv writer");
                w.write_record(cells.iter().map(Cell::csv_field))?;
            }
            Format::Json => {
                let w = self.json.as_mut().expect("json writer");
                let mut line = String::from("{");
                for (k, (name, cell)) in self.header.iter().zip(cells).enumerate() {
                    if k > 0 {
                        line.push(',');
                    }
                    line.push_str(&serde_json::to_string(name).expect("strings always serialize"));
                    line.push(':');
                    line.push_str(&cell.json_value());
                }
                line.push_str("}\n");
                w.write_all(line.as_bytes())?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> io::Result<()> {
        if let Some(mut w) = self.csv {
            w.flush()?;
        }
        if let Some(mut w) = self.json {
            w.flush()?;
        }
        Ok(())
    }
}

pub fn create(path: &Path) -> io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Observables written before the two cumulated-profitability columns.
const LEADING: usize = col::WRITTEN_WARNINGS + 1;

pub fn series_header() -> Vec<String> {
    let mut h: Vec<String> = ["t", "scenario", "replicate"].map(String::from).to_vec();
    h.extend(OBSERVABLE_NAMES[..LEADING].iter().map(|s| s.to_string()));
    h.push("cumulated_profitability".into());
    h.push("relative_profitability".into());
    h.extend(OBSERVABLE_NAMES[LEADING..].iter().map(|s| s.to_string()));
    h
}

/// One run or aggregate ready for export.
pub struct SeriesExport<'a> {
    pub scenario: &'a str,
    /// `None` marks the replicate mean.
    pub replicate: Option<u32>,
    pub rows: &'a [SeriesRow],
    pub cumulated: &'a [f64],
    pub relative: Option<&'a [f64]>,
}

impl SeriesExport<'_> {
    pub fn write_to<W: Write>(&self, table: &mut TableWriter<W>) -> io::Result<()> {
        let replicate = match self.replicate {
            Some(k) => Cell::Int(u64::from(k)),
            None => Cell::Text("mean".into()),
        };
        for (k, row) in self.rows.iter().enumerate() {
            let mut cells = vec![Cell::Int(u64::from(row.t)), Cell::Text(self.scenario.into()), replicate.clone()];
            cells.extend(row.values[..LEADING].iter().map(|&v| Cell::Float(v)));
            cells.push(Cell::Float(self.cumulated.get(k).copied()));
            cells.push(Cell::Float(self.relative.and_then(|r| r.get(k).copied())));
            cells.extend(row.values[LEADING..].iter().map(|&v| Cell::Float(v)));
            table.write_row(&cells)?;
        }
        Ok(())
    }
}

pub fn write_series_file(path: &Path, format: Format, exports: &[SeriesExport<'_>]) -> io::Result<()> {
    let mut table = TableWriter::new(create(path)?, format, series_header())?;
    for e in exports {
        e.write_to(&mut table)?;
    }
    table.finish()
}

pub const AGENT_HEADER: [&str; 13] = [
    "t",
    "scenario",
    "replicate",
    "id",
    "type",
    "shirk",
    "coop",
    "individual",
    "satisfaction",
    "beta",
    "output",
    "reward",
    "interactions",
];

/// Per-agent traces of one replicate; days without snapshots are skipped.
pub fn write_agent_rows<W: Write>(
    table: &mut TableWriter<W>,
    scenario: &str,
    replicate: u32,
    records: &[DayRecord],
) -> io::Result<()> {
    for r in records {
        for a in r.agents.iter().flatten() {
            table.write_row(&[
                Cell::Int(u64::from(r.t)),
                Cell::Text(scenario.into()),
                Cell::Int(u64::from(replicate)),
                Cell::Int(a.id as u64),
                Cell::Text(a.vtype.label().into()),
                Cell::Float(Some(a.alloc.shirk)),
                Cell::Float(Some(a.alloc.coop)),
                Cell::Float(Some(a.alloc.individual)),
                Cell::Float(Some(a.satisfaction)),
                Cell::Float(Some(a.beta)),
                Cell::Float(Some(a.output)),
                Cell::Float(Some(a.reward)),
                Cell::Int(u64::from(a.interactions)),
            ])?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(format: Format, cells: &[Cell]) -> String {
        let header: Vec<String> = (0..cells.len()).map(|k| format!("c{k}")).collect();
        let mut buf = Vec::new();
        let mut t = TableWriter::new(&mut buf, format, header).unwrap();
        t.write_row(cells).unwrap();
        t.finish().unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.1).unwrap(), "1.0000000000000001e-1");
        assert_eq!(format_float(1.0).unwrap(), "1.0000000000000000e0");
        assert_eq!(format_float(f64::NAN), None);
        for x in [0.1, 1.0 / 3.0, 2.5e-300, -7.25, f64::MAX] {
            assert_eq!(format_float(x).unwrap().parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_and_json_rows() {
        let cells = [Cell::Int(3), Cell::Text("a,b".into()), Cell::Float(None), Cell::Float(Some(0.5))];
        assert_eq!(render(Format::Csv, &cells), "c0,c1,c2,c3\n3,\"a,b\",,5.0000000000000000e-1\n");
        assert_eq!(
            render(Format::Json, &cells),
            "{\"c0\":3,\"c1\":\"a,b\",\"c2\":null,\"c3\":5.0000000000000000e-1}\n"
        );
    }

    #[test]
    fn header_layout() {
        let h = series_header();
        assert_eq!(&h[..6], &["t", "scenario", "replicate", "sigma", "mu", "lambda"]);
        let pos = |name: &str| h.iter().position(|c| c == name).unwrap();
        assert_eq!(pos("cumulated_profitability"), pos("written_warnings") + 1);
        assert_eq!(pos("relative_profitability"), pos("written_warnings") + 2);
        assert_eq!(h.last().unwrap(), "mean_beta");
        assert_eq!(h.len(), OBSERVABLE_NAMES.len() + 5);
    }
}
