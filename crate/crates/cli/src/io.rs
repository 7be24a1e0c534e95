//! CSV reading and writing. Floats are written in Rust's shortest
//! round-trip form so that a write followed by a read is lossless.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use histspline::{Histogram, TimeSeries};

use crate::error::{CliError, Result};

fn open_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().has_headers(true).from_reader(file))
}

fn parse_error(path: &Path, line: u64, column: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        column: column.to_string(),
        message: message.into(),
    }
}

fn csv_error(path: &Path, column: &str, e: csv::Error) -> CliError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        kind => parse_error(path, line, column, format!("{kind:?}")),
    }
}

/// Values of the named columns, one vector per column, in file order.
pub fn read_columns(path: &Path, columns: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = open_reader(path)?;
    let headers = reader
        .headers()
        .map_err(|e| csv_error(path, "", e))?
        .clone();
    let indices = columns
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h.trim() == *name)
                .ok_or_else(|| parse_error(path, 1, name, "column not found in header"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![Vec::new(); columns.len()];
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, "", e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        for ((name, &i), values) in columns.iter().zip(&indices).zip(out.iter_mut()) {
            let field = record
                .get(i)
                .ok_or_else(|| parse_error(path, line, name, "missing field"))?;
            let value: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_error(path, line, name, format!("not a number: {field:?}")))?;
            if !value.is_finite() {
                return Err(parse_error(path, line, name, "value is not finite"));
            }
            values.push(value);
        }
    }
    if out[0].is_empty() {
        return Err(parse_error(path, 2, columns[0], "no data rows"));
    }
    Ok(out)
}

fn create(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let to_io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        kind => CliError::io(path, std::io::Error::other(format!("{kind:?}"))),
    };
    let mut w = create(path)?;
    w.write_record(header).map_err(to_io)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>()).map_err(to_io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `series_id,t,x`, one row per sample.
pub fn write_corpus(path: &Path, corpus: &[TimeSeries]) -> Result<()> {
    let rows = corpus.iter().enumerate().flat_map(|(id, s)| {
        s.t.iter()
            .zip(&s.x)
            .map(move |(t, x)| [id.to_string(), t.to_string(), x.to_string()])
    });
    write_rows(path, &["series_id", "t", "x"], rows)
}

/// `bin,left,right,center,height`.
pub fn write_histogram(path: &Path, hist: &Histogram) -> Result<()> {
    let e = hist.edges();
    let rows = hist
        .heights()
        .iter()
        .zip(hist.centers())
        .enumerate()
        .map(|(i, (h, c))| {
            [
                i.to_string(),
                e[i].to_string(),
                e[i + 1].to_string(),
                c.to_string(),
                h.to_string(),
            ]
        });
    write_rows(path, &["bin", "left", "right", "center", "height"], rows)
}

/// `u,pdf`.
pub fn write_curve(path: &Path, curve: &[(f64, f64)]) -> Result<()> {
    let rows = curve.iter().map(|(u, p)| [u.to_string(), p.to_string()]);
    write_rows(path, &["u", "pdf"], rows)
}

pub fn read_curve(path: &Path) -> Result<Vec<(f64, f64)>> {
    let cols = read_columns(path, &["u", "pdf"])?;
    Ok(cols[0].iter().copied().zip(cols[1].iter().copied()).collect())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}
