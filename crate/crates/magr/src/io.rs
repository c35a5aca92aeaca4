//! CSV ingestion and emission. Input files are comma-separated with a
//! header row; an optional leading date column (ISO 8601) becomes the
//! index; missing cells are empty, "NA" or "NaN" by default.

use std::io::Write;
use std::path::Path;

use crate::error::{MagrError, Result};
use crate::harness::{ExperimentStats, MatrixCell, PairwiseMatrix};
use crate::series::GappySeries;

pub const DEFAULT_MISSING_TOKENS: [&str; 3] = ["", "NA", "NaN"];

/// Named columns of gappy series with an optional date index.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub names: Vec<String>,
    pub columns: Vec<GappySeries>,
    pub dates: Option<Vec<String>>,
}

impl DataTable {
    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.len())
    }

    pub fn column(&self, name: &str) -> Option<&GappySeries> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.columns[i])
    }
}

fn is_missing(cell: &str, tokens: &[String]) -> bool {
    tokens.iter().any(|t| t.eq_ignore_ascii_case(cell))
}

/// Parse a CSV file into a table. Cells matching a missing token are
/// absent; the first column becomes the date index if its first data cell
/// is non-numeric.
pub fn read_csv(path: &Path, missing_tokens: &[String]) -> Result<DataTable> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, missing_tokens)
}

pub fn parse_csv(text: &str, missing_tokens: &[String]) -> Result<DataTable> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| MagrError::Format("empty file: missing header row".into()))?;
    let header: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let n_cols = header.len();

    let mut raw_rows: Vec<Vec<String>> = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
        if cells.len() != n_cols {
            return Err(MagrError::Format(format!(
                "ragged row at line {}: expected {n_cols} cells, got {}",
                lineno + 1,
                cells.len()
            )));
        }
        raw_rows.push(cells);
    }
    if raw_rows.is_empty() {
        return Err(MagrError::Format("no data rows".into()));
    }

    // Date index iff the first cell of the first data row is non-numeric
    // and not a missing token.
    let first = &raw_rows[0][0];
    let has_index = first.parse::<f64>().is_err() && !is_missing(first, missing_tokens);
    let data_start = usize::from(has_index);

    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(raw_rows.len()); n_cols - data_start];
    let mut dates = has_index.then(Vec::new);
    for (ri, row) in raw_rows.iter().enumerate() {
        if let Some(d) = dates.as_mut() {
            d.push(row[0].clone());
        }
        for (ci, cell) in row.iter().enumerate().skip(data_start) {
            let value = if is_missing(cell, missing_tokens) {
                None
            } else {
                Some(cell.parse::<f64>().map_err(|_| MagrError::Parse {
                    row: ri + 2, // 1-based, after the header
                    col: ci + 1,
                    msg: format!("cannot parse '{cell}' as a number"),
                })?)
            };
            columns[ci - data_start].push(value);
        }
    }
    if let Some(d) = &dates {
        for w in d.windows(2) {
            if w[1] <= w[0] {
                return Err(MagrError::Format(format!(
                    "date index not strictly increasing at '{}'",
                    w[1]
                )));
            }
        }
    }
    Ok(DataTable {
        names: header[data_start..].to_vec(),
        columns: columns.into_iter().map(GappySeries::new).collect(),
        dates,
    })
}

/// Round to `digits` significant digits; the shortest round-trip decimal of
/// the rounded value is printed.
pub fn fmt_sig(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - e);
    format!("{}", (x * factor).round() / factor)
}

pub fn fmt_value(x: f64, full_precision: bool) -> String {
    if full_precision {
        format!("{x:?}")
    } else {
        fmt_sig(x, 6)
    }
}

pub fn write_table<W: Write + ?Sized>(out: &mut W, table: &DataTable, full_precision: bool) -> Result<()> {
    let mut header = Vec::new();
    if table.dates.is_some() {
        header.push("date".to_string());
    }
    header.extend(table.names.iter().cloned());
    writeln!(out, "{}", header.join(","))?;
    for r in 0..table.n_rows() {
        let mut cells = Vec::with_capacity(header.len());
        if let Some(d) = &table.dates {
            cells.push(d[r].clone());
        }
        for col in &table.columns {
            cells.push(match col.values()[r] {
                Some(v) => fmt_value(v, full_precision),
                None => String::new(),
            });
        }
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// A generated or gap-injected pair as `t,x,y` rows, 1-based time.
pub fn write_pair<W: Write + ?Sized>(out: &mut W, x: &GappySeries, y: &GappySeries, full_precision: bool) -> Result<()> {
    writeln!(out, "t,x,y")?;
    for t in 1..=x.len() {
        let cell = |v: Option<f64>| v.map_or(String::new(), |v| fmt_value(v, full_precision));
        writeln!(out, "{t},{},{}", cell(x.at(t)), cell(y.at(t)))?;
    }
    Ok(())
}

pub fn write_experiment_stats<W: Write + ?Sized>(out: &mut W, stats: &ExperimentStats, full_precision: bool) -> Result<()> {
    writeln!(out, "method,gap_pct,mean_d,std_d,mean_effective_n,n_success")?;
    for c in &stats.cells {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            c.method,
            fmt_value(c.gap_pct, full_precision),
            fmt_value(c.mean_d, full_precision),
            fmt_value(c.std_d, full_precision),
            fmt_value(c.mean_effective_n, full_precision),
            c.n_success
        )?;
    }
    Ok(())
}

pub fn write_matrix<W: Write + ?Sized>(out: &mut W, matrix: &PairwiseMatrix, full_precision: bool) -> Result<()> {
    if matrix.directed {
        writeln!(out, "# rows drive columns")?;
    }
    writeln!(out, ",{}", matrix.names.join(","))?;
    for (name, row) in matrix.names.iter().zip(&matrix.cells) {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                MatrixCell::Value(v) => fmt_value(*v, full_precision),
                MatrixCell::NotApplicable => "NA".to_string(),
                MatrixCell::Error(e) => format!("ERR:{}", e.replace(',', ";")),
            })
            .collect();
        writeln!(out, "{name},{}", cells.join(","))?;
    }
    Ok(())
}

/// Align price tables on the union of their dates and compute log returns.
/// A date missing for an index is a gap; a return is absent whenever either
/// of the two consecutive prices is absent (no bridging across gaps).
pub fn align_and_returns(tables: &[DataTable]) -> Result<DataTable> {
    if tables.is_empty() {
        return Err(MagrError::Input("align_and_returns needs >= 1 table".into()));
    }
    let mut dates: Vec<String> = Vec::new();
    for t in tables {
        let d = t
            .dates
            .as_ref()
            .ok_or_else(|| MagrError::Input("align_and_returns needs a date index".into()))?;
        dates.extend(d.iter().cloned());
    }
    dates.sort();
    dates.dedup();

    let mut names = Vec::with_capacity(tables.len());
    let mut columns = Vec::with_capacity(tables.len());
    for t in tables {
        if t.columns.is_empty() {
            return Err(MagrError::Input("table has no price column".into()));
        }
        let tdates = t.dates.as_ref().unwrap();
        let prices = &t.columns[0]; // close-price column
        let mut aligned: Vec<Option<f64>> = vec![None; dates.len()];
        for (i, d) in tdates.iter().enumerate() {
            let pos = dates.binary_search(d).unwrap();
            if let Some(p) = prices.values()[i] {
                if p <= 0.0 {
                    return Err(MagrError::Domain(format!(
                        "non-positive price {p} for '{}' on {d}",
                        t.names[0]
                    )));
                }
                aligned[pos] = Some(p);
            }
        }
        let returns: Vec<Option<f64>> = (0..dates.len())
            .map(|i| {
                if i == 0 {
                    None
                } else {
                    match (aligned[i - 1], aligned[i]) {
                        (Some(prev), Some(cur)) => Some((cur / prev).ln()),
                        _ => None,
                    }
                }
            })
            .collect();
        names.push(t.names[0].clone());
        columns.push(GappySeries::new(returns));
    }
    Ok(DataTable {
        names,
        columns,
        dates: Some(dates),
    })
}
