//! CSV loading and saving (RFC-4180 style, configurable delimiter).

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// How to pick the label column out of a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Column name; requires a header row.
    Name(String),
    /// Zero-based column index.
    Index(usize),
}

/// Whether the first row is a header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// Treat the first row as a header when any of its cells is non-numeric.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub header: HeaderMode,
    pub label: Option<LabelColumn>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            header: HeaderMode::Auto,
            label: None,
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Load a numeric CSV file into a [`Dataset`].
///
/// Feature cells parse as 64-bit floats; the label column, when selected,
/// parses as integers and is removed from the features. Malformed input
/// (ragged rows, non-numeric cells, a missing label column) is rejected with
/// the offending line number.
pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(false)
        .flexible(false)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => parse_err(1, format!("{other:?}")),
        })?;

    let mut records: Vec<(u64, csv::StringRecord)> = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or_else(|| records.len() + 1);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        records.push((line, record));
    }
    if records.is_empty() {
        return Err(parse_err(1, "empty file"));
    }

    let first = &records[0].1;
    let has_header = match opts.header {
        HeaderMode::Present => true,
        HeaderMode::Absent => false,
        HeaderMode::Auto => first.iter().any(|cell| cell.trim().parse::<f64>().is_err()),
    };
    let names: Option<Vec<String>> = if has_header {
        Some(first.iter().map(|s| s.trim().to_string()).collect())
    } else {
        None
    };
    let n_cols = first.len();
    let data_rows = &records[if has_header { 1 } else { 0 }..];
    if data_rows.is_empty() {
        return Err(parse_err(1, "no data rows"));
    }

    let label_idx = match &opts.label {
        None => None,
        Some(LabelColumn::Index(i)) => {
            if *i >= n_cols {
                return Err(parse_err(
                    1,
                    format!("label column index {i} out of range for {n_cols} columns"),
                ));
            }
            Some(*i)
        }
        Some(LabelColumn::Name(name)) => match &names {
            None => {
                return Err(parse_err(
                    1,
                    format!("label column '{name}' requested but file has no header"),
                ))
            }
            Some(names) => match names.iter().position(|n| n == name) {
                Some(i) => Some(i),
                None => {
                    return Err(parse_err(
                        1,
                        format!("label column '{name}' not found in header"),
                    ))
                }
            },
        },
    };

    let n_features = n_cols - usize::from(label_idx.is_some());
    if n_features == 0 {
        return Err(parse_err(1, "no feature columns left after label removal"));
    }

    let mut features = Vec::with_capacity(data_rows.len() * n_features);
    let mut labels = if label_idx.is_some() {
        Some(Vec::with_capacity(data_rows.len()))
    } else {
        None
    };
    for (line, record) in data_rows {
        let line = *line as usize;
        for (col, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if Some(col) == label_idx {
                let v: i64 = cell
                    .parse()
                    .map_err(|_| parse_err(line, format!("label cell '{cell}' is not an integer")))?;
                labels.as_mut().unwrap().push(v);
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| parse_err(line, format!("feature cell '{cell}' is not numeric")))?;
                if !v.is_finite() {
                    return Err(parse_err(line, format!("non-finite feature value '{cell}'")));
                }
                features.push(v);
            }
        }
    }

    let feature_names = names.map(|ns| {
        ns.into_iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_idx)
            .map(|(_, n)| n)
            .collect()
    });
    let matrix = Matrix::from_vec(data_rows.len(), n_features, features)?;
    Dataset::new(matrix, labels, feature_names)
}

/// Format a float with 17 significant digits, enough to round-trip exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Save a dataset as CSV with a header row. Labels, when present, land in a
/// trailing `label` column.
pub fn save_csv(d: &Dataset, path: impl AsRef<Path>, delimiter: u8) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    let sep = delimiter as char;

    let names: Vec<String> = match &d.feature_names {
        Some(ns) => ns.clone(),
        None => (0..d.n_features()).map(|i| format!("f{i}")).collect(),
    };
    let mut header = names.join(&sep.to_string());
    if d.labels.is_some() {
        header.push(sep);
        header.push_str("label");
    }
    writeln!(w, "{header}")?;

    for i in 0..d.n_samples() {
        let mut row: Vec<String> = d.features.row(i).iter().map(|&v| format_float(v)).collect();
        if let Some(labels) = &d.labels {
            row.push(labels[i].to_string());
        }
        writeln!(w, "{}", row.join(&sep.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
