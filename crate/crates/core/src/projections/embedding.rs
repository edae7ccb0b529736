//! 2D embeddings and their CSV form.

use crate::data::csv_io::{format_float, load_csv, CsvOptions, LabelColumn};
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// N projected points in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub coords: Matrix,
}

impl Embedding {
    pub fn new(coords: Matrix) -> Result<Self> {
        if coords.cols() != 2 {
            return Err(Error::Shape(format!(
                "embedding must have 2 columns, got {}",
                coords.cols()
            )));
        }
        if !coords.all_finite() {
            return Err(Error::Param("embedding contains non-finite values".into()));
        }
        Ok(Self { coords })
    }

    pub fn len(&self) -> usize {
        self.coords.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.rows() == 0
    }

    pub fn point(&self, i: usize) -> (f64, f64) {
        (self.coords.get(i, 0), self.coords.get(i, 1))
    }

    /// Write as `x,y[,label]` CSV with lossless float formatting.
    pub fn write_csv(&self, path: impl AsRef<Path>, labels: Option<&[i64]>) -> Result<()> {
        if let Some(l) = labels {
            if l.len() != self.len() {
                return Err(Error::Param(format!(
                    "{} labels for {} points",
                    l.len(),
                    self.len()
                )));
            }
        }
        let mut w = BufWriter::new(File::create(path)?);
        match labels {
            Some(_) => writeln!(w, "x,y,label")?,
            None => writeln!(w, "x,y")?,
        }
        for i in 0..self.len() {
            let (x, y) = self.point(i);
            match labels {
                Some(l) => writeln!(w, "{},{},{}", format_float(x), format_float(y), l[i])?,
                None => writeln!(w, "{},{}", format_float(x), format_float(y))?,
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Read an `x,y[,label]` CSV produced by [`write_csv`](Self::write_csv).
    pub fn read_csv(path: impl AsRef<Path>) -> Result<(Self, Option<Vec<i64>>)> {
        let path = path.as_ref();
        let plain = load_csv(path, &CsvOptions::default())?;
        let has_label = plain
            .feature_names
            .as_ref()
            .is_some_and(|ns| ns.iter().any(|n| n == "label"));
        let (features, labels) = if has_label {
            let opts = CsvOptions {
                label: Some(LabelColumn::Name("label".into())),
                ..Default::default()
            };
            let d = load_csv(path, &opts)?;
            (d.features, d.labels)
        } else {
            (plain.features, None)
        };
        Ok((Self::new(features)?, labels))
    }
}
