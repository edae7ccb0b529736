//! IDX (classic MNIST distribution) loading and writing.
//!
//! Big-endian, magic `0x00000803` for unsigned-byte rank-3 image tensors and
//! `0x00000801` for unsigned-byte label vectors.

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

struct IdxReader {
    bytes: Vec<u8>,
    pos: usize,
    path: String,
}

impl IdxReader {
    fn open(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        File::open(path)?.read_to_end(&mut bytes)?;
        Ok(Self {
            bytes,
            pos: 0,
            path: path.display().to_string(),
        })
    }

    fn read_u32(&mut self) -> Result<u32> {
        if self.pos + 4 > self.bytes.len() {
            return Err(Error::Format(format!(
                "{}: truncated header at byte {}",
                self.path, self.pos
            )));
        }
        let v = u32::from_be_bytes(self.bytes[self.pos..self.pos + 4].try_into().unwrap());
        self.pos += 4;
        Ok(v)
    }

    fn read_bytes(&mut self, n: usize) -> Result<&[u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Format(format!(
                "{}: expected {} data bytes, found {}",
                self.path,
                n,
                self.bytes.len() - self.pos
            )));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
}

/// Load an IDX image file (and optional matching label file) into a
/// [`Dataset`]. Images flatten row-major into one row each; pixel bytes map
/// to `[0, 1]` by dividing by 255.
pub fn load_idx(
    images_path: impl AsRef<Path>,
    labels_path: Option<&Path>,
) -> Result<Dataset> {
    let images_path = images_path.as_ref();
    let mut r = IdxReader::open(images_path)?;
    let magic = r.read_u32()?;
    if magic != IMAGES_MAGIC {
        return Err(Error::Format(format!(
            "{}: bad magic {magic:#010x}, expected {IMAGES_MAGIC:#010x}",
            images_path.display()
        )));
    }
    let count = r.read_u32()? as usize;
    let rows = r.read_u32()? as usize;
    let cols = r.read_u32()? as usize;
    let pixels = r.read_bytes(count * rows * cols)?;
    let data: Vec<f64> = pixels.iter().map(|&b| b as f64 / 255.0).collect();
    let features = Matrix::from_vec(count, rows * cols, data)?;

    let labels = match labels_path {
        None => None,
        Some(lp) => {
            let mut r = IdxReader::open(lp)?;
            let magic = r.read_u32()?;
            if magic != LABELS_MAGIC {
                return Err(Error::Format(format!(
                    "{}: bad magic {magic:#010x}, expected {LABELS_MAGIC:#010x}",
                    lp.display()
                )));
            }
            let label_count = r.read_u32()? as usize;
            if label_count != count {
                return Err(Error::Format(format!(
                    "label count {label_count} does not match image count {count}"
                )));
            }
            let raw = r.read_bytes(label_count)?;
            Some(raw.iter().map(|&b| b as i64).collect())
        }
    };

    Dataset::new(features, labels, None)
}

/// Write images as an IDX unsigned-byte rank-3 tensor.
pub fn write_idx_images(
    path: impl AsRef<Path>,
    images: &[u8],
    count: usize,
    rows: usize,
    cols: usize,
) -> Result<()> {
    if images.len() != count * rows * cols {
        return Err(Error::Param(format!(
            "{} bytes for {count}x{rows}x{cols} images",
            images.len()
        )));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&IMAGES_MAGIC.to_be_bytes())?;
    w.write_all(&(count as u32).to_be_bytes())?;
    w.write_all(&(rows as u32).to_be_bytes())?;
    w.write_all(&(cols as u32).to_be_bytes())?;
    w.write_all(images)?;
    w.flush()?;
    Ok(())
}

/// Write labels as an IDX unsigned-byte vector.
pub fn write_idx_labels(path: impl AsRef<Path>, labels: &[u8]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&LABELS_MAGIC.to_be_bytes())?;
    w.write_all(&(labels.len() as u32).to_be_bytes())?;
    w.write_all(labels)?;
    w.flush()?;
    Ok(())
}
