//! Binary model serialization.
//!
//! Layout: magic `NNPM`, format version (u16), layer-dim count (u32) and the
//! dims themselves (u32 each), then little-endian f64 payloads: weights layer
//! by layer row-major, biases layer by layer, input normalizer (min,max per
//! input), target normalizer (two pairs), and finally a length-prefixed
//! UTF-8 JSON metadata blob. All integers are little-endian.

use super::model::{ModelMeta, NetworkModel, OUTPUT_DIM};
use crate::data::Normalizer;
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use std::fs;
use std::io::Write;
use std::path::Path;

pub const MODEL_MAGIC: &[u8; 4] = b"NNPM";
pub const FORMAT_VERSION: u16 = 1;

/// Serialize a model to its canonical byte form.
pub fn model_to_bytes(m: &NetworkModel) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(MODEL_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(m.layer_dims.len() as u32).to_le_bytes());
    for &d in &m.layer_dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for w in &m.weights {
        for &v in w.as_slice() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    for b in &m.biases {
        for &v in b {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    for (min, max) in m.input_norm.mins.iter().zip(&m.input_norm.maxs) {
        out.extend_from_slice(&min.to_le_bytes());
        out.extend_from_slice(&max.to_le_bytes());
    }
    for (min, max) in m.target_norm.mins.iter().zip(&m.target_norm.maxs) {
        out.extend_from_slice(&min.to_le_bytes());
        out.extend_from_slice(&max.to_le_bytes());
    }
    let meta = serde_json::to_string(&m.meta)
        .map_err(|e| Error::Format(format!("metadata serialization failed: {e}")))?;
    out.extend_from_slice(&(meta.len() as u32).to_le_bytes());
    out.extend_from_slice(meta.as_bytes());
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Format(format!(
                "model file truncated reading {what} at byte {}",
                self.pos
            )));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize, what: &str) -> Result<Vec<f64>> {
        let raw = self.take(n * 8, what)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

/// Parse a model from bytes; no partial model escapes on malformed input.
pub fn model_from_bytes(bytes: &[u8]) -> Result<NetworkModel> {
    let mut c = Cursor { bytes, pos: 0 };
    if c.take(4, "magic")? != MODEL_MAGIC {
        return Err(Error::Format("bad model magic, expected NNPM".into()));
    }
    let version = c.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported model format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    let n_dims = c.u32("layer count")? as usize;
    if !(2..=64).contains(&n_dims) {
        return Err(Error::Format(format!("implausible layer count {n_dims}")));
    }
    let mut layer_dims = Vec::with_capacity(n_dims);
    for _ in 0..n_dims {
        let d = c.u32("layer dim")? as usize;
        if d == 0 {
            return Err(Error::Format("zero layer dimension".into()));
        }
        layer_dims.push(d);
    }
    if *layer_dims.last().unwrap() != OUTPUT_DIM {
        return Err(Error::Format(format!(
            "output layer must have {OUTPUT_DIM} units, found {}",
            layer_dims.last().unwrap()
        )));
    }

    let mut weights = Vec::with_capacity(n_dims - 1);
    for pair in layer_dims.windows(2) {
        let data = c.f64s(pair[0] * pair[1], "weights")?;
        weights.push(Matrix::from_vec(pair[0], pair[1], data)?);
    }
    let mut biases = Vec::with_capacity(n_dims - 1);
    for pair in layer_dims.windows(2) {
        biases.push(c.f64s(pair[1], "biases")?);
    }

    let read_norm = |c: &mut Cursor, n: usize, what: &str| -> Result<Normalizer> {
        let flat = c.f64s(2 * n, what)?;
        let mut mins = Vec::with_capacity(n);
        let mut maxs = Vec::with_capacity(n);
        for pair in flat.chunks_exact(2) {
            mins.push(pair[0]);
            maxs.push(pair[1]);
        }
        Ok(Normalizer { mins, maxs })
    };
    let input_norm = read_norm(&mut c, layer_dims[0], "input normalizer")?;
    let target_norm = read_norm(&mut c, OUTPUT_DIM, "target normalizer")?;

    let meta_len = c.u32("metadata length")? as usize;
    let meta_raw = c.take(meta_len, "metadata")?;
    let meta: ModelMeta = serde_json::from_slice(meta_raw)
        .map_err(|e| Error::Format(format!("malformed model metadata: {e}")))?;
    if c.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes after model payload",
            bytes.len() - c.pos
        )));
    }

    let model = NetworkModel {
        layer_dims,
        weights,
        biases,
        input_norm,
        target_norm,
        meta,
    };
    if !model.all_finite() {
        return Err(Error::Format("model contains non-finite parameters".into()));
    }
    Ok(model)
}

/// Save a model. The file appears atomically: bytes go to a sibling temp
/// file first, then rename, so a failed save never leaves a truncated model.
pub fn save_model(m: &NetworkModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = model_to_bytes(m)?;
    let tmp = path.with_extension("nnpm.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<NetworkModel> {
    let bytes = fs::read(path.as_ref())?;
    model_from_bytes(&bytes)
}
