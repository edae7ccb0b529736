//! Dataset loading with format sniffing.

use crate::args::DataOpts;
use nnproj_core::data::{load_csv, load_idx, CsvOptions, Dataset, LabelColumn};
use nnproj_core::{Error, Result};
use std::path::Path;

fn sniff_format(path: &Path) -> Result<&'static str> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
    match ext.as_str() {
        "csv" => Ok("csv"),
        "idx" | "ubyte" => Ok("idx"),
        // MNIST distribution names: train-images-idx3-ubyte etc.
        _ if name.contains("idx3-ubyte") || name.contains("idx1-ubyte") => Ok("idx"),
        _ => Err(Error::Param(format!(
            "cannot infer format of '{}'; pass --format csv|idx",
            path.display()
        ))),
    }
}

/// Load a dataset according to the shared data flags.
pub fn load_dataset(opts: &DataOpts) -> Result<Dataset> {
    let format = match &opts.format {
        Some(f) => f.as_str(),
        None => sniff_format(&opts.data)?,
    };
    match format {
        "csv" => load_dataset_csv(opts),
        "idx" => {
            let labels_path = opts.labels.as_deref().filter(|s| *s != "none");
            load_idx(&opts.data, labels_path.map(Path::new))
        }
        other => Err(Error::Param(format!("unknown format '{other}'"))),
    }
}

fn load_dataset_csv(opts: &DataOpts) -> Result<Dataset> {
    let base = CsvOptions {
        delimiter: opts.delimiter as u8,
        ..Default::default()
    };
    match opts.labels.as_deref() {
        Some("none") => load_csv(&opts.data, &base),
        Some(spec) => {
            let label = match spec.parse::<usize>() {
                Ok(idx) => LabelColumn::Index(idx),
                Err(_) => LabelColumn::Name(spec.to_string()),
            };
            load_csv(
                &opts.data,
                &CsvOptions {
                    label: Some(label),
                    ..base
                },
            )
        }
        None => {
            // Convention: a header column literally named "label" holds the
            // labels; anything else loads unlabeled.
            let plain = load_csv(&opts.data, &base)?;
            let has_label = plain
                .feature_names
                .as_ref()
                .is_some_and(|ns| ns.iter().any(|n| n == "label"));
            if has_label {
                load_csv(
                    &opts.data,
                    &CsvOptions {
                        label: Some(LabelColumn::Name("label".into())),
                        ..base
                    },
                )
            } else {
                Ok(plain)
            }
        }
    }
}
