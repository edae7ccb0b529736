//! Dataset loading, normalization, splitting, and synthesis.

pub mod blobs;
pub mod csv_io;
pub mod dataset;
pub mod idx;
pub mod normalize;
pub mod split;

pub use blobs::make_blobs;
pub use csv_io::{load_csv, save_csv, CsvOptions, HeaderMode, LabelColumn};
pub use dataset::Dataset;
pub use idx::{load_idx, write_idx_images, write_idx_labels};
pub use normalize::Normalizer;
pub use split::{split, split_indices, split_train_val, SplitSpec};
