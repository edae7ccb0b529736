//! Learn any projection technique with a small feed-forward network.
//!
//! The toolkit covers the full pipeline: compute a reference 2D projection
//! (PCA, classical MDS, Isomap, LLE, or exact t-SNE) of a training subset,
//! train a fully-connected network to mimic it, then project unseen data
//! deterministically in linear time. Quality metrics, a plotting backend,
//! and a timing harness round out the desk-scale experiment surface.

pub mod bench;
pub mod data;
pub mod error;
pub mod metrics;
pub mod nnp;
pub mod numerics;
pub mod pipeline;
pub mod plot;
pub mod projections;

pub use error::{Error, Result};
pub use numerics::{Matrix, Rng};
