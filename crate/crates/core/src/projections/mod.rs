//! Reference projection techniques: PCA, classical MDS, Isomap, LLE, and
//! exact t-SNE. These produce the training projections the network learns
//! from, and the ground truth it is evaluated against.
//!
//! Projectors return embeddings in their natural scale; min-max scaling to
//! [0, 1]^2 for use as regression targets happens at the training pipeline.

pub mod embedding;
pub mod isomap;
pub mod lle;
pub mod mds;
pub mod pca;
pub mod tsne;

use crate::error::{Error, Result};

pub use embedding::Embedding;
pub use isomap::isomap_project;
pub use lle::lle_project;
pub use mds::{mds_project, GRAM_SIZE_CAP};
pub use pca::{pca_project, PcaModel};
pub use tsne::{joint_affinities, tsne_project, CalibrationReport, TsneConfig, TsneRun};

/// Neighborhood parameters shared by Isomap and LLE.
#[derive(Debug, Clone, Copy)]
pub struct NeighborGraphConfig {
    pub k: usize,
    /// LLE local-Gram conditioning, as a fraction of the Gram trace.
    pub lle_regularization: f64,
}

impl Default for NeighborGraphConfig {
    fn default() -> Self {
        Self {
            k: 10,
            lle_regularization: 1e-3,
        }
    }
}

impl NeighborGraphConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Param(format!("k must be at least 2, got {}", self.k)));
        }
        if !(self.lle_regularization > 0.0) {
            return Err(Error::Param(format!(
                "lle_regularization must be positive, got {}",
                self.lle_regularization
            )));
        }
        Ok(())
    }
}

/// The reference techniques selectable throughout the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Pca,
    Mds,
    Isomap,
    Lle,
    Tsne,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Pca,
        Method::Mds,
        Method::Isomap,
        Method::Lle,
        Method::Tsne,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Pca => "pca",
            Method::Mds => "mds",
            Method::Isomap => "isomap",
            Method::Lle => "lle",
            Method::Tsne => "tsne",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pca" => Ok(Method::Pca),
            "mds" => Ok(Method::Mds),
            "isomap" => Ok(Method::Isomap),
            "lle" => Ok(Method::Lle),
            "tsne" | "t-sne" => Ok(Method::Tsne),
            other => Err(Error::Param(format!(
                "unknown method '{other}' (expected pca, mds, isomap, lle, or tsne)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters for every reference technique, so callers can hold one value.
#[derive(Debug, Clone, Default)]
pub struct ProjectionConfig {
    pub tsne: TsneConfig,
    pub neighbors: NeighborGraphConfig,
}

/// Run the selected reference technique on a dataset.
pub fn project(
    d: &crate::data::Dataset,
    method: Method,
    cfg: &ProjectionConfig,
) -> Result<Embedding> {
    match method {
        Method::Pca => Ok(pca_project(d)?.0),
        Method::Mds => mds_project(d),
        Method::Isomap => isomap_project(d, &cfg.neighbors),
        Method::Lle => lle_project(d, &cfg.neighbors),
        Method::Tsne => Ok(tsne_project(d, &cfg.tsne)?.embedding),
    }
}
