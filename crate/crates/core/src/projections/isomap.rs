//! Isomap: classical MDS on graph geodesic distances.

use super::embedding::Embedding;
use super::mds::{check_gram_cap, classical_mds_from_sq_dists};
use super::NeighborGraphConfig;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{Graph, Matrix};

/// Project a dataset with Isomap: build the symmetrized k-nearest-neighbor
/// graph, compute all-pairs shortest paths, then run classical MDS on the
/// squared geodesic distances. A disconnected graph is reported with its
/// component sizes so the caller can retry with a larger k.
pub fn isomap_project(d: &Dataset, cfg: &NeighborGraphConfig) -> Result<Embedding> {
    cfg.validate()?;
    let n = d.n_samples();
    if n < 3 {
        return Err(Error::Param("Isomap needs at least 3 samples".into()));
    }
    check_gram_cap(n, "Isomap")?;

    let graph = Graph::from_knn(&d.features, cfg.k)?;
    let geo = graph.all_pairs_shortest_paths()?;

    let mut sq = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = geo.get(i, j) * geo.get(i, j);
            sq.set(i, j, v);
            sq.set(j, i, v);
        }
    }
    classical_mds_from_sq_dists(&sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::make_blobs;
    use crate::metrics::procrustes_residual;
    use crate::projections::mds_project;
    use crate::numerics::Rng;

    #[test]
    fn complete_graph_equals_mds() {
        let mut rng = Rng::new(50);
        let n = 25;
        let data: Vec<f64> = (0..n * 4).map(|_| rng.range_f64(-2.0, 2.0)).collect();
        let d = Dataset::new(Matrix::from_vec(n, 4, data).unwrap(), None, None).unwrap();

        let cfg = NeighborGraphConfig {
            k: n - 1,
            ..Default::default()
        };
        let iso = isomap_project(&d, &cfg).unwrap();
        let mds = mds_project(&d).unwrap();
        let residual = procrustes_residual(&mds.coords, &iso.coords).unwrap();
        assert!(residual < 1e-6, "procrustes residual {residual:.3e}");
    }

    #[test]
    fn s_curve_unrolls_monotonically() {
        // 1D manifold embedded in 3D: an "S" traced by arc length. The
        // first Isomap axis must order the points exactly as the curve does.
        let n = 100;
        let mut data = Vec::with_capacity(n * 3);
        for i in 0..n {
            let t = -1.5 * std::f64::consts::PI
                + 3.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64;
            data.push(t.sin());
            data.push(2.0 * (i as f64 / (n - 1) as f64));
            data.push(t.signum() * (t.cos() - 1.0));
        }
        let d = Dataset::new(Matrix::from_vec(n, 3, data).unwrap(), None, None).unwrap();
        let e = isomap_project(
            &d,
            &NeighborGraphConfig {
                k: 6,
                ..Default::default()
            },
        )
        .unwrap();

        // Arc-length oracle: the generation order is the arc-length order,
        // so the embedding's first coordinate must be strictly monotone.
        let first_axis: Vec<f64> = (0..n).map(|i| e.coords.get(i, 0)).collect();
        let direction = (first_axis[n - 1] - first_axis[0]).signum();
        for w in first_axis.windows(2) {
            assert!(
                (w[1] - w[0]) * direction > 0.0,
                "first axis not monotone along the curve"
            );
        }
    }

    #[test]
    fn far_blobs_with_small_k_disconnect() {
        let d = make_blobs(2, 20, 3, 0.01, 5).unwrap();
        let cfg = NeighborGraphConfig {
            k: 3,
            ..Default::default()
        };
        match isomap_project(&d, &cfg) {
            Err(Error::DisconnectedGraph { sizes }) => {
                assert_eq!(sizes, vec![20, 20]);
            }
            other => panic!("expected disconnection, got {other:?}"),
        }
    }
}
