//! Weighted neighbor graphs and all-pairs shortest paths.

use super::dists::knn;
use super::matrix::{sq_dist, Matrix};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Undirected graph with non-negative edge weights, stored as adjacency lists.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Add an undirected edge. Duplicate edges are kept; shortest paths take
    /// the cheaper one implicitly.
    pub fn add_edge(&mut self, a: usize, b: usize, weight: f64) -> Result<()> {
        if a >= self.n || b >= self.n {
            return Err(Error::Param(format!(
                "edge ({a}, {b}) out of range for {} nodes",
                self.n
            )));
        }
        if !(weight >= 0.0) {
            return Err(Error::Param(format!("edge weight {weight} is negative")));
        }
        self.adj[a].push((b, weight));
        self.adj[b].push((a, weight));
        Ok(())
    }

    /// Symmetrized k-nearest-neighbor graph over the rows of `x`, edges
    /// weighted by Euclidean distance.
    pub fn from_knn(x: &Matrix, k: usize) -> Result<Self> {
        let neighbors = knn(x, k)?;
        let mut g = Self::new(x.rows());
        for (i, nbrs) in neighbors.iter().enumerate() {
            for &j in nbrs {
                // Insert each unordered pair once.
                if i < j || !neighbors[j].contains(&i) {
                    g.add_edge(i, j, sq_dist(x.row(i), x.row(j)).sqrt())?;
                }
            }
        }
        Ok(g)
    }

    /// Sizes of the connected components, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut size = 0;
            stack.push(start);
            seen[start] = true;
            while let Some(u) = stack.pop() {
                size += 1;
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// All-pairs shortest-path lengths via Dijkstra from every node.
    /// Unreachable pairs are flagged with `f64::INFINITY`.
    pub fn shortest_paths_with_unreachable(&self) -> Matrix {
        let mut out = Matrix::zeros(self.n, self.n);
        let mut dist = vec![f64::INFINITY; self.n];
        for src in 0..self.n {
            dist.fill(f64::INFINITY);
            dist[src] = 0.0;
            let mut heap = BinaryHeap::new();
            heap.push(HeapEntry {
                cost: 0.0,
                node: src,
            });
            while let Some(HeapEntry { cost, node }) = heap.pop() {
                if cost > dist[node] {
                    continue;
                }
                for &(next, w) in &self.adj[node] {
                    let cand = cost + w;
                    if cand < dist[next] {
                        dist[next] = cand;
                        heap.push(HeapEntry {
                            cost: cand,
                            node: next,
                        });
                    }
                }
            }
            for (j, &d) in dist.iter().enumerate() {
                out.set(src, j, d);
            }
        }
        out
    }

    /// All-pairs shortest-path lengths. Errors with the component sizes if
    /// any pair is unreachable, leaving the caller to decide (typically by
    /// suggesting a larger k).
    pub fn all_pairs_shortest_paths(&self) -> Result<Matrix> {
        let sizes = self.component_sizes();
        if sizes.len() > 1 {
            return Err(Error::DisconnectedGraph { sizes });
        }
        Ok(self.shortest_paths_with_unreachable())
    }
}

/// Min-heap entry; costs are finite and non-negative.
#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    cost: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reverse: BinaryHeap is a max-heap.
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap()
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::Rng;

    #[test]
    fn path_graph_distances() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(1, 2, 1.0).unwrap();
        let d = g.all_pairs_shortest_paths().unwrap();
        assert_eq!(d.get(0, 2), 2.0);
        assert_eq!(d.get(2, 0), 2.0);
        assert_eq!(d.get(0, 0), 0.0);
    }

    #[test]
    fn complete_graph_on_convex_points_is_euclidean() {
        // Points on a circle: every direct edge is the shortest path.
        let n = 8;
        let mut coords = Vec::new();
        for i in 0..n {
            let a = i as f64 / n as f64 * std::f64::consts::TAU;
            coords.push(a.cos());
            coords.push(a.sin());
        }
        let x = Matrix::from_vec(n, 2, coords).unwrap();
        let g = Graph::from_knn(&x, n - 1).unwrap();
        let d = g.all_pairs_shortest_paths().unwrap();
        for i in 0..n {
            for j in 0..n {
                let direct = sq_dist(x.row(i), x.row(j)).sqrt();
                assert!((d.get(i, j) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn disconnected_graph_reports_component_sizes() {
        let mut g = Graph::new(5);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(2, 3, 1.0).unwrap();
        g.add_edge(3, 4, 1.0).unwrap();
        match g.all_pairs_shortest_paths() {
            Err(Error::DisconnectedGraph { sizes }) => assert_eq!(sizes, vec![3, 2]),
            other => panic!("expected disconnection error, got {other:?}"),
        }
        let with_inf = g.shortest_paths_with_unreachable();
        assert!(with_inf.get(0, 2).is_infinite());
        assert_eq!(with_inf.get(2, 4), 2.0);
    }

    #[test]
    fn matches_floyd_warshall_oracle() {
        // Random connected graph on 15 nodes: a ring plus random chords.
        let n = 15;
        let mut rng = Rng::new(4242);
        let mut g = Graph::new(n);
        let mut dense = vec![vec![f64::INFINITY; n]; n];
        for i in 0..n {
            dense[i][i] = 0.0;
        }
        let add = |g: &mut Graph, dense: &mut Vec<Vec<f64>>, a: usize, b: usize, w: f64| {
            g.add_edge(a, b, w).unwrap();
            if w < dense[a][b] {
                dense[a][b] = w;
                dense[b][a] = w;
            }
        };
        for i in 0..n {
            let w = rng.range_f64(0.1, 2.0);
            add(&mut g, &mut dense, i, (i + 1) % n, w);
        }
        for _ in 0..12 {
            let a = rng.next_below(n as u64) as usize;
            let b = rng.next_below(n as u64) as usize;
            if a != b {
                let w = rng.range_f64(0.1, 2.0);
                add(&mut g, &mut dense, a, b, w);
            }
        }

        // Floyd-Warshall oracle.
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dense[i][k] + dense[k][j];
                    if via < dense[i][j] {
                        dense[i][j] = via;
                    }
                }
            }
        }

        let d = g.all_pairs_shortest_paths().unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!(
                    (d.get(i, j) - dense[i][j]).abs() < 1e-12,
                    "({i},{j}): dijkstra {} vs floyd-warshall {}",
                    d.get(i, j),
                    dense[i][j]
                );
            }
        }
    }

    #[test]
    fn rejects_negative_weight_and_bad_nodes() {
        let mut g = Graph::new(2);
        assert!(g.add_edge(0, 1, -1.0).is_err());
        assert!(g.add_edge(0, 5, 1.0).is_err());
    }
}
