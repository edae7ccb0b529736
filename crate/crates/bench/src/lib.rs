//! Criterion benchmarks live in benches/; see `cargo bench -p nnproj-bench`.
