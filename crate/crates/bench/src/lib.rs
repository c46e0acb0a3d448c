//! Criterion benchmarks for `torus2c-core`; see `benches/`.
