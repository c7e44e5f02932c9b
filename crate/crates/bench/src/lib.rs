//! Criterion benchmarks for the sorites laboratory; see `benches/`.
