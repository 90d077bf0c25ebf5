//! Criterion benchmarks for the psat toolkit; see `benches/`.
