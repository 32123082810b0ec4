//! Criterion benchmarks for fockyang; see `benches/`.
