//! Criterion benchmarks for nomasec-core live in `benches/`.
