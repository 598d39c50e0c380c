//! Criterion benchmarks for `covnot-core`; see `benches/`.
