//! Criterion benchmarks for hurstlab; see `benches/`.
