//! Criterion benchmarks for `boostdf`; see `benches/`.
