//! Criterion benchmarks for loopforge live under `benches/`.
