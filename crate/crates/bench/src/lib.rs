//! Criterion benchmarks for the outage evaluators; see `benches/`.
