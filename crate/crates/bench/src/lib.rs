//! Placeholder; benchmarks live in benches/.
