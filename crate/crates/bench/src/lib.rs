//! Benchmarks for prstrata live under benches/.
