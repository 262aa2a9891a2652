//! Benchmark-only crate; see `benches/counting.rs`. Run with `cargo bench`.
