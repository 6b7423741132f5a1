//! Benchmark-only crate; the measurements live in `benches/suite.rs`.
//! Run with `cargo bench -p psdec-bench`.
