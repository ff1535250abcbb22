//! Benchmarks live in `benches/`.
pub use catmetro_core as core;
