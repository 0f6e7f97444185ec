//! Criterion benchmarks live in `benches/`. Run them with
//! `cargo bench -p exsplash-bench`.
