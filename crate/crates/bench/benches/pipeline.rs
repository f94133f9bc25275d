use criterion::{criterion_group, criterion_main};

criterion_group!(benches, carare_edm_bench::benchmarks);
criterion_main!(benches);
