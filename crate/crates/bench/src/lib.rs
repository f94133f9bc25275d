//! Criterion benchmarks for the conversion stages.

use criterion::{BenchmarkId, Criterion, Throughput};

use carare_edm::pipeline::{Pipeline, RunOptions};
use carare_edm::rdf::{write_bundle, MemorySink};
use carare_edm::synth::{generate, CorpusSpec};
use carare_edm::{map_record, parse_batch, DatasetProfile, MintConfig, ParserConfig};

fn profile() -> DatasetProfile {
    DatasetProfile::new(
        MintConfig::new("http://store.carare.eu", Some(3)).expect("valid base"),
        "Benchmark Archive",
        "http://creativecommons.org/licenses/by-sa/3.0/",
    )
}

fn corpus(records: usize) -> Vec<(String, String)> {
    generate(&CorpusSpec { seed: 1, records, shared_groups: records / 20, records_per_document: 10, ..CorpusSpec::default() })
        .documents
}

pub fn benchmarks(c: &mut Criterion) {
    let profile = profile();
    let parser = ParserConfig::default();
    let docs = corpus(1_000);
    let (records, _) = parse_batch(&docs, &parser);
    let bundles: Vec<_> = records.iter().flat_map(|r| map_record(r, &profile).expect("maps").bundles).collect();

    let mut stages = c.benchmark_group("stages");
    stages.throughput(Throughput::Elements(records.len() as u64));
    stages.bench_function("parse", |b| b.iter(|| parse_batch(&docs, &parser)));
    stages.bench_function("map", |b| b.iter(|| records.iter().map(|r| map_record(r, &profile).expect("maps").bundles.len()).sum::<usize>()));
    stages.bench_function("write", |b| b.iter(|| bundles.iter().map(|x| write_bundle(x).expect("valid").len()).sum::<usize>()));
    stages.finish();

    let mut pipeline = c.benchmark_group("pipeline");
    pipeline.sample_size(10);
    for workers in [1, 4] {
        pipeline.throughput(Throughput::Elements(1_000));
        pipeline.bench_with_input(BenchmarkId::new("workers", workers), &workers, |b, &workers| {
            let options = RunOptions { workers, ..RunOptions::default() };
            b.iter(|| {
                let mut sink = MemorySink::default();
                Pipeline::new(&profile, &parser, options.clone()).run(&docs, &mut sink).expect("runs")
            })
        });
    }
    pipeline.finish();
}
