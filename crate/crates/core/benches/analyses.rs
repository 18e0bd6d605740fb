//! Benchmarks for the data-parallel analyses.
//!
//! Run `cargo bench` for the rayon build and
//! `cargo bench --no-default-features` for the sequential fallback; the
//! benchmark ids carry the mode, so criterion keeps the two sets of
//! results side by side for comparison.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use textlaws::models::{ngram_train, perplexity, SmoothingConfig};
use textlaws::scaling::{acf, ebeling, heaps, lrc_analyze, taylor, zipf, ZipfOrder};
use textlaws::textio::{to_char_stream, TokenStream};

const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

fn zipfian_stream(n_tokens: usize, vocab: usize, seed: u64) -> TokenStream {
    let weights: Vec<f64> = (1..=vocab).map(|r| 1.0 / r as f64).collect();
    let total: f64 = weights.iter().sum();
    let cumulative: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total;
            Some(*acc)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surfaces: Vec<String> = (0..n_tokens)
        .map(|_| {
            let u: f64 = rng.random();
            format!("w{}", cumulative.partition_point(|&c| c < u))
        })
        .collect();
    TokenStream::from_surfaces(&surfaces)
}

fn bench_analyses(c: &mut Criterion) {
    let n_tokens = 200_000usize;
    let stream = zipfian_stream(n_tokens, 20_000, 7);
    let chars = to_char_stream(&stream).unwrap();

    let mut group = c.benchmark_group("taylor");
    group.throughput(Throughput::Elements(n_tokens as u64));
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| taylor(black_box(&stream), 1000).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("ebeling");
    group.throughput(Throughput::Elements(chars.len() as u64));
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| ebeling(black_box(&chars), 10, chars.len() / 100, 10).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("zipf");
    group.throughput(Throughput::Elements(n_tokens as u64));
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| zipf(black_box(&stream), ZipfOrder::Bigram).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("heaps");
    group.throughput(Throughput::Elements(n_tokens as u64));
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| heaps(black_box(&stream), 10).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("lrc");
    group.throughput(Throughput::Elements(n_tokens as u64));
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| lrc_analyze(black_box(&stream), 16, 100).unwrap())
    });
    group.finish();

    let series: Vec<f64> = {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        (0..100_000).map(|_| rng.random::<f64>()).collect()
    };
    let mut group = c.benchmark_group("acf");
    group.throughput(Throughput::Elements(series.len() as u64));
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| acf(black_box(&series), 200).unwrap())
    });
    group.finish();
}

fn bench_models(c: &mut Criterion) {
    let stream = zipfian_stream(200_000, 20_000, 11);
    let model = ngram_train(&stream, 3, SmoothingConfig::KneserNey, 0.1).unwrap();

    let mut group = c.benchmark_group("ngram_train_kn3");
    group.sample_size(10);
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| ngram_train(black_box(&stream), 3, SmoothingConfig::KneserNey, 0.1).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("perplexity_kn3");
    group.throughput(Throughput::Elements(stream.len() as u64));
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| perplexity(black_box(&model), black_box(&stream)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_analyses, bench_models);
criterion_main!(benches);
