//! Throughput benchmarks for the data-parallel training and tagging paths.
//!
//! Build with default features for the rayon versions and with
//! `--no-default-features` for the sequential baselines; the benchmark ids
//! carry the mode, so criterion keeps the two series side by side:
//!
//! ```text
//! cargo bench -p cmlid
//! cargo bench -p cmlid --no-default-features
//! ```

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use cmlid::corpus::{parse_corpus, Corpus};
use cmlid::crf::{nll_and_gradient, train_crf};
use cmlid::features::{CrfFeatureConfig, TfIdfMode};
use cmlid::tagger::ModelSpec;

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn sample_corpus() -> Corpus {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/sample_corpus.tsv");
    let text = std::fs::read_to_string(path).expect("bundled sample corpus");
    parse_corpus(&text).expect("sample corpus parses")
}

fn bench_rf_train(c: &mut Criterion) {
    let corpus = sample_corpus();
    let spec = ModelSpec::RandomForest { n_trees: 50, seed: 42 };
    c.bench_function(&format!("rf_train_50_trees/{MODE}"), |b| {
        b.iter(|| black_box(spec.train(&corpus).unwrap()));
    });
}

fn bench_crf_gradient(c: &mut Criterion) {
    let corpus = sample_corpus();
    let model = train_crf(&corpus, CrfFeatureConfig::default(), 0.1, 0, 1e-6).unwrap();
    c.bench_function(&format!("crf_gradient_full_corpus/{MODE}"), |b| {
        b.iter(|| black_box(nll_and_gradient(&model, corpus.sentences()).unwrap()));
    });
}

fn bench_tagging(c: &mut Criterion) {
    let corpus = sample_corpus();
    let hmm = ModelSpec::Hmm { k_trans: 0.1, k_emit: 0.1 }.train(&corpus).unwrap();
    c.bench_function(&format!("hmm_tag_corpus/{MODE}"), |b| {
        b.iter(|| black_box(hmm.tag_corpus(&corpus)));
    });
    let nb = ModelSpec::NaiveBayes { alpha: 1.0, mode: TfIdfMode::CharTrigram }
        .train(&corpus)
        .unwrap();
    c.bench_function(&format!("nb_tag_corpus/{MODE}"), |b| {
        b.iter(|| black_box(nb.tag_corpus(&corpus)));
    });
}

fn config() -> Criterion {
    Criterion::default().sample_size(10).measurement_time(Duration::from_secs(3))
}

criterion_group! {
    name = benches;
    config = config();
    targets = bench_rf_train, bench_crf_gradient, bench_tagging
}
criterion_main!(benches);
