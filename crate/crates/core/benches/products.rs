use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use borcherds::engine::{compute_product_with, naive_product_with, NaiveOptions, ProductOptions};
use borcherds::lattice::Index;
use borcherds::{parse_vvform, rat, Execution, FormalSeries, LatticeL0, TruncationFilter, VVForm};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

fn fixture(name: &str) -> VVForm {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    parse_vvform(&serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()).unwrap()
}

fn dense(lat: &Arc<LatticeL0>, n: i64, seed: i64) -> FormalSeries {
    let mut terms = Vec::new();
    for a in 0..n {
        for c in 0..n {
            for b in lat.vectors_up_to((a * c * lat.qden()) as i128) {
                let v = (a * 7 + c * 13 + b[0] * 3 + b[1] + seed).rem_euclid(11) - 5;
                terms.push((Index { a, c, b }, BigInt::from(v)));
            }
        }
    }
    FormalSeries::from_integer_terms(lat.clone(), terms)
}

fn convolution(c: &mut Criterion) {
    let lat = Arc::new(LatticeL0::hermitian_d3());
    let mut g = c.benchmark_group("convolution");
    for n in [6i64, 9] {
        let (x, y) = (dense(&lat, n, 1), dense(&lat, n, 2));
        let f = TruncationFilter::box_below(rat::int(n), rat::int(n));
        for exec in [Execution::Sequential, Execution::Parallel] {
            g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), n), &n, |b, _| {
                b.iter(|| x.multiply(&y, &f, exec))
            });
        }
    }
    g.finish();
}

fn products(c: &mut Criterion) {
    let f = fixture("phi45_input.json");
    let mut g = c.benchmark_group("phi45");
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    for big_b in [5i64, 6, 7] {
        for exec in [Execution::Sequential, Execution::Parallel] {
            g.bench_with_input(BenchmarkId::new(format!("log/{exec:?}"), big_b), &big_b, |b, &big_b| {
                b.iter(|| compute_product_with(&f, big_b, &ProductOptions { exec, cap_slack: 0 }).unwrap())
            });
        }
        if big_b <= 6 {
            g.bench_with_input(BenchmarkId::new("naive", big_b), &big_b, |b, &big_b| {
                b.iter(|| naive_product_with(&f, big_b, &NaiveOptions::default()).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, convolution, products);
criterion_main!(benches);
