use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use heilbronn_core::arith::Prime;
use heilbronn_core::exec;
use heilbronn_core::fermat::lp_scan;
use heilbronn_core::group::build_gamma;
use heilbronn_core::heilbronn::{scan_bounds, DEFAULT_SCAN_CAP};
use heilbronn_core::spectral::{energy, ResidueSet};
use heilbronn_core::stepanov::verify_difference_lemma;

fn both<F: Fn() + Sync>(c: &mut Criterion, group: &str, param: u64, f: F) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_with_input(BenchmarkId::new("parallel", param), &param, |b, _| b.iter(&f));
    g.bench_with_input(BenchmarkId::new("sequential", param), &param, |b, _| {
        b.iter(|| exec::sequential(&f))
    });
    g.finish();
}

fn benches(c: &mut Criterion) {
    for q in [211u64, 503] {
        let p = Prime::new(q).unwrap();
        let set = ResidueSet::new(p.square(), build_gamma(p).elements().iter().copied()).unwrap();
        both(c, "dense_energy", q, || {
            black_box(energy(&set, &set).unwrap());
        });
    }
    for q in [503u64, 1009] {
        let p = Prime::new(q).unwrap();
        both(c, "scan_bounds", q, || {
            black_box(scan_bounds(p, DEFAULT_SCAN_CAP).unwrap());
        });
    }
    both(c, "lp_scan", 100_000, || {
        black_box(lp_scan(3, 100_000).unwrap());
    });
    let p = Prime::new(31).unwrap();
    both(c, "difference_lemma", 31, || {
        black_box(verify_difference_lemma(p, Some(20), 1).unwrap());
    });
}

criterion_group!(parallel, benches);
criterion_main!(parallel);
