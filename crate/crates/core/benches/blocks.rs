use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lieval::chevalley::build_chevalley;
use lieval::cohomology::{ce_complex_with, CEModule, WeightFilter};
use lieval::gradedlie::build_gbar;
use lieval::par::Mode;
use lieval::rootsys::RootSystem;

fn modes() -> Vec<Mode> {
    let mut out = vec![Mode::Sequential];
    if Mode::available() == Mode::Parallel {
        out.push(Mode::Parallel);
    }
    out
}

/// Assembly plus ranks of every weight block of `C^*(gbar)`.
fn weight_blocks(c: &mut Criterion) {
    let mut group = c.benchmark_group("gbar_all_weights");
    group.sample_size(10);
    for (name, p) in [("B2", 7u64), ("A3", 7)] {
        let ch = build_chevalley(&RootSystem::from_name(name).unwrap(), false).unwrap();
        let gb = build_gbar(&ch, p).unwrap();
        let module = CEModule::trivial(&gb.lie, p).unwrap();
        for mode in modes() {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), name), &mode, |b, &mode| {
                b.iter(|| {
                    let cx = ce_complex_with(&gb.lie, &module, &WeightFilter::All, mode).unwrap();
                    cx.block_cohomology(mode)
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, weight_blocks);
criterion_main!(benches);
