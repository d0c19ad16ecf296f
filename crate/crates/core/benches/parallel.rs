use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use scl_core::harness::oracle;
use scl_core::marking::{Marking, Mode};
use scl_core::parallel::Exec;
use scl_core::qm;
use scl_core::search::CommutatorTable;
use scl_core::word::FreeGroup;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn window_check(c: &mut Criterion) {
    let combos: Vec<_> = qm::default_certificates(2).iter().map(|c| c.combination().clone()).collect();
    let refs: Vec<_> = combos.iter().collect();
    let mut g = c.benchmark_group("defect_window_check");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, refs.len()), |b| {
            b.iter(|| qm::defect_window_check_batch(&refs, 2, exec).unwrap())
        });
    }
    g.finish();
}

fn commutator_table(c: &mut Criterion) {
    let m = Marking::full_abelianization(2).unwrap();
    let mut g = c.benchmark_group("commutator_table");
    for gen_len in [4, 5] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, gen_len), &gen_len, |b, &l| {
                b.iter(|| CommutatorTable::build(&m, Mode::Mixed, l, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn lemma_sweep(c: &mut Criterion) {
    let m = Marking::new(FreeGroup::new(2).unwrap(), vec![vec![1, 0]]).unwrap();
    let mut g = c.benchmark_group("lemma_sweep");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| oracle::lemma_sweep(&m, 3, 1, oracle::default_conj_radius, exec)));
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(5));
    targets = window_check, commutator_table, lemma_sweep
}
criterion_main!(benches);
