use criterion::{criterion_group, criterion_main, Criterion};
use gkmloc::gkm::{build_flag_sl, build_projective_space};
use gkmloc::localization::{Executor, Localizer, TwistMode};

fn sum_over_trees(c: &mut Criterion) {
    let cases = [("p1_d3", build_projective_space(1), 0, vec![3]), ("p2_d2", build_projective_space(2), 0, vec![2]), ("sl3_11", build_flag_sl(3), 0, vec![1, 1])];
    let mut group = c.benchmark_group("sum_over_trees");
    group.sample_size(10);
    for (name, g, root, degree) in &cases {
        let loc = Localizer::new(g, TwistMode::Cotangent).unwrap();
        for (label, exec) in [("sequential", Executor::Sequential), ("parallel", Executor::Parallel(0))] {
            group.bench_function(format!("{name}/{label}"), |b| b.iter(|| loc.sum_over_trees(*root, degree, exec).unwrap()));
        }
    }
    group.finish();
}

criterion_group!(benches, sum_over_trees);
criterion_main!(benches);
