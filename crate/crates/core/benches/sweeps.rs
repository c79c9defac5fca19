use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jumploci::arith::field::int;
use jumploci::par::Exec;
use jumploci::twisted::{presentation_to_complex, sweep, torsion_sweep_set, Presentation};

fn presented(gens: &[&str], rels: &[&str]) -> jumploci::twisted::LaurentComplex {
    let g: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
    let r = rels.iter().map(|w| Presentation::parse_word(&g, w).unwrap()).collect();
    presentation_to_complex(&Presentation::new(g, r).unwrap()).unwrap()
}

fn torsion_sweeps(c: &mut Criterion) {
    let cases = [
        ("pencil", presented(&["a", "b", "c"], &["[a,bc]", "[b,ca]"])),
        ("genus2", presented(&["a1", "b1", "a2", "b2"], &["[a1,b1][a2,b2]"])),
    ];
    let mut group = c.benchmark_group("torsion_sweep");
    group.sample_size(10);
    for (name, complex) in &cases {
        let chars = torsion_sweep_set(complex.n(), 400, 7);
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, name), &chars, |b, chars| {
                b.iter(|| sweep(black_box(complex), black_box(chars), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn resonance_sweeps(c: &mut Criterion) {
    use jumploci::cdga::{aomoto, betti_at, GradedAlgebra};
    let a = GradedAlgebra::exterior(
        &["g1", "g2", "g3", "g4", "g5"],
        &[(2, vec![((0, 1), int(1))]), (3, vec![((0, 2), int(1)), ((1, 2), int(-1))]), (4, vec![((0, 1), int(2))])],
    );
    let ac = aomoto(&a);
    let points: Vec<Vec<_>> = (0..200).map(|s| (0..ac.num_vars()).map(|j| int((s * 7 + j as i64 * 3) % 11 - 5)).collect()).collect();
    let mut group = c.benchmark_group("resonance_sweep");
    group.sample_size(10);
    for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_function(label, |b| b.iter(|| exec.map(black_box(&points), |p| betti_at(&ac, p).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, torsion_sweeps, resonance_sweeps);
criterion_main!(benches);
