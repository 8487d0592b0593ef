use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cspiso_bench::{random_2affine, random_hard_graph, relabelled, rng, shuffled};
use cspiso_core::affine::{iso_2affine, normal_form};
use cspiso_core::gi::{reduce_gi_to_iso, Encoder, Graph, Reduction};
use cspiso_core::instances::{brute_force_iso, guided_iso_with, maximal_closure, ClosureFlags};
use cspiso_core::{builtin_set, detect_properties, Limits, TruthTable};

fn properties(c: &mut Criterion) {
    let tables: Vec<TruthTable> = (0u64..1 << 16)
        .step_by(97)
        .map(|code| TruthTable::from_fn(4, |r| code >> r & 1 == 1))
        .collect();
    c.bench_function("detect_properties/arity4", |b| {
        b.iter(|| {
            for t in &tables {
                black_box(detect_properties(t));
            }
        })
    });
}

fn affine(c: &mut Criterion) {
    let mut g = c.benchmark_group("affine");
    let lim = Limits::default();
    for n in [8usize, 64, 120] {
        let mut r = rng(n as u64);
        let s = random_2affine(&mut r, n, n);
        let u = shuffled(&mut r, &s);
        g.bench_with_input(BenchmarkId::new("normal_form", n), &s, |b, s| {
            b.iter(|| normal_form(black_box(s)).unwrap())
        });
        g.bench_with_input(
            BenchmarkId::new("iso_2affine", n),
            &(&s, &u),
            |b, (s, u)| b.iter(|| iso_2affine(s, u).unwrap()),
        );
        if n <= 8 {
            g.bench_with_input(
                BenchmarkId::new("brute_force_iso", n),
                &(&s, &u),
                |b, (s, u)| b.iter(|| brute_force_iso(s, u, &lim).unwrap()),
            );
        }
    }
    g.finish();
}

fn encoders(c: &mut Criterion) {
    let mut g = c.benchmark_group("encoders");
    g.sample_size(10);
    let lim = Limits::default();
    let mut r = rng(11);
    let graph = random_hard_graph(&mut r, 4, 0.5);
    let other = relabelled(&mut r, &graph);
    for e in Encoder::ALL {
        let (s, u) = (e.encode(&graph).unwrap(), e.encode(&other).unwrap());
        let basis = e.basis();
        g.bench_function(BenchmarkId::new("closure", e), |b| {
            b.iter(|| maximal_closure(&basis, s.universe(), ClosureFlags::PLAIN, &s, &lim).unwrap())
        });
        g.bench_function(BenchmarkId::new("guided_iso", e), |b| {
            b.iter(|| guided_iso_with(&s, &u, &basis, &lim).unwrap())
        });
    }
    g.finish();
}

fn reduction(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduce");
    g.sample_size(10);
    let lim = Limits::default();
    let (p, s) = (
        Graph::cycle(5),
        Graph::cycle(5).relabel(&[2, 4, 1, 3, 5]).unwrap(),
    );
    for name in ["or0", "one-in-three", "xor3"] {
        let cs = builtin_set(&[name]).unwrap();
        g.bench_function(BenchmarkId::new("pipeline", name), |b| {
            b.iter(|| reduce_gi_to_iso(&cs, &p, &s, Default::default(), &lim).unwrap())
        });
        let Reduction::Output(o) = reduce_gi_to_iso(&cs, &p, &s, Default::default(), &lim).unwrap()
        else {
            unreachable!()
        };
        let basis = o.iso_basis();
        g.bench_function(BenchmarkId::new("decide_output", name), |b| {
            b.iter(|| guided_iso_with(&o.left, &o.right, &basis, &lim).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, properties, affine, encoders, reduction);
criterion_main!(benches);
