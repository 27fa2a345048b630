//! Data-parallel against sequential evaluation on rescue-sized fields.
//!
//! Without the `parallel` feature both modes run the sequential path, so the
//! two series should coincide.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use smuc::eval::{Engine, Environment, ExecMode};
use smuc::formula::parse_formula;
use smuc::program::{parse_program, run, DEFAULT_FUEL};
use smuc::rescue::{gen_scenario, run_rescue};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn gradient(c: &mut Criterion) {
    let formula = parse_formula("mu z. min1(source, <out dst:min1> z)").unwrap();
    let stage = parse_program("source <- source(victim)").unwrap();
    let mut group = c.benchmark_group("gradient");
    for landmarks in [250, 1000, 4000] {
        let mut field = gen_scenario(landmarks, &[1; 5], 10, 1).unwrap().field;
        run(&Engine::new(), &stage, &mut field, DEFAULT_FUEL).unwrap();
        for (name, mode) in MODES {
            let engine = Engine::with_mode(mode);
            group.bench_with_input(BenchmarkId::new(name, landmarks), &field, |b, f| {
                b.iter(|| engine.eval(f, &Environment::new(), &formula).unwrap())
            });
        }
    }
    group.finish();
}

fn rescue(c: &mut Criterion) {
    let field = gen_scenario(1000, &[1; 5], 10, 1).unwrap().field;
    let mut group = c.benchmark_group("rescue_1000");
    group.sample_size(10);
    for (name, mode) in MODES {
        let engine = Engine::with_mode(mode);
        group.bench_function(name, |b| b.iter(|| run_rescue(&engine, &field, DEFAULT_FUEL).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, gradient, rescue);
criterion_main!(benches);
