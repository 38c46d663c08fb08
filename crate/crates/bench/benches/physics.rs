use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use spinfloquet::kernel::{memory_kernel_evolution, uniform_grid};
use spinfloquet::oracle::{monte_carlo_flip, quasienergies_from_monodromy, tdse_flip_probability, IntegratorSettings};
use spinfloquet::{decay_rate, flip_result, run_sweep, scenario_composition, solve_floquet, DecayModel, SpinState};
use spinfloquet_bench::{field, pulse, square_sweep};

fn closed_forms(c: &mut Criterion) {
    let f = field(0.75);
    let p = pulse(0.75, 2.0);
    let g = 0.5 / p.tau0();
    c.bench_function("solve_floquet", |b| b.iter(|| solve_floquet(black_box(&f))));
    c.bench_function("flip_result", |b| b.iter(|| flip_result(black_box(&p), black_box(g))));
    c.bench_function("scenario_composition", |b| {
        b.iter(|| scenario_composition(black_box(&p), black_box(g), SpinState::Minus))
    });
}

fn oracles(c: &mut Criterion) {
    let settings = IntegratorSettings::default();
    let mut group = c.benchmark_group("oracle");
    for x in [0.1, 1.0, 5.0] {
        group.bench_with_input(BenchmarkId::new("monodromy", x), &x, |b, &x| {
            b.iter(|| quasienergies_from_monodromy(&field(x), &settings).unwrap())
        });
    }
    let p = pulse(2.0, 30.0);
    group.bench_function("tdse_flip", |b| {
        b.iter(|| tdse_flip_probability(&p, SpinState::Minus, &settings).unwrap())
    });
    group.sample_size(10);
    group.bench_function("monte_carlo_1e5", |b| {
        b.iter(|| monte_carlo_flip(&p, 0.3 / p.tau0(), SpinState::Minus, 100_000, 1).unwrap())
    });
    group.finish();
}

fn memory_kernel(c: &mut Criterion) {
    let sol = solve_floquet(&field(0.75));
    let gamma = decay_rate(&sol, DecayModel::Radiative);
    let cutoff = 20.0 * sol.emission_parameters().0;
    let mut group = c.benchmark_group("memory_kernel");
    group.sample_size(10);
    for steps in [2_000usize, 8_000] {
        let grid = uniform_grid(3.0 / gamma * steps as f64 / 80_000.0, steps);
        group.bench_with_input(BenchmarkId::from_parameter(steps), &grid, |b, grid| {
            b.iter(|| memory_kernel_evolution(&sol, cutoff, grid).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for n in [32usize, 128] {
        let config = square_sweep(n);
        group.bench_with_input(BenchmarkId::from_parameter(n * n), &config, |b, config| {
            b.iter(|| run_sweep(config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_forms, oracles, memory_kernel, sweep);
criterion_main!(benches);
