use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pshcert_core::constructions::{build_rho_alpha, CoefficientSystem};
use pshcert_core::linalg::psd_certificate;
use pshcert_core::par;
use pshcert_core::sampling::{SampleSpec, Scheme};
use pshcert_core::scalar::rat;
use pshcert_core::wirtinger::{complex_hessian, ComplexCoordSpace};

fn psd_sampling(c: &mut Criterion) {
    let sys = CoefficientSystem::half_bound(rat(1, 4)).unwrap();
    let tgt = ComplexCoordSpace::target(2).unwrap();
    let h = complex_hessian(&build_rho_alpha(&sys, 2).unwrap(), &tgt).unwrap();
    let mut group = c.benchmark_group("psd_hess_rho_k2");
    group.sample_size(10);
    for count in [64usize, 256] {
        let samples = SampleSpec::ball(8, rat(1, 10), count, Scheme::Halton).unwrap().generate();
        let work = |_: usize, s: &pshcert_core::sampling::Sample| {
            psd_certificate(&h.eval(&s.point).unwrap(), true).passed()
        };
        group.bench_with_input(BenchmarkId::new("parallel", count), &samples, |b, xs| {
            b.iter(|| par::map_indexed(xs, work))
        });
        group.bench_with_input(BenchmarkId::new("sequential", count), &samples, |b, xs| {
            b.iter(|| par::map_indexed_seq(xs, work))
        });
    }
    group.finish();
}

criterion_group!(benches, psd_sampling);
criterion_main!(benches);
