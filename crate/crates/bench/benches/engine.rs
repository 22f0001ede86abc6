use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use igcs_core::chevalley::WeylBasis;
use igcs_core::forms::{closed_two_forms, RegularSubalgebra};
use igcs_core::real_forms::{sigma_sl_quaternionic, sigma_so_lorentz};
use igcs_core::root_system::{Family, RootSystem};
use igcs_core::scalar::Scalar;
use igcs_core::sigma_systems::{enumerate_sigma_positive, sigma_commuting_weyl, transform_group};

fn basis(fam: Family, rank: usize) -> Arc<WeylBasis> {
    Arc::new(WeylBasis::build(Arc::new(RootSystem::build(fam, rank))))
}

fn full_cartan(wb: &WeylBasis) -> Vec<Vec<Scalar>> {
    wb.rs
        .cartan_basis
        .iter()
        .map(|v| v.iter().map(|r| Scalar::from_rat(r.clone())).collect())
        .collect()
}

fn bench_weyl_basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("weyl_basis");
    g.sample_size(10);
    for (fam, rank, name) in [(Family::A, 5, "a5"), (Family::D, 4, "d4")] {
        let rs = Arc::new(RootSystem::build(fam, rank));
        g.bench_function(name, |b| {
            b.iter_batched(
                || rs.clone(),
                |rs| WeylBasis::build(rs),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

fn bench_sigma_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("sigma_positive");
    g.sample_size(10);
    {
        let wb = basis(Family::A, 5);
        let sp = sigma_sl_quaternionic(&wb).root_perm();
        g.bench_function("enumerate_a5", |b| {
            b.iter(|| enumerate_sigma_positive(&wb.rs, &sp))
        });
    }
    {
        let wb = basis(Family::D, 4);
        let sp = sigma_so_lorentz(&wb).root_perm();
        g.bench_function("transform_group_d4", |b| {
            b.iter(|| {
                let ws = sigma_commuting_weyl(&wb.rs, &sp, 200_000);
                transform_group(&wb.rs, &sp, &ws)
            })
        });
    }
    g.finish();
}

fn bench_closed_form_solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("closed_two_forms");
    g.sample_size(10);
    for (fam, rank, name) in [(Family::A, 3, "a3_full"), (Family::D, 3, "d3_full")] {
        let wb = basis(fam, rank);
        let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), wb.rs.positive_set()).unwrap();
        g.bench_function(name, |b| b.iter(|| closed_two_forms(&k, 200).unwrap()));
    }
    g.finish();
}

criterion_group!(
    benches,
    bench_weyl_basis,
    bench_sigma_enumeration,
    bench_closed_form_solver
);
criterion_main!(benches);
