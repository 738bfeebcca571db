//! End-to-end benchmarks: family construction, trimming, classification, and
//! the independent homology oracle.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use trimcx::dg::reduce_mod_m;
use trimcx::families::{build_family, FamilySpec};
use trimcx::tor::{classify, compute_profile, homology_algebra, koszul_homology_oracle, oracle_default_dmax};
use trimcx::trimming::trim;
use trimcx::FieldSpec;

fn f() -> FieldSpec {
    FieldSpec::default_fp()
}

fn bench_build(c: &mut Criterion) {
    c.bench_function("build pfaffian m=3 j=1", |b| {
        b.iter(|| build_family(f(), black_box(FamilySpec::Pfaffian { m: 3, j: 1 })).unwrap())
    });
    c.bench_function("build jp p=4", |b| {
        b.iter(|| build_family(f(), black_box(FamilySpec::Jp { p: 4 })).unwrap())
    });
}

fn bench_trim(c: &mut Criterion) {
    let fam = build_family(f(), FamilySpec::Pfaffian { m: 3, j: 1 }).unwrap();
    c.bench_function("trim pfaffian m=3 j=1 sigma={1,2}", |b| {
        b.iter(|| trim(&fam.complex, &fam.product, black_box(&[1, 2])).unwrap())
    });
}

fn bench_classify(c: &mut Criterion) {
    let fam = build_family(f(), FamilySpec::Jp { p: 4 }).unwrap();
    let tr = trim(&fam.complex, &fam.product, &[1]).unwrap();
    c.bench_function("classify trimmed jp p=4 sigma={1}", |b| {
        b.iter(|| {
            let h = homology_algebra(&reduce_mod_m(&tr.complex, &tr.product)).unwrap();
            let pr = compute_profile(&h);
            classify(&h, &pr, black_box(1))
        })
    });
    c.bench_function("oracle trimmed jp p=4 sigma={1}", |b| {
        b.iter(|| {
            koszul_homology_oracle(
                f(),
                3,
                black_box(&tr.generators),
                oracle_default_dmax(&tr.generators),
                1,
            )
            .unwrap()
        })
    });
}

fn bench_exactness(c: &mut Criterion) {
    let fam = build_family(f(), FamilySpec::Pfaffian { m: 3, j: 1 }).unwrap();
    let tr = trim(&fam.complex, &fam.product, &[1]).unwrap();
    c.bench_function("exactness trimmed pfaffian m=3 j=1 sigma={1}", |b| {
        b.iter(|| {
            assert!(tr.complex.exactness_check(black_box(tr.complex.default_dmax())).acyclic())
        })
    });
}

criterion_group!(benches, bench_build, bench_trim, bench_classify, bench_exactness);
criterion_main!(benches);
