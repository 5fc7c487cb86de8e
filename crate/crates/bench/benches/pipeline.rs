use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fragdec_core::automata::Regex;
use fragdec_core::category::{check_knast, derived_category};
use fragdec_core::decide::{decide, DecideOptions};
use fragdec_core::semigroup::check_identity;
use fragdec_core::{Alphabet, Dfa, IdentitySet, Limits, StabilityRecord, SyntacticPresentation};

/// `(a^n)* a b (b^n)*`: the running example for `n = 2`, with the
/// stability index growing with `n`.
fn family(n: usize) -> Dfa {
    let re = format!("({})*ab({})*", "a".repeat(n), "b".repeat(n));
    Regex::parse(&re)
        .unwrap()
        .to_dfa(Some(&Alphabet::from_chars("ab").unwrap()))
        .unwrap()
}

const SIZES: [usize; 3] = [2, 3, 4];

fn syntactic_monoid(c: &mut Criterion) {
    let mut group = c.benchmark_group("syntactic_monoid");
    for n in SIZES {
        let dfa = family(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &dfa, |b, dfa| {
            b.iter(|| {
                SyntacticPresentation::syntactic_morphism(black_box(dfa), &Limits::default())
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn stability(c: &mut Criterion) {
    let mut group = c.benchmark_group("stability_index");
    for n in SIZES {
        let m = SyntacticPresentation::syntactic_morphism(&family(n), &Limits::default()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| StabilityRecord::compute(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn knast(c: &mut Criterion) {
    let mut group = c.benchmark_group("knast_on_derived_category");
    for n in SIZES {
        let m = Arc::new(
            SyntacticPresentation::syntactic_morphism(&family(n), &Limits::default()).unwrap(),
        );
        let s = StabilityRecord::compute(&m).unwrap().index() as u32;
        let cat = derived_category(&m, 2 * s).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &cat, |b, cat| {
            b.iter(|| check_knast(black_box(cat)))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("decide_bs1");
    for n in SIZES {
        let dfa = family(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &dfa, |b, dfa| {
            b.iter(|| decide(black_box(dfa), "BS1[<,MOD]", &DecideOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn identities(c: &mut Criterion) {
    let mut group = c.benchmark_group("identity_check");
    for name in ["A", "DA", "FO[+1]"] {
        let ids = IdentitySet::builtin(name).unwrap();
        let m = SyntacticPresentation::syntactic_morphism(&family(3), &Limits::default()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &ids, |b, ids| {
            b.iter(|| check_identity(&m, black_box(ids), None, &Limits::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, syntactic_monoid, stability, knast, identities);
criterion_main!(benches);
