use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tgrs_core::criteria::{check_so, is_mds};
use tgrs_core::{construct, Bounds, Construction, Field, Recipe};

fn build(text: &str) -> Construction {
    let v = serde_json::from_str(text).unwrap();
    construct(&Recipe::from_json(&v).unwrap(), &Bounds::default()).unwrap()
}

fn field(c: &mut Criterion) {
    let f = Field::new(7, 4).unwrap();
    let g = f.generator();
    c.bench_function("gf2401 mul chain", |b| {
        b.iter(|| {
            let mut x = g;
            for _ in 0..1000 {
                x = f.mul(black_box(x), g);
            }
            x
        })
    });
}

fn codes(c: &mut Criterion) {
    let bounds = Bounds::default();
    let block3 = build(include_str!("../../../recipes/block3.json"));
    let line2 = build(include_str!("../../../recipes/line2.json"));
    let g = block3.instance.generator();
    c.bench_function("rank 4x8", |b| b.iter(|| black_box(&g).rank()));
    let code = line2.instance.code().unwrap();
    c.bench_function("min distance [8,4] over GF(2^15)", |b| b.iter(|| code.min_distance(&bounds).unwrap()));
    c.bench_function("check_so block3", |b| b.iter(|| check_so(black_box(&block3.instance)).unwrap()));
    c.bench_function("is_mds block3", |b| b.iter(|| is_mds(black_box(&block3.instance), &bounds).unwrap()));
}

fn recipes(c: &mut Criterion) {
    let text = include_str!("../../../recipes/block2.json");
    let rec = Recipe::from_json(&serde_json::from_str(text).unwrap()).unwrap();
    c.bench_function("construct block2", |b| b.iter(|| construct(black_box(&rec), &Bounds::default()).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = field, codes, recipes
}
criterion_main!(benches);
