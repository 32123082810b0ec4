use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use fockyang::combinatorics::{ChargedMultipartition, Partition};
use fockyang::daha::{apply_y, divided_difference, PolyTensor};
use fockyang::verify::{RelationCheck, Window};
use fockyang::wedge::charge_compose;
use fockyang::{AffineModel, DahaConfig, Dims, Eval, FockVec, GeneratorId, ParamPoly, Params, Session};

fn params(l: usize) -> Params<ParamPoly> {
    Params::symbolic(vec![ParamPoly::default(); l])
}

fn state(dims: &Dims, parts: &[&[u32]], charges: &[i64]) -> fockyang::FockState {
    let comps = parts.iter().map(|p| Partition::new(p.to_vec()).unwrap()).collect();
    charge_compose(dims, &ChargedMultipartition::new(comps, charges.to_vec()).unwrap()).unwrap()
}

fn daha(c: &mut Criterion) {
    c.bench_function("divided_difference m=(-4,4)", |b| b.iter(|| divided_difference(0, 1, black_box(&[-4, 4]))));
    let cfg = DahaConfig::new(2, params(2));
    let pt = PolyTensor::new(vec![2, -1, 0], vec![2, 1, 2]);
    c.bench_function("apply_y n=3 L=2", |b| b.iter(|| apply_y(1, black_box(&pt), &cfg)));
}

fn fock(c: &mut Criterion) {
    let dims = Dims::new(3, 2).unwrap();
    let st = state(&dims, &[&[2], &[1]], &[-1, 1]);
    let v = FockVec::basis(st.clone());
    c.bench_function("H_{1,1} on 3 boxes, N=3 L=2, uncached", |b| {
        b.iter(|| {
            let m = AffineModel::new(dims, DahaConfig::new(2, params(2)));
            m.act(GeneratorId::cartan(1, 1), black_box(&v)).unwrap()
        })
    });
    c.bench_function("X-_{0,1} on 3 boxes, N=3 L=2, uncached", |b| {
        b.iter(|| {
            let m = AffineModel::new(dims, DahaConfig::new(2, params(2)));
            m.act(GeneratorId::minus(0, 1), black_box(&v)).unwrap()
        })
    });
}

fn relations(c: &mut Criterion) {
    let w = Window::new(3, 2, vec![-1, 1], 2);
    let rc = RelationCheck::new("Y6", &w, Eval::Sampled).nodes(&[1, 0]).modes(&[0, 0]);
    c.bench_function("Y6 check, <= 2 boxes, 3 sample points", |b| b.iter(|| Session::default().run_check(black_box(&rc))));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = daha, fock, relations
}
criterion_main!(benches);
