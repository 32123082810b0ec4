use num::Zero;
use proptest::prelude::*;

use fockyang::affine::{t_infinity_inverse_state, t_infinity_state};
use fockyang::coeff::{rat, specialize};
use fockyang::combinatorics::{ChargedMultipartition, Partition};
use fockyang::verify::{standard_windows, RelationCheck, Window};
use fockyang::wedge::{charge_compose, charge_decompose};
use fockyang::{
    AffineModel, DahaConfig, Dims, Eval, FockState, FockVec, GeneratorId, Kind, ParamPoly, Params, Rational, Scalar,
    Session,
};

fn symbolic_model(n: usize, l: usize) -> AffineModel<ParamPoly> {
    AffineModel::new(Dims::new(n, l).unwrap(), DahaConfig::new(l, Params::symbolic(vec![ParamPoly::zero(); l])))
}

fn partition_strategy(max: usize) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(1u32..=4, 0..=max).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn generator_strategy(n: usize, max_mode: u32) -> impl Strategy<Value = GeneratorId> {
    (0..3usize, 0..n, 0..=max_mode).prop_map(|(k, i, r)| {
        let kind = [Kind::Plus, Kind::Minus, Kind::Cartan][k];
        GeneratorId::new(kind, i, r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bijection_round_trips(p in partition_strategy(5), m in -4i64..=4, nl in 0usize..3) {
        let (n, l) = [(3, 1), (3, 2), (4, 2)][nl];
        let dims = Dims::new(n, l).unwrap();
        let st = FockState::new(p, m);
        let lc = charge_decompose(&dims, &st);
        prop_assert_eq!(lc.total_charge(), m);
        prop_assert_eq!(charge_compose(&dims, &lc).unwrap(), st);
    }

    #[test]
    fn t_infinity_round_trips(p in partition_strategy(4), m in -3i64..=3, l in 1usize..=2) {
        let dims = Dims::new(3, l).unwrap();
        let st = FockState::new(p, m);
        let (s, img) = t_infinity_state(&dims, &st);
        prop_assert_eq!(img.charge, m + l as i64);
        let (s2, back) = t_infinity_inverse_state(&dims, &img).unwrap();
        prop_assert_eq!(back, st);
        prop_assert_eq!(s * s2, 1);
    }

    #[test]
    fn generators_preserve_charge_vector(a in partition_strategy(2), b in partition_strategy(1), g in generator_strategy(3, 1)) {
        let dims = Dims::new(3, 2).unwrap();
        let lc = ChargedMultipartition::new(vec![a, b], vec![-1, 1]).unwrap();
        let st = charge_compose(&dims, &lc).unwrap();
        let out = symbolic_model(3, 2).act(g, &FockVec::basis(st)).unwrap();
        for (s, _) in out.iter() {
            prop_assert_eq!(&charge_decompose(&dims, s).charges, &lc.charges);
        }
    }

    #[test]
    fn sampled_action_is_specialized_symbolic_action(
        p in partition_strategy(2),
        g in generator_strategy(3, 1),
        tn in -9i64..=9, cn in -9i64..=9,
    ) {
        let (t, c) = (rat(tn, 7), rat(cn, 11));
        let dims = Dims::new(3, 1).unwrap();
        let st = FockState::new(p, 0);
        let sym = symbolic_model(3, 1).act(g, &FockVec::basis(st.clone())).unwrap();
        let params = Params::symbolic(vec![ParamPoly::zero()]).specialize(&t, &c);
        let num = AffineModel::new(dims, DahaConfig::new(1, params)).act(g, &FockVec::basis(st)).unwrap();
        let mut specialized: FockVec<Rational> = FockVec::new();
        for (s, q) in sym.iter() {
            specialized.add_term(s.clone(), specialize(q, &t, &c));
        }
        prop_assert_eq!(specialized, num);
    }
}

#[test]
fn raising_operators_kill_the_vacuum() {
    for w in standard_windows(0) {
        let dims = w.dims().unwrap();
        let m = symbolic_model(w.n, w.l);
        let vac = charge_compose(&dims, &ChargedMultipartition::vacuum(&w.charges)).unwrap();
        for i in 0..w.n {
            for r in 0..=2 {
                let out = m.act(GeneratorId::plus(i, r), &FockVec::basis(vac.clone())).unwrap();
                assert!(out.is_zero(), "X+_{{{i},{r}}} on {:?}", w.charges);
            }
        }
    }
}

#[test]
fn vacuum_is_an_eigenvector_of_the_cartan_currents() {
    for w in standard_windows(0) {
        let dims = w.dims().unwrap();
        let m = symbolic_model(w.n, w.l);
        let vac = charge_compose(&dims, &ChargedMultipartition::vacuum(&w.charges)).unwrap();
        for i in 0..w.n {
            for r in 0..=2 {
                let out = m.act(GeneratorId::cartan(i, r), &FockVec::basis(vac.clone())).unwrap();
                assert!(out.keys().all(|s| *s == vac), "H_{{{i},{r}}} on {:?}", w.charges);
            }
        }
    }
}

#[test]
fn vacuum_eigenvalues() {
    // regression values at N = 3, nu = 0; each H_{i,r} eigenvalue is a_i^r when H_{i,0} = 1
    let (t, c) = (ParamPoly::t(), ParamPoly::c());
    let cases = [
        (vec![0], [t.scaled(&rat(1, 2)), ParamPoly::zero(), ParamPoly::zero()], [1, 0, 0]),
        (vec![-1, 1], [ParamPoly::zero(), t.clone() - c.scaled(&rat(3, 4)), c.scaled(&rat(3, 4))], [0, 1, 1]),
    ];
    for (charges, a, h0) in cases {
        let l = charges.len();
        let dims = Dims::new(3, l).unwrap();
        let m = symbolic_model(3, l);
        let vac = charge_compose(&dims, &ChargedMultipartition::vacuum(&charges)).unwrap();
        for i in 0..3 {
            let mut want = ParamPoly::constant(rat(h0[i], 1));
            for r in 0..=2 {
                let got = m.act(GeneratorId::cartan(i, r), &FockVec::basis(vac.clone())).unwrap();
                assert_eq!(got.get(&vac).cloned().unwrap_or_else(ParamPoly::zero), want, "H_{{{i},{r}}} on {charges:?}");
                want = want * &a[i];
            }
        }
    }
}

#[test]
fn higher_modes_are_consistent_over_all_splittings() {
    let session = Session::default();
    for w in [Window::new(3, 1, vec![0], 2), Window::new(3, 2, vec![-1, 1], 2)] {
        for i in 1..3 {
            for total in 0..=3u32 {
                for r in 0..=total {
                    let rc = RelationCheck::new("Y2", &w, Eval::Sampled).nodes(&[i, i]).modes(&[r, total - r]);
                    let rep = session.run_check(&rc);
                    assert!(rep.passed(), "{rep:?}");
                }
            }
        }
    }
}

#[test]
fn stabilization_at_mode_two() {
    let session = Session::default();
    for w in standard_windows(2) {
        for i in 1..3 {
            for kind in [Kind::Plus, Kind::Minus, Kind::Cartan] {
                let rc = RelationCheck::new("STAB", &w, Eval::Symbolic).nodes(&[i]).modes(&[2]).kind(kind);
                let rep = session.run_check(&rc);
                assert!(rep.passed(), "{rep:?}");
            }
        }
    }
}

#[test]
fn t_sign_mutation_breaks_the_affine_family() {
    let session = Session::new(fockyang::NuSpec::default(), Some(fockyang::Mutation::TSign));
    let w = Window::new(3, 2, vec![-1, 1], 2);
    let failed = fockyang::verify::affine_relation_checks(&w, Eval::Sampled, 1)
        .iter()
        .map(|rc| session.run_check(rc))
        .filter(|r| !r.passed())
        .count();
    assert!(failed > 0);
}

#[test]
fn rank_four_relations_sampled() {
    let session = Session::default();
    let w = Window::new(4, 2, vec![0, 1], 1);
    let mut checks = fockyang::verify::finite_relation_checks(&w, Eval::Sampled, 1);
    checks.extend(fockyang::verify::affine_relation_checks(&w, Eval::Sampled, 1));
    let rep = session.run_all(&checks, true);
    assert!(rep.all_passed(), "{:?}", rep.failures().next());
}
