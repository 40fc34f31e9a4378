use prstrata::dieudonne::f_one_levels;
use prstrata::umodule::{monomial, row_add, row_scale};
use prstrata::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(k: &FieldCtx, a: u32, b: u32) -> Subspace {
    let v = row_add(k, &row_scale(k, &monomial(k, 4, 0, 3), &Scalar::Fin(a)), &row_scale(k, &monomial(k, 4, 1, 3), &Scalar::Fin(b)));
    Subspace::span(k, 4, &[v]).unwrap()
}

#[test]
fn normal_form_image_line_of_the_printed_chain() {
    for (q, c) in [(2, 1), (3, 1), (3, 2)] {
        let k = FieldCtx::prime(q).unwrap();
        for m in [2, 3] {
            let w = ag_witness(m, &Scalar::Fin(c), &k).unwrap();
            assert_eq!(f_one(&w.model, &w.chain).unwrap(), line(&k, 1, 0));
            assert_eq!(w.f_one, line(&k, 1, 0));
            assert_eq!(w.chain.levels()[0], line(&k, 0, 1));
            assert_eq!(w.label.linear(), prstrata::invariants::StratumLabel::new(HodgePair { i: 2, j: 2 }, [2, 3, 4]));
            assert!(!w.m1_vanishes);
            assert!(!m1_vanishes(&w.model, &w.chain).unwrap());
        }
    }
}

#[test]
fn image_line_depends_on_the_third_level() {
    let k = FieldCtx::prime(2).unwrap();
    let w = ag_witness(2, &k.one(), &k).unwrap();
    let m = |c, d| monomial(&k, 4, c, d);
    let other = PRChain::from_module_generators(
        &k,
        4,
        &[vec![m(0, 3)], vec![m(0, 3), m(1, 3)], vec![m(0, 2), m(1, 3)], vec![m(0, 2), m(1, 2)]],
    )
    .unwrap();
    assert_eq!(f_one(&w.model, &other).unwrap(), line(&k, 1, 1));
    assert!(!m1_vanishes(&w.model, &other).unwrap());
}

#[test]
fn fixed_point_witness() {
    for q in [2, 3] {
        let k = FieldCtx::prime(q).unwrap();
        let w = ag_fixed_point_witness(3, &k.one(), &k).unwrap();
        assert!(w.m1_vanishes);
        assert_eq!(w.f_one, w.chain.levels()[0]);
        assert_eq!(w.f_one, line(&k, 1, 1));
        assert_eq!(w.label.m1, M1::Zero);
        assert_eq!(w.label.t.iter().copied().collect::<Vec<_>>(), vec![2, 3, 4]);
    }
    let k = FieldCtx::prime(2).unwrap();
    assert!(matches!(ag_fixed_point_witness(2, &k.one(), &k), Err(Error::NotFound { .. })));
}

#[test]
fn zero_model_is_degenerate() {
    let k = FieldCtx::prime(2).unwrap();
    let w = ag_witness(2, &k.one(), &k).unwrap();
    let z = DieudonneModel::zero(&k, 4);
    assert_eq!(f_one(&z, &w.chain).unwrap().dim(), 0);
    assert!(matches!(m1_vanishes(&z, &w.chain), Err(Error::DegenerateF(_))));
    assert_eq!(stratum_label(&w.chain, Some(&z)).unwrap().m1, M1::Unknown);
}

#[test]
fn normal_form_arguments_are_checked() {
    let k = FieldCtx::prime(2).unwrap();
    assert!(matches!(ag_witness(1, &k.one(), &k), Err(Error::Precondition(_))));
    assert!(matches!(ag_witness(2, &k.zero(), &k), Err(Error::Precondition(_))));
    assert!(matches!(ag_fixed_point_witness(1, &k.one(), &k), Err(Error::Precondition(_))));
    let other = FieldCtx::prime(3).unwrap();
    let w = ag_witness(2, &k.one(), &k).unwrap();
    let chain3 = standard_free_chain(&other, 4);
    assert_eq!(f_one(&w.model, &chain3), Err(Error::ContextMismatch));
}

#[test]
fn models_round_trip_through_json() {
    let k = FieldCtx::with_order(4).unwrap();
    let model = DieudonneModel::normal_form(&k, 4, 3, &Scalar::Fin(2)).unwrap();
    assert_eq!(DieudonneModel::from_json(&model.to_json()).unwrap(), model);
}

fn contexts() -> Vec<FieldCtx> {
    let mut out = vec![];
    for q in [2, 3, 4, 9] {
        let k = FieldCtx::with_order(q).unwrap();
        out.push(k.rational_t());
        out.push(k.truncated_t(8).unwrap());
        out.push(k);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn action_is_semilinear(seed in any::<u64>(), ci in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ks = contexts();
        let k = &ks[ci];
        let base = k.base();
        let q = base.q();
        let mut model = DieudonneModel::normal_form(&base, 4, rng.gen_range(2..5), &Scalar::Fin(rng.gen_range(1..q))).unwrap();
        if !k.is_finite() {
            model = model.lift_to(k).unwrap();
        }
        let terms = if k.is_finite() { 1 } else { 3 };
        let rand_scalar = |rng: &mut ChaCha8Rng| {
            let coeffs: Vec<u32> = (0..terms).map(|_| rng.gen_range(0..q)).collect();
            k.from_poly(&coeffs).unwrap()
        };
        let v: Row = (0..8).map(|_| rand_scalar(&mut rng)).collect();
        let w: Row = (0..8).map(|_| rand_scalar(&mut rng)).collect();
        let c = rand_scalar(&mut rng);
        prop_assert_eq!(model.apply(&row_scale(k, &v, &c)), row_scale(k, &model.apply(&v), &k.frobenius(&c)));
        prop_assert_eq!(model.apply(&row_add(k, &v, &w)), row_add(k, &model.apply(&v), &model.apply(&w)));
    }

    #[test]
    fn image_line_commutes_with_base_change(idx in 0usize..10_000, m in 2usize..5, q in prop::sample::select(vec![2u32, 3])) {
        let k = FieldCtx::prime(q).unwrap();
        let kt = k.rational_t();
        let chains = enumerate_chains(4, &k).unwrap();
        let c = &chains[idx % chains.len()];
        let model = DieudonneModel::normal_form(&k, 4, m, &k.one()).unwrap();
        let lifted: Vec<Subspace> = c.levels().iter().map(|w| w.lift_to(&kt).unwrap()).collect();
        let lhs = f_one_levels(&model.lift_to(&kt).unwrap(), &lifted).unwrap();
        prop_assert_eq!(lhs, f_one(&model, c).unwrap().lift_to(&kt).unwrap());
    }
}
