use prstrata::deformation::*;
use prstrata::invariants::linear_label;
use prstrata::umodule::monomial;
use prstrata::*;
use proptest::prelude::*;

fn f2() -> FieldCtx {
    FieldCtx::prime(2).unwrap()
}

fn seed() -> ModelWitness {
    let k = f2();
    ag_fixed_point_witness(3, &k.one(), &k).unwrap()
}

fn label(i: usize, j: usize, t: &[usize]) -> StratumLabel {
    StratumLabel::new(HodgePair { i, j }, t.iter().copied())
}

fn chains_with(e: usize, k: &FieldCtx, l: &StratumLabel, model: Option<&DieudonneModel>) -> Vec<PRChain> {
    enumerate_chains(e, k).unwrap().into_iter().filter(|c| stratum_label(c, model).unwrap() == *l).collect()
}

#[test]
fn hodge_raise_is_total_and_exact() {
    for q in [2, 3] {
        let k = FieldCtx::prime(q).unwrap();
        for e in 2..=4 {
            for c in enumerate_chains(e, &k).unwrap() {
                let lam = hodge(c.top()).unwrap();
                if lam.j == 0 {
                    assert!(matches!(hodge_raise(&c), Err(Error::NotDeformable(_))));
                    continue;
                }
                let (fam, trace) = hodge_raise(&c).unwrap();
                assert_eq!(fam.specialize(), c);
                assert_eq!(fam.specialize().key(), c.key());
                let g = fam.generic_label().unwrap();
                assert!(g.is_exact());
                assert_eq!(g.label.lambda, lam.raised().unwrap());
                trace.check(&fam).unwrap();
                assert!(fam.semicontinuity_audit().unwrap().ok);
            }
        }
    }
}

#[test]
fn hodge_raise_worked_example() {
    let k = f2();
    let kt = k.rational_t();
    let m = |c, d| monomial(&k, 3, c, d);
    let c = PRChain::from_generators(&k, 3, &[vec![m(1, 2)], vec![m(1, 2), m(0, 2)], vec![m(1, 2), m(0, 2), m(1, 1)]])
        .unwrap();
    let (fam, tr) = hodge_raise(&c).unwrap();
    assert_eq!(tr.k0, 2);
    assert_eq!(tr.j, vec![1]);
    let t = kt.t().unwrap();
    let lv = |r: &Row| laurent::LaurentVec::from_row(&kt, 3, r);
    assert_eq!(tr.deformed[0], lv(&m(0, 2)).add_scaled(&kt, &lv(&m(1, 1)), &t));
    assert_eq!(
        tr.deformed[1],
        lv(&m(1, 1)).add_scaled(&kt, &lv(&m(0, 1)), &t).add_scaled(&kt, &lv(&m(1, 0)), &kt.mul(&t, &t))
    );
    assert_eq!(fam.generic_label().unwrap().label.lambda, HodgePair { i: 3, j: 0 });
    let json = fam.to_json();
    assert_eq!(json["recipe"], "hodge-raise");
    assert!(json["trace"]["J"].is_array());
}

#[test]
fn linear_recipes_on_every_point() {
    let k = f2();
    for v in [LinearVariant::CollapseToM3Only, LinearVariant::RaiseWithinM3] {
        let pts = chains_with(4, &k, &v.source(), None);
        assert!(!pts.is_empty());
        for c in pts {
            let fam = linear_recipe(&c, v).unwrap();
            assert_eq!(fam.recipe(), v.name());
            assert_eq!(fam.specialize(), c);
            let g = fam.generic_label().unwrap();
            assert!(g.is_exact());
            assert_eq!(g.label.linear(), v.target());
            assert!(fam.semicontinuity_audit().unwrap().ok);
        }
    }
}

#[test]
fn linear_recipe_rejects_wrong_source() {
    let k = f2();
    let c = standard_free_chain(&k, 4);
    assert!(matches!(linear_recipe(&c, LinearVariant::RaiseWithinM3), Err(Error::Precondition(_))));
}

#[test]
fn pinned_recipes_keep_m1_zero() {
    let w = seed();
    let k = f2();
    let (fam, g) = pinned_recipe(&w.model, &w.chain, PinnedVariant::Collapse).unwrap();
    assert_eq!(fam.mode(), Mode::Truncated(DEFAULT_PRECISION));
    assert_eq!(g.label, label(2, 2, &[3]).with_m1(M1::Zero));
    assert!(!g.is_exact());
    assert!(fam.semicontinuity_audit().unwrap().ok);

    let c1 = chains_with(4, &k, &label(2, 2, &[3]).with_m1(M1::Zero), Some(&w.model));
    assert_eq!(c1.len(), 2);
    for c in &c1 {
        let (fam, g) = pinned_recipe(&w.model, c, PinnedVariant::Raise).unwrap();
        assert_eq!(g.label, label(3, 1, &[3]).with_m1(M1::Zero));
        assert_eq!(fam.specialize(), *c);
        assert!(fam.semicontinuity_audit().unwrap().ok);
    }
}

#[test]
fn pinned_move_third() {
    let w = seed();
    let k = f2();
    for (from, to) in [
        (label(2, 2, &[2, 3, 4]), label(2, 2, &[2, 4])),
        (label(3, 1, &[2, 3]), label(3, 1, &[2])),
    ] {
        let from = from.with_m1(M1::Zero);
        assert!(PinnedVariant::MoveThird.accepts(&from));
        assert_eq!(PinnedVariant::MoveThird.target(&from), to.clone().with_m1(M1::Zero));
        for c in chains_with(4, &k, &from, Some(&w.model)) {
            let (fam, g) = pinned_recipe(&w.model, &c, PinnedVariant::MoveThird).unwrap();
            assert_eq!(g.label, to.clone().with_m1(M1::Zero));
            assert!(fam.semicontinuity_audit().unwrap().ok);
        }
    }
}

#[test]
fn pinned_recipe_needs_m1_zero() {
    let w = seed();
    let k = f2();
    let c = chains_with(4, &k, &label(2, 2, &[2, 3, 4]).with_m1(M1::NonZero), Some(&w.model)).remove(0);
    assert!(matches!(pinned_recipe(&w.model, &c, PinnedVariant::Collapse), Err(Error::Precondition(_))));
}

#[test]
fn invert_m1_on_the_seed() {
    let w = seed();
    let (fam, g) = invert_m1(&w.model, &w.chain).unwrap();
    assert_eq!(g.label, label(2, 2, &[2, 3, 4]).with_m1(M1::NonZero));
    match &g.certification {
        Certification::Bounded(b) => {
            assert_eq!(b.m1_nonzero_order, Some(2));
            assert!(b.group_translate);
        }
        Certification::Exact => panic!("translate is certified modulo t^N"),
    }
    assert!(fam.relations().contains(&Relation::GroupTranslate));
    assert!(fam.semicontinuity_audit().unwrap().ok);
}

#[test]
fn invert_m1_preconditions() {
    let w = seed();
    let k = f2();
    let c = chains_with(4, &k, &label(2, 2, &[2, 3, 4]).with_m1(M1::NonZero), Some(&w.model)).remove(0);
    assert!(matches!(invert_m1(&w.model, &c), Err(Error::Precondition(_))));
    let zero = DieudonneModel::zero(&k, 4);
    assert!(matches!(invert_m1(&zero, &w.chain), Err(Error::DegenerateF(_))));
}

#[test]
fn pinned_recipe_rejects_a_zero_model() {
    let w = seed();
    let zero = DieudonneModel::zero(&f2(), 4);
    assert!(matches!(pinned_recipe(&zero, &w.chain, PinnedVariant::Collapse), Err(Error::DegenerateF(_))));
}

#[test]
fn invert_m1_on_every_pinned_point() {
    let w = seed();
    let k = f2();
    let mut seen = 0;
    for c in enumerate_chains(4, &k).unwrap() {
        let l = stratum_label(&c, Some(&w.model)).unwrap();
        if l.m1 != M1::Zero {
            continue;
        }
        seen += 1;
        let (fam, g) = invert_m1(&w.model, &c).unwrap();
        assert_eq!(fam.specialize(), c);
        assert_eq!(g.label, l.clone().with_m1(M1::NonZero));
        assert!(fam.semicontinuity_audit().unwrap().ok);
    }
    assert!(seen > 0);
}

#[test]
fn search_finds_documented_witnesses() {
    let k = f2();
    for (from, to) in [
        (label(3, 1, &[2, 3]), label(3, 1, &[3])),
        (label(2, 2, &[2, 3, 4]), label(2, 2, &[2, 4])),
    ] {
        for c in chains_with(4, &k, &from, None) {
            let fam = search_witness(&c, &to, DEFAULT_SEARCH_BUDGET).unwrap();
            assert_eq!(fam.recipe(), "search");
            assert_eq!(fam.specialize(), c);
            assert_eq!(fam.generic_label().unwrap().label.linear(), to);
            assert!(fam.semicontinuity_audit().unwrap().ok);
        }
    }
}

#[test]
fn search_rejects_ill_ordered_targets() {
    let k = f2();
    let c = chains_with(4, &k, &label(3, 1, &[3]), None).remove(0);
    assert!(matches!(search_witness(&c, &label(2, 2, &[2, 3, 4]), 100), Err(Error::IllOrderedTarget)));
    assert!(matches!(search_witness(&c, &label(3, 1, &[3]), 100), Err(Error::IllOrderedTarget)));
}

#[test]
fn search_budget_is_respected() {
    let k = f2();
    let c = chains_with(4, &k, &label(3, 1, &[2, 3]), None).remove(0);
    assert!(matches!(search_witness(&c, &label(3, 1, &[3]), 0), Err(Error::NotFound { tried: 0 })));
}

#[test]
fn families_round_trip_through_json() {
    let w = seed();
    let (fam, _) = invert_m1(&w.model, &w.chain).unwrap();
    let back = FamilyChain::from_json(&fam.to_json()).unwrap();
    assert_eq!(back.specialize(), fam.specialize());
    assert_eq!(back.generic_label().unwrap().label, fam.generic_label().unwrap().label);

    let k = f2();
    let c = chains_with(4, &k, &label(2, 2, &[3]), None).remove(0);
    let fam = linear_recipe(&c, LinearVariant::RaiseWithinM3).unwrap();
    let back = FamilyChain::from_json(&fam.to_json()).unwrap();
    assert_eq!(back.generic_label().unwrap(), fam.generic_label().unwrap());
    assert_eq!(back.recipe(), "linear-raise");
}

#[test]
fn constant_family_keeps_its_label() {
    let k = f2();
    for c in enumerate_chains(3, &k).unwrap() {
        let fam = FamilyChain::constant(&c).unwrap();
        assert_eq!(fam.generic_label().unwrap().label, linear_label(c.levels()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn raised_families_generize(q in prop::sample::select(vec![2u32, 3, 4]), idx in 0usize..10_000) {
        let k = FieldCtx::with_order(q).unwrap();
        let chains = enumerate_chains(3, &k).unwrap();
        let c = &chains[idx % chains.len()];
        let lam = hodge(c.top()).unwrap();
        prop_assume!(lam.j > 0);
        let (fam, _) = hodge_raise(c).unwrap();
        let audit = fam.semicontinuity_audit().unwrap();
        prop_assert!(audit.ok);
        prop_assert!(audit.special.t.is_superset(&audit.generic.t));
        let back = FamilyChain::from_json(&fam.to_json()).unwrap();
        prop_assert_eq!(back.specialize(), c.clone());
    }

    #[test]
    fn saturation_specializes_to_a_u_stable_limit(idx in 0usize..10_000, shift in 1usize..3) {
        let k = f2();
        let chains = enumerate_chains(3, &k).unwrap();
        let c = &chains[idx % chains.len()];
        let kt = k.rational_t();
        let tk = kt.t_pow(shift).unwrap();
        let rows: Vec<Row> = c.top().basis().iter().map(|r| {
            let lifted = prstrata::umodule::row_lift(&kt, r);
            lifted.iter().map(|x| kt.mul(x, &tk)).collect()
        }).collect();
        let w = Subspace::span(&kt, 3, &rows).unwrap();
        let limit = flat_limit(&w).unwrap();
        prop_assert_eq!(limit, c.top().clone());
    }
}
