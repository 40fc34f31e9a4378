use std::collections::BTreeSet;

use prstrata::invariants::{linear_label, StratumLabel};
use prstrata::umodule::monomial;
use prstrata::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2() -> FieldCtx {
    FieldCtx::prime(2).unwrap()
}

fn hp(i: usize, j: usize) -> HodgePair {
    HodgePair { i, j }
}

fn u_stable(k: &FieldCtx, n: usize, gens: &[(usize, usize)]) -> Subspace {
    let rows: Vec<Row> = gens.iter().map(|&(c, d)| monomial(k, n, c, d)).collect();
    Subspace::u_span(k, n, &rows).unwrap()
}

#[test]
fn block_partition_examples() {
    let k = f2();
    let z = |n| Subspace::zero(&k, n);
    assert_eq!(block_partition(&z(4), &Subspace::full(&k, 4)).unwrap(), vec![4, 4]);
    assert_eq!(block_partition(&z(4), &Subspace::kernel_u_pow(&k, 4, 2)).unwrap(), vec![2, 2]);
    let w = Subspace::span(&k, 3, &[monomial(&k, 3, 0, 2), monomial(&k, 3, 1, 1), monomial(&k, 3, 1, 2)]).unwrap();
    assert_eq!(block_partition(&z(3), &w).unwrap(), vec![2, 1]);
}

#[test]
fn block_partition_errors() {
    let k = f2();
    let a = u_stable(&k, 3, &[(0, 2)]);
    let b = u_stable(&k, 3, &[(1, 2)]);
    assert_eq!(block_partition(&a, &b), Err(Error::NotNested));
    let line = Subspace::span(&k, 3, &[monomial(&k, 3, 0, 0)]).unwrap();
    let full = Subspace::full(&k, 3);
    assert_eq!(block_partition(&line, &full), Err(Error::NotUStable));
}

#[test]
fn hodge_of_the_three_lattices() {
    let k = f2();
    assert_eq!(hodge(&u_stable(&k, 3, &[(0, 2)])).unwrap(), hp(3, 2));
    assert_eq!(hodge(&u_stable(&k, 3, &[(0, 2), (1, 2)])).unwrap(), hp(2, 2));
    assert_eq!(hodge(&u_stable(&k, 3, &[(0, 2), (1, 1)])).unwrap(), hp(2, 1));
    assert_eq!(hodge(&Subspace::zero(&k, 3)).unwrap(), hp(3, 3));
    let line = Subspace::span(&k, 3, &[monomial(&k, 3, 0, 0)]).unwrap();
    assert_eq!(hodge(&line), Err(Error::NotUStable));
}

#[test]
fn nilpotency_examples() {
    let k = f2();
    assert_eq!(nilpotency_index(&Subspace::zero(&k, 4)).unwrap(), 0);
    assert_eq!(nilpotency_index(&Subspace::full(&k, 4)).unwrap(), 4);
    assert_eq!(nilpotency_index(&Subspace::kernel_u_pow(&k, 4, 2)).unwrap(), 2);
    for c in enumerate_chains(4, &k).unwrap() {
        for w in c.levels() {
            assert_eq!(nilpotency_index(w).unwrap(), w.n() - hodge(w).unwrap().j);
        }
    }
}

#[test]
fn mi_vanishing_examples() {
    let k = f2();
    let free = standard_free_chain(&k, 4);
    for i in 2..=4 {
        assert!(!mi_vanishes(&free, i).unwrap());
    }
    assert!(mi_vanishes(&free, 1).is_err());
    assert!(mi_vanishes(&free, 5).is_err());

    let eu = Subspace::kernel_u_pow(&k, 4, 1);
    for c in enumerate_chains(4, &k).unwrap().into_iter().filter(|c| c.levels()[1] == eu) {
        assert!(mi_vanishes(&c, 2).unwrap());
    }

    let c = PRChain::from_generators(&k, 2, &[vec![monomial(&k, 2, 0, 1)], vec![monomial(&k, 2, 0, 1), monomial(&k, 2, 1, 1)]])
        .unwrap();
    assert!(mi_vanishes(&c, 2).unwrap());
}

#[test]
fn stratum_label_examples() {
    let k = f2();
    let free = standard_free_chain(&k, 4);
    assert_eq!(stratum_label(&free, None).unwrap(), StratumLabel::new(hp(4, 0), []));

    let m = |c, d| monomial(&k, 4, c, d);
    let c = PRChain::from_module_generators(
        &k,
        4,
        &[vec![m(1, 3)], vec![m(0, 3), m(1, 3)], vec![m(0, 3), m(1, 2)], vec![m(0, 2), m(1, 2)]],
    )
    .unwrap();
    let l = stratum_label(&c, None).unwrap();
    assert_eq!(l, StratumLabel::new(hp(2, 2), [2, 3, 4]));
    assert_eq!(l.m1, M1::Unknown);
}

#[test]
fn universal_label_facts() {
    for q in [2, 3] {
        let k = FieldCtx::prime(q).unwrap();
        let mut converse_fails = 0;
        for e in 1..=4 {
            for c in enumerate_chains(e, &k).unwrap() {
                let l = stratum_label(&c, None).unwrap();
                let free = l.lambda == hp(e, 0);
                let cyclic = block_partition(&Subspace::zero(&k, e), c.top()).unwrap().len() == 1;
                assert_eq!(free, l.t.is_empty());
                assert_eq!(free, cyclic);
                if e == 4 && l.t.is_superset(&BTreeSet::from([2, 4])) {
                    assert_eq!(l.lambda, hp(2, 2));
                }
                let lv = c.levels();
                let h = |i: usize| if i == 0 { hp(e, e) } else { hodge(&lv[i - 1]).unwrap() };
                for i in 2..=e {
                    let drop = h(i).i + 1 == h(i - 2).i && h(i).j + 1 == h(i - 2).j;
                    if mi_vanishes(&c, i).unwrap() {
                        assert!(drop, "vanishing m_{i} without Hodge drop on {c:?}");
                    } else if drop {
                        converse_fails += 1;
                    }
                }
            }
        }
        assert!(converse_fails > 0);
    }
}

#[test]
fn labels_parse_and_order() {
    let l = StratumLabel::new(hp(3, 1), [2, 3]).with_m1(M1::Zero);
    assert_eq!(StratumLabel::parse(&l.code()).unwrap(), l);
    assert_eq!(StratumLabel::parse("lambda=(3,1);T={3}").unwrap(), StratumLabel::new(hp(3, 1), [3]));
    assert!(StratumLabel::parse("lambda=(1,3);T={}").is_err());
    assert!(StratumLabel::parse("T={}").is_err());
    assert!(StratumLabel::parse("lambda=(3,1);T={3};x=1").is_err());

    let low = StratumLabel::new(hp(2, 2), [2, 3, 4]);
    let high = StratumLabel::new(hp(3, 1), [3]);
    assert!(low.le(&high).unwrap());
    assert!(!high.le(&low).unwrap());
    assert!(low.lt(&high).unwrap());
    assert!(!low.lt(&low).unwrap());
    let nz = low.clone().with_m1(M1::NonZero);
    let z = high.clone().with_m1(M1::Zero);
    assert!(!nz.le(&z).unwrap());
    assert!(low.clone().with_m1(M1::Zero).le(&high.clone().with_m1(M1::NonZero)).unwrap());
    assert_eq!(low.le(&StratumLabel::new(hp(3, 0), [])), Err(Error::Incomparable));
}

#[test]
fn admissible_posets() {
    let p = adm_poset(4);
    assert_eq!(p.elements, vec![hp(2, 2), hp(3, 1), hp(4, 0)]);
    assert!(p.le(&hp(2, 2), &hp(3, 1)).unwrap());
    assert!(p.le(&hp(3, 1), &hp(4, 0)).unwrap());
    assert_eq!(p.dim_x(&hp(3, 1)), 3);
    assert_eq!(p.dim_gr(&hp(3, 1)), 2);
    assert_eq!(p.dim_fiber(&hp(2, 2)), 2);
    for e in 1..=6 {
        assert_eq!(adm_poset(e).elements.len(), e / 2 + 1);
    }

    let prod = product_poset(&[adm_poset(2), adm_poset(3)]);
    assert_eq!(prod.elements.len(), 4);
    for a in &prod.elements {
        assert_eq!(prod.dim_x(a), adm_poset(2).dim_x(&a[0]) + adm_poset(3).dim_x(&a[1]));
    }
    assert!(prod.le(&[hp(1, 1), hp(2, 1)], &[hp(2, 0), hp(3, 0)]).unwrap());
    assert!(!prod.le(&[hp(2, 0), hp(2, 1)], &[hp(1, 1), hp(3, 0)]).unwrap());
    assert!(prod.le(&[hp(1, 1)], &[hp(2, 0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn blocks_survive_u_linear_base_change(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = FieldCtx::prime(q).unwrap();
        let e = rng.gen_range(2..=4);
        let chains = enumerate_chains(e, &k).unwrap();
        let c = &chains[rng.gen_range(0..chains.len())];
        let g = loop {
            let entries = [0, 1, 2, 3].map(|_| (0..e).map(|_| Scalar::Fin(rng.gen_range(0..q))).collect::<Vec<_>>());
            if let Ok(g) = TruncatedGroupElement::new(&k, e, entries) {
                break g;
            }
        };
        let a = rng.gen_range(0..e);
        let b = rng.gen_range(a..e);
        let (small, big) = (&c.levels()[a], &c.levels()[b]);
        let (gs, gb) = (g.act_subspace(small).unwrap(), g.act_subspace(big).unwrap());
        prop_assert_eq!(block_partition(small, big).unwrap(), block_partition(&gs, &gb).unwrap());
        let parts = block_partition(small, big).unwrap();
        prop_assert_eq!(parts.iter().sum::<usize>(), big.dim() - small.dim());
        prop_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(linear_label(c.levels()).unwrap(), stratum_label(&act(&g, c).unwrap(), None).unwrap());
    }
}
