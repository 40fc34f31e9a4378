use std::collections::{BTreeMap, BTreeSet};

use prstrata::deformation::DEFAULT_SEARCH_BUDGET;
use prstrata::strata::*;
use prstrata::*;
use proptest::prelude::*;

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

fn computed_table_e4() -> EmptinessTable {
    let mut t = EmptinessTable::new();
    t.insert(HodgePair { i: 4, j: 0 }, [set(&[])].into_iter().collect());
    t.insert(
        HodgePair { i: 3, j: 1 },
        [set(&[2]), set(&[3]), set(&[4]), set(&[2, 3]), set(&[3, 4])].into_iter().collect(),
    );
    t.insert(HodgePair { i: 2, j: 2 }, [set(&[3]), set(&[2, 4]), set(&[2, 3, 4])].into_iter().collect());
    t
}

#[test]
fn census_e1() {
    let k = FieldCtx::prime(2).unwrap();
    let c = census(1, &k).unwrap();
    assert_eq!(c.total, 3);
    assert_eq!(c.counts.len(), 1);
    assert_eq!(c.counts[&StratumLabel::new(HodgePair { i: 1, j: 0 }, [])], 3);
    assert_eq!(c.csv_rows(), vec![["1", "2", "(1,0)", "{}", "?", "3"].map(String::from)]);
}

#[test]
fn census_totals_and_invariants() {
    for q in [2, 3, 4, 5] {
        let k = FieldCtx::with_order(q).unwrap();
        for e in 1..=4 {
            let c = census(e, &k).unwrap();
            assert_eq!(c.total, (q as u64 + 1).pow(e as u32));
            assert!(c.invariant_violations().is_empty());
        }
    }
}

#[test]
fn emptiness_table_e4_is_field_independent() {
    let t2 = census(4, &FieldCtx::prime(2).unwrap()).unwrap();
    let t3 = census(4, &FieldCtx::prime(3).unwrap()).unwrap();
    assert_eq!(t2.emptiness_table(), computed_table_e4());
    assert_eq!(t3.emptiness_table(), computed_table_e4());
    assert_ne!(t2.counts, t3.counts);
}

#[test]
fn claimed_table_differs_by_one_entry() {
    let t = census(4, &FieldCtx::prime(2).unwrap()).unwrap();
    let diff = compare_tables(&claimed_table_e4(), &t.emptiness_table());
    assert_eq!(diff.missing, vec![(HodgePair { i: 2, j: 2 }, set(&[4]))]);
    assert!(diff.unexpected.is_empty());
}

#[test]
fn universal_checks_hold() {
    for q in [2, 3] {
        let r = universal_checks(4, &FieldCtx::prime(q).unwrap()).unwrap();
        assert!(r.drop_failures.is_empty());
        assert!(r.equivalence_failures.is_empty());
        assert!(!r.converse_counterexamples.is_empty());
        assert!(r.ok());
    }
}

fn sampled<F: Fn(&Census) -> u64>(e: usize, f: F) -> BTreeMap<u32, u64> {
    DEFAULT_SAMPLES.iter().map(|&q| (q, f(&census(e, &FieldCtx::with_order(q).unwrap()).unwrap()))).collect()
}

#[test]
fn dimension_formulas_e4() {
    let poset = adm_poset(4);
    for lambda in &poset.elements {
        let fit = degree_fit(&sampled(4, |c| c.count_lambda(lambda))).unwrap();
        assert!(fit.certifies_degree(poset.dim_x(lambda)), "{lambda}: {}", fit.render());
        let lat: BTreeMap<u32, u64> = DEFAULT_SAMPLES
            .iter()
            .map(|&q| {
                let k = FieldCtx::with_order(q).unwrap();
                (q, lattices_by_hodge(4, &k).unwrap().get(lambda).map_or(0, |v| v.len() as u64))
            })
            .collect();
        let fit = degree_fit(&lat).unwrap();
        assert!(fit.certifies_degree(poset.dim_gr(lambda)), "{lambda}: {}", fit.render());
    }
    let ts: BTreeSet<BTreeSet<usize>> = computed_table_e4().into_values().flatten().collect();
    for t in ts {
        let fit = degree_fit(&sampled(4, |c| c.count_t(&t))).unwrap();
        assert!(fit.certifies_degree(4 - t.len()), "{t:?}: {}", fit.render());
    }
}

#[test]
fn lattice_count_of_free_top() {
    let s: BTreeMap<u32, u64> = [2u32, 3, 4, 5]
        .iter()
        .map(|&q| {
            let k = FieldCtx::with_order(q).unwrap();
            (q, lattices_by_hodge(4, &k).unwrap()[&HodgePair { i: 4, j: 0 }].len() as u64)
        })
        .collect();
    assert_eq!(s[&2], 24);
    for (q, c) in &s {
        let q = *q as u64;
        assert_eq!(*c, q * q * q * (q + 1));
    }
}

#[test]
fn fibers_e4() {
    let reports: Vec<FiberReport> =
        [2u32, 3, 5].iter().map(|&q| fiber_constancy(4, &FieldCtx::with_order(q).unwrap()).unwrap()).collect();
    for r in &reports {
        assert!(r.ok(), "{:?}", r.exceptions);
        assert_eq!(r.groups[&HodgePair { i: 4, j: 0 }].constant(), Some(1));
    }
    for d in fiber_degrees(&reports).unwrap() {
        assert_eq!(d.fit.degree, d.expected, "{}", d.lambda);
    }
}

#[test]
fn fibers_e3() {
    let r = fiber_constancy(3, &FieldCtx::prime(2).unwrap()).unwrap();
    assert!(r.ok());
    assert!(r.groups[&HodgePair { i: 2, j: 1 }].constant().is_some());
    let reports: Vec<FiberReport> =
        [2u32, 3, 4, 5].iter().map(|&q| fiber_constancy(3, &FieldCtx::with_order(q).unwrap()).unwrap()).collect();
    let d = fiber_degrees(&reports).unwrap();
    let d21 = d.iter().find(|d| d.lambda == HodgePair { i: 2, j: 1 }).unwrap();
    assert!(d21.ok());
}

fn opts(layer: Layer, model: Option<DieudonneModel>) -> PosetOptions {
    PosetOptions { layer, model, budget: DEFAULT_SEARCH_BUDGET }
}

#[test]
fn lambda_poset_e3() {
    let k = FieldCtx::prime(2).unwrap();
    let r = build_poset(3, &k, &opts(Layer::Lambda, None)).unwrap();
    assert_eq!(r.nodes.len(), 2);
    assert_eq!(r.edges.len(), 1);
    let e = &r.edges[0];
    assert_eq!(e.lower.lambda, HodgePair { i: 2, j: 1 });
    assert_eq!(e.upper.lambda, HodgePair { i: 3, j: 0 });
    assert_eq!(e.witnesses.len(), e.points);
    assert!(e.witnesses.iter().all(|w| w.recipe == "hodge-raise"));
    assert!(r.ok());
    assert!(r.to_dot().contains("label=\"λ=(2,1)\""));
}

#[test]
fn linear_poset_e4() {
    let k = FieldCtx::prime(2).unwrap();
    let r = build_poset(4, &k, &opts(Layer::Linear, None)).unwrap();
    assert_eq!(r.nodes.len(), 9);
    assert_eq!(r.edges.len(), 14);
    assert!(r.ok(), "{:?}", r.failures());
}

#[test]
fn refined_poset_e4() {
    let k = FieldCtx::prime(2).unwrap();
    let w = ag_fixed_point_witness(3, &k.one(), &k).unwrap();
    let r = build_poset(4, &k, &opts(Layer::Refined, Some(w.model))).unwrap();
    assert!(r.ok(), "{:?}", r.failures());
    let known = r.nodes.iter().filter(|n| n.label.m1 != M1::Unknown).count();
    assert_eq!(known, 14);
    assert_eq!(r.nodes.len(), 16);
    for e in &r.edges {
        assert!(e.certified());
        for w in &e.witnesses {
            assert!(w.audit_ok);
        }
    }
    let recipes: BTreeSet<String> = r.edges.iter().flat_map(|e| e.recipes().into_keys()).collect();
    for name in ["invert-m1", "pinned-collapse", "pinned-raise", "linear-collapse", "linear-raise", "hodge-raise"] {
        assert!(recipes.contains(name), "{name} unused");
    }
    let dot = r.to_dot();
    assert!(dot.contains("label=\"λ=(2,2) T={2,3,4} m1=0\""));
    let again = build_poset(4, &k, &opts(Layer::Refined, r.model.clone())).unwrap();
    assert_eq!(again.to_dot(), dot);
    assert_eq!(again.to_json(), r.to_json());
}

#[test]
fn refined_layer_needs_a_model() {
    let k = FieldCtx::prime(2).unwrap();
    assert!(matches!(build_poset(4, &k, &opts(Layer::Refined, None)), Err(Error::Precondition(_))));
}

#[test]
fn empty_census_gives_empty_report() {
    let r = build_poset_from(4, "F_2", &Classification::new(), &opts(Layer::Linear, None)).unwrap();
    assert!(r.nodes.is_empty());
    assert!(r.edges.is_empty());
    assert!(r.ok());
}

#[test]
fn products() {
    let k = FieldCtx::prime(2).unwrap();
    let c1 = census(1, &k).unwrap();
    let p = product_census(&[c1.clone(), c1]).unwrap();
    assert_eq!(p.total, 9);
    assert_eq!(p.counts.len(), 1);

    let p = product_census(&[census(2, &k).unwrap(), census(3, &k).unwrap()]).unwrap();
    assert_eq!(p.total, 243);
    for t in p.lambda_counts().keys() {
        assert_eq!(p.dim(t), adm_poset(2).dim_x(&t[0]) + adm_poset(3).dim_x(&t[1]));
    }

    let c2 = census(2, &k).unwrap();
    let p = product_census(&[c2.clone(), c2]).unwrap();
    let nodes = p.lambda_counts();
    assert_eq!(nodes.len(), 4);
    assert_eq!(p.covers().unwrap().len(), 4);
    let lo = vec![HodgePair { i: 1, j: 1 }, HodgePair { i: 2, j: 0 }];
    let hi = vec![HodgePair { i: 2, j: 0 }, HodgePair { i: 1, j: 1 }];
    assert!(!p.le(&lo, &hi).unwrap());
}

#[test]
fn product_rejects_mixed_fields() {
    let a = census(1, &FieldCtx::prime(2).unwrap()).unwrap();
    let b = census(1, &FieldCtx::prime(3).unwrap()).unwrap();
    assert!(matches!(product_census(&[a, b]), Err(Error::ContextMismatch)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn degree_fit_recovers_integer_polynomials(coeffs in prop::collection::vec(-20i64..20, 1..6)) {
        let eval = |q: i64| coeffs.iter().rev().fold(0i64, |acc, c| acc * q + c);
        prop_assume!(DEFAULT_SAMPLES.iter().all(|&q| eval(q as i64) >= 0));
        let s: BTreeMap<u32, u64> = DEFAULT_SAMPLES.iter().map(|&q| (q, eval(q as i64) as u64)).collect();
        let fit = degree_fit(&s).unwrap();
        let deg = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
        prop_assert!(fit.certifies_degree(deg));
        prop_assert!(fit.is_integral());
        prop_assert_eq!(fit.eval(11), Rational::from_integer(eval(11) as i128));
    }

    #[test]
    fn census_totals_are_powers(e in 1usize..=3, q in prop::sample::select(vec![2u32, 3, 4, 5, 7])) {
        let c = census(e, &FieldCtx::with_order(q).unwrap()).unwrap();
        prop_assert_eq!(c.total, (q as u64 + 1).pow(e as u32));
        prop_assert_eq!(c.counts.values().sum::<u64>(), c.total);
    }

    #[test]
    fn product_counts_multiply(e1 in 1usize..=2, e2 in 1usize..=3) {
        let k = FieldCtx::prime(3).unwrap();
        let p = product_census(&[census(e1, &k).unwrap(), census(e2, &k).unwrap()]).unwrap();
        prop_assert_eq!(p.total, 4u64.pow((e1 + e2) as u32));
    }
}
