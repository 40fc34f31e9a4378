use prstrata::scalar::finite::default_modulus;
use prstrata::*;
use proptest::prelude::*;

#[test]
fn frobenius_examples() {
    let f2 = FieldCtx::prime(2).unwrap();
    assert_eq!(f2.frobenius(&f2.one()), f2.one());

    let f4 = FieldCtx::with_order(4).unwrap();
    assert_eq!(f4.field().modulus(), &[1, 1, 1]);
    let x = f4.field().from_digits(&[0, 1]).unwrap();
    let x1 = f4.field().from_digits(&[1, 1]).unwrap();
    assert_eq!(f4.frobenius(&Scalar::Fin(x)), Scalar::Fin(x1));

    let kt = f2.rational_t();
    let a = kt.from_poly(&[1, 1]).unwrap();
    assert_eq!(kt.frobenius(&a), kt.from_poly(&[1, 0, 1]).unwrap());
}

#[test]
fn specialize_examples() {
    let kt = FieldCtx::prime(3).unwrap().rational_t();
    let num = kt.from_poly(&[1, 0, 1]).unwrap();
    let den = kt.from_poly(&[1, 1]).unwrap();
    assert_eq!(kt.specialize_at_zero(&kt.div(&num, &den).unwrap()).unwrap(), Scalar::Fin(1));

    let ks = FieldCtx::prime(2).unwrap().truncated_t(4).unwrap();
    assert_eq!(ks.specialize_at_zero(&ks.t().unwrap()).unwrap(), Scalar::Fin(0));

    let k2 = FieldCtx::prime(2).unwrap().rational_t();
    let inv_t = k2.div(&k2.one(), &k2.t().unwrap()).unwrap();
    assert_eq!(k2.specialize_at_zero(&inv_t), Err(Error::PoleAtZero));
}

#[test]
fn field_elements_examples() {
    let f2 = FieldCtx::prime(2).unwrap();
    assert_eq!(f2.field_elements(128).unwrap(), vec![Scalar::Fin(0), Scalar::Fin(1)]);
    let f3 = FieldCtx::prime(3).unwrap();
    assert_eq!(f3.field_elements(128).unwrap(), vec![Scalar::Fin(0), Scalar::Fin(1), Scalar::Fin(2)]);
    let f4 = FieldCtx::with_order(4).unwrap();
    let els = f4.field_elements(128).unwrap();
    assert_eq!(els.len(), 4);
    assert_eq!(els[0], f4.zero());
    assert!(matches!(f4.field_elements(3), Err(Error::BoundExceeded { .. })));
    assert!(f4.rational_t().field_elements(128).is_err());
}

#[test]
fn invalid_fields_are_rejected() {
    assert!(FieldCtx::prime(4).is_err());
    assert!(FieldCtx::with_order(6).is_err());
    assert!(FieldCtx::extension(2, vec![1, 0, 1]).is_err());
    assert_eq!(default_modulus(3, 2).len(), 3);
}

#[test]
fn mixed_contexts_do_not_compare_equal() {
    let a = FieldCtx::prime(2).unwrap();
    let b = FieldCtx::prime(3).unwrap();
    assert_ne!(a, b);
    assert_ne!(a, a.rational_t());
    assert_eq!(a.rational_t().base(), a);
}

fn contexts() -> Vec<FieldCtx> {
    let mut out = vec![];
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let k = FieldCtx::with_order(q).unwrap();
        out.push(k.rational_t());
        out.push(k.truncated_t(6).unwrap());
        out.push(k);
    }
    out
}

fn element(k: &FieldCtx, seed: &[u32]) -> Scalar {
    if k.is_finite() {
        return Scalar::Fin(seed[0] % k.q());
    }
    let num: Vec<u32> = seed[..3].iter().map(|x| x % k.q()).collect();
    let n = k.from_poly(&num).unwrap();
    if k.precision().is_some() {
        return n;
    }
    let mut den: Vec<u32> = seed[3..5].iter().map(|x| x % k.q()).collect();
    den.push(1);
    k.div(&n, &k.from_poly(&den).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(ci in 0usize..21, a in prop::array::uniform5(0u32..1000), b in prop::array::uniform5(0u32..1000), c in prop::array::uniform5(0u32..1000)) {
        let ks = contexts();
        let k = &ks[ci];
        let (a, b, c) = (element(k, &a), element(k, &b), element(k, &c));
        prop_assert_eq!(k.add(&k.add(&a, &b), &c), k.add(&a, &k.add(&b, &c)));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.add(&a, &k.neg(&a)), k.zero());
        if k.is_unit(&a) {
            prop_assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
        } else if !k.is_zero(&a) {
            prop_assert_eq!(k.inv(&a), Err(Error::NonUnit));
        }
    }

    #[test]
    fn frobenius_is_a_ring_map(ci in 0usize..21, a in prop::array::uniform5(0u32..1000), b in prop::array::uniform5(0u32..1000)) {
        let ks = contexts();
        let k = &ks[ci];
        let (a, b) = (element(k, &a), element(k, &b));
        prop_assert_eq!(k.frobenius(&k.add(&a, &b)), k.add(&k.frobenius(&a), &k.frobenius(&b)));
        prop_assert_eq!(k.frobenius(&k.mul(&a, &b)), k.mul(&k.frobenius(&a), &k.frobenius(&b)));
        if let Ok(s) = k.specialize_at_zero(&a) {
            let base = k.base();
            prop_assert_eq!(k.specialize_at_zero(&k.frobenius(&a)).unwrap(), base.frobenius(&s));
        }
    }

    #[test]
    fn rational_functions_are_canonical(a in prop::array::uniform5(0u32..1000), m in prop::array::uniform3(0u32..1000)) {
        let k = FieldCtx::with_order(5).unwrap().rational_t();
        let x = element(&k, &a);
        let mut mv: Vec<u32> = m.iter().map(|v| v % 5).collect();
        mv.push(1);
        let f = k.from_poly(&mv).unwrap();
        let y = k.div(&k.mul(&x, &f), &f).unwrap();
        prop_assert_eq!(&y, &x);
        if let Scalar::Rat(r) = &y {
            prop_assert_eq!(r.denominator().last().copied(), Some(1));
        }
    }
}

#[test]
fn frobenius_is_injective_on_finite_fields() {
    for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        let k = FieldCtx::with_order(q).unwrap();
        let mut imgs: Vec<Scalar> = k.field_elements(128).unwrap().iter().map(|x| k.frobenius(x)).collect();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs.len(), q as usize);
    }
}
