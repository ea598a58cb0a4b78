mod common;

use colift_core::ring::{bezout, builtin_registry, parse_element, RingElement};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ring in sample_rings() {
            let (a, b, c) = (element(&mut r, &ring), element(&mut r, &ring), element(&mut r, &ring));
            let zero = RingElement::zero(&ring);
            let one = RingElement::one(&ring);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &zero, a.clone());
            prop_assert_eq!(&a * &one, a.clone());
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&a - &b, &a + &(-&b));
        }
    }

    #[test]
    fn renormalize_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ring in sample_rings() {
            let a = element(&mut r, &ring);
            let once = a.renormalize();
            prop_assert_eq!(&once.renormalize(), &once);
            prop_assert_eq!(&once, &a);
        }
    }

    #[test]
    fn parse_inverts_render(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ring in sample_rings() {
            let a = element(&mut r, &ring);
            prop_assert_eq!(parse_element(&ring, &a.to_string()).unwrap(), a);
        }
    }

    #[test]
    fn units_invert(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ring in sample_rings() {
            let u = unit(&mut r, &ring);
            let inv = u.inverse().expect("unit");
            prop_assert!((&u * &inv).is_one());
        }
    }

    #[test]
    fn bezout_certifies_constant_vectors(seed in any::<u64>(), len in 1usize..5) {
        let mut r = rng(seed);
        for ring in [z(), zm(6), zm(101), zxy(), zu()] {
            // a unimodular column of a random invertible integer matrix
            let m = invertible_dense(&mut r, &z(), len);
            let v: Vec<RingElement> = (0..len)
                .map(|i| RingElement::from_bigint(&ring, m.get(i, 0).as_constant().unwrap()))
                .collect();
            let w = bezout(&v).expect("unimodular vector has a witness");
            prop_assert!(w.certifies(&v));
        }
    }
}

#[test]
fn section_is_a_right_inverse() {
    let reg = builtin_registry();
    let mut r = rng(7);
    for hom in reg.iter() {
        for _ in 0..500 {
            let b = element(&mut r, hom.target());
            let lifted = hom.section(&b).unwrap();
            assert_eq!(hom.apply(&lifted).unwrap(), b, "{}", hom.name());
        }
    }
}

#[test]
fn homs_respect_operations() {
    let reg = builtin_registry();
    let mut r = rng(8);
    for hom in reg.iter() {
        for _ in 0..100 {
            let (a, b) = (element(&mut r, hom.source()), element(&mut r, hom.source()));
            let (fa, fb) = (hom.apply(&a).unwrap(), hom.apply(&b).unwrap());
            assert_eq!(hom.apply(&(&a + &b)).unwrap(), &fa + &fb);
            assert_eq!(hom.apply(&(&a * &b)).unwrap(), &fa * &fb);
        }
        assert!(hom.apply(&RingElement::one(hom.source())).unwrap().is_one());
    }
}

#[test]
fn non_unimodular_vectors_have_no_witness() {
    let ring = z();
    let v = [RingElement::from_int(&ring, 4), RingElement::from_int(&ring, 6)];
    assert!(bezout(&v).is_none());
    let v = [RingElement::from_int(&zm(6), 2), RingElement::from_int(&zm(6), 4)];
    assert!(bezout(&v).is_none());
    let big = RingElement::from_bigint(&ring, BigInt::from(3).pow(80u32));
    let w = bezout(&[big.clone(), &big + &RingElement::one(&ring)]).unwrap();
    assert!(w.certifies(&[big.clone(), &big + &RingElement::one(&ring)]));
}
