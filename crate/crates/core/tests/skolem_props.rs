mod common;

use colift_core::colfin::Dense;
use colift_core::ring::RingElement;
use colift_core::skolem::{
    central_scalar, conjugation_mismatch, matrix_unit, recover_conjugator, validate_auto_spec, AlgebraAutoSpec,
};
use common::*;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn recovery_round_trip_mod_p(seed in any::<u64>(), n in 1usize..=6, big in any::<bool>()) {
        let p = if big { 101 } else { 5 };
        let ring = zm(p as u64);
        let mut r = rng(seed);
        let u = random_gl_mod_p(&mut r, &ring, n, p);
        let spec = AlgebraAutoSpec::from_conjugator(&u).unwrap();
        prop_assert!(validate_auto_spec(&spec).passed());
        let c = recover_conjugator(&spec).unwrap();
        prop_assert_eq!(conjugation_mismatch(&c.u, &c.inverse, &spec), None);
        // direct check of every matrix unit
        for i in 0..n {
            for j in 0..n {
                let e = matrix_unit(&ring, n, i, j);
                prop_assert_eq!(&c.u.mul(&e).mul(&c.inverse), spec.image(i, j));
            }
        }
        let ratio = c.u.mul(&u.inverse().unwrap());
        let s = central_scalar(&ratio);
        prop_assert!(s.is_some_and(|s| s.is_unit()));
    }

    #[test]
    fn recovery_round_trip_over_integers(seed in any::<u64>(), n in 1usize..=4) {
        let ring = z();
        let mut r = rng(seed);
        let u = invertible_dense(&mut r, &ring, n);
        let spec = AlgebraAutoSpec::from_conjugator(&u).unwrap();
        let c = recover_conjugator(&spec).unwrap();
        prop_assert_eq!(conjugation_mismatch(&c.u, &c.inverse, &spec), None);
        prop_assert!(central_scalar(&c.u.mul(&u.inverse().unwrap())).is_some());
    }

    #[test]
    fn central_scalar_accepts_only_scalars(seed in any::<u64>(), n in 1usize..=6) {
        let ring = zm(101);
        let mut r = rng(seed);
        let c = RingElement::from_int(&ring, r.gen_range(0..101));
        let scalar = Dense::identity(&ring, n).scale(&c);
        prop_assert_eq!(central_scalar(&scalar), Some(c));
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        let bump = RingElement::from_int(&ring, r.gen_range(1..101));
        let mut m = scalar.clone();
        m.set(i, j, m.get(i, j) + &bump);
        // a single-entry change keeps the matrix scalar only when n = 1
        prop_assert_eq!(central_scalar(&m).is_some(), n == 1);
        let general = dense(&mut r, &ring, n);
        let is_scalar = (0..n).all(|a| (0..n).all(|b| {
            if a == b { general.get(a, b) == general.get(0, 0) } else { general.get(a, b).is_zero() }
        }));
        prop_assert_eq!(central_scalar(&general).is_some(), is_scalar);
    }
}

#[test]
fn fixing_every_unit_gives_a_scalar() {
    for ring in [zm(5), zm(101), z()] {
        for n in 1..=5 {
            let c = recover_conjugator(&AlgebraAutoSpec::identity(&ring, n)).unwrap();
            assert!(central_scalar(&c.u).is_some_and(|s| s.is_unit()), "{ring} n={n}");
        }
    }
    // conjugating by a scalar fixes every unit too
    let ring = zm(101);
    let s = Dense::identity(&ring, 3).scale(&RingElement::from_int(&ring, 17));
    let c = recover_conjugator(&AlgebraAutoSpec::from_conjugator(&s).unwrap()).unwrap();
    assert!(central_scalar(&c.u).is_some());
}
