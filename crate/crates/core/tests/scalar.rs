use proptest::prelude::*;
use qpres::field::{Fp, ModP, Specialize};
use qpres::scalar::{int, parse, rat, LaurentPoly, Rational};
use qpres::{Field, Scalar};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    (-3i32..=3, prop::collection::vec(-4i64..=4, 0..4)).prop_map(|(low, cs)| LaurentPoly::from_dense(low, cs.into_iter().map(int).collect()))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (laurent(), laurent()).prop_filter_map("zero denominator", |(n, d)| Scalar::new(n, d).ok())
}

fn point() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=5).prop_filter("q0 = 0", |(n, _)| *n != 0).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(Field::is_zero(&a.sub(&a)));
        if let Some(ai) = Field::inv(&a) {
            prop_assert!(a.mul(&ai).is_one());
        } else {
            prop_assert!(Field::is_zero(&a));
        }
    }

    #[test]
    fn text_round_trip(a in scalar()) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), a);
    }

    #[test]
    fn bar_is_an_involutive_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!(a.mul(&b).bar(), a.bar().mul(&b.bar()));
        prop_assert_eq!(Scalar::q().bar(), Field::inv(&Scalar::q()).unwrap());
    }

    #[test]
    fn specialization_is_a_homomorphism(a in scalar(), b in scalar(), q0 in point()) {
        if let (Ok(x), Ok(y)) = (a.specialize(&q0), b.specialize(&q0)) {
            prop_assert_eq!(a.add(&b).specialize(&q0).unwrap(), x.add(&y));
            prop_assert_eq!(a.mul(&b).specialize(&q0).unwrap(), x.mul(&y));
            let m = ModP::<1_000_003>::new(q0.clone()).unwrap();
            if let (Ok(u), Ok(v), Some(xu)) = (m.apply(&a), m.apply(&b), Fp::<1_000_003>::from_rational(&x)) {
                prop_assert_eq!(u, xu);
                prop_assert_eq!(m.apply(&a.mul(&b)).unwrap(), u.mul(&v));
            }
        }
    }
}
