use hecke_core::cyclo::{euler_phi, CycloNum};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn element(r: u32) -> impl Strategy<Value = CycloNum> {
    let width = euler_phi(r);
    prop::collection::vec((-9i64..=9, 1i64..=5), width).prop_map(move |cs| {
        let poly = cs
            .into_iter()
            .map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
            .collect();
        CycloNum::from_poly(r, poly)
    })
}

fn triple() -> impl Strategy<Value = (CycloNum, CycloNum, CycloNum)> {
    (1u32..=8).prop_flat_map(|r| (element(r), element(r), element(r)))
}

proptest! {
    // about 1000 cases for each r in 1..=8
    #![proptest_config(ProptestConfig::with_cases(8000))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert_eq!(b.try_div(&a).unwrap(), &b * &inv);
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn text_format_round_trips((a, _, _) in triple()) {
        prop_assert_eq!(CycloNum::parse(a.order(), &a.to_string()).unwrap(), a);
    }
}

#[test]
fn roots_of_unity_have_order_dividing_r() {
    for r in 1..=12u32 {
        for e in -15..=15i64 {
            let z = CycloNum::zeta_pow(r, e).unwrap();
            assert!(z.pow(r as i64).unwrap().is_one(), "zeta_{r}^{e}");
        }
        let total = (0..r as i64).fold(CycloNum::zero(r), |acc, e| &acc + &CycloNum::root(r, e));
        assert_eq!(total, CycloNum::from_int(r, i64::from(r == 1)));
    }
    assert!(CycloNum::zeta_pow(0, 1).is_err());
}

#[test]
fn mismatched_fields_are_rejected() {
    assert!(CycloNum::one(3).try_add(&CycloNum::one(4)).is_err());
    assert!(CycloNum::one(3).try_mul(&CycloNum::one(5)).is_err());
}
