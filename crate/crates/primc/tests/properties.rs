//! Randomised invariants for the series layer.

use num_bigint::BigInt;
use proptest::prelude::*;

use primc::{AlphaMonomial, Monomial, Series};

const N: usize = 2;
const TRUNC: i64 = 8;

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    (0..=TRUNC, prop::collection::vec(-3i64..=3, N), -2i64..=2)
        .prop_map(|(q, b, x)| Monomial::new(q, b, x))
}

fn arb_series() -> impl Strategy<Value = Series> {
    prop::collection::vec((arb_monomial(), -5i64..=5), 0..8).prop_map(|terms| {
        let mut s = Series::zero(N, TRUNC);
        for (m, c) in terms {
            s.add_monomial(m, BigInt::from(c));
        }
        s
    })
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn multiplication_commutes_and_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn multiplication_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn one_is_neutral(a in arb_series()) {
        prop_assert_eq!(a.mul(&Series::one(N, TRUNC)).unwrap(), a.clone());
        prop_assert_eq!(a.add(&Series::zero(N, TRUNC)).unwrap(), a);
    }

    #[test]
    fn euler_pair_inverts(trunc in 0i64..=40) {
        let product = Series::euler(1, trunc)
            .mul(&Series::euler_inverse(1, trunc))
            .unwrap();
        prop_assert_eq!(product, Series::one(1, trunc));
    }

    #[test]
    fn alpha_round_trip(c in prop::collection::vec(0i64..=6, 2..=4)) {
        let n = c.len();
        let am = AlphaMonomial::new(c).unwrap();
        let qb = am.to_qb();
        let s = Series::monomial(n, qb.q_exp, qb.clone(), BigInt::from(1));
        let conv = s.to_alpha().unwrap();
        prop_assert!(conv.violations.is_empty());
        let (back, coef) = conv.terms.iter().next().unwrap();
        prop_assert_eq!(back, &am);
        prop_assert_eq!(coef, &BigInt::from(1));
    }

    #[test]
    fn json_round_trip(a in arb_series()) {
        let v = a.to_json();
        prop_assert_eq!(Series::from_json(&v).unwrap(), a);
    }
}
