use std::sync::Arc;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use signed_kl::affine::AffineWeyl;
use signed_kl::sigchar::SignatureEngine;
use signed_kl::{CoxeterGroup, IntPolynomial, LatticeVector, Rational, RootSystem, Weight};

fn poly() -> impl Strategy<Value = IntPolynomial> {
    proptest::collection::vec(-5i64..=5, 0..6).prop_map(IntPolynomial::new)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rational::new(n, d))
}

fn b3() -> Arc<CoxeterGroup> {
    Arc::new(CoxeterGroup::weyl(&RootSystem::from_label("B3", &[]).unwrap()).unwrap())
}

proptest! {
    #[test]
    fn polynomial_ring_laws(a in poly(), b in poly(), c in poly(), q in -3i64..=3) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!((&a * &b).eval(q), a.eval(q) * b.eval(q));
        prop_assert_eq!(a.substitute_neg_q().substitute_neg_q(), a.clone());
        prop_assert_eq!(a.substitute_neg_q().eval(q), a.eval(-q));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn weight_text_round_trip(coords in proptest::collection::vec(rational(), 1..5)) {
        let w = Weight(coords);
        prop_assert_eq!(w.to_string().parse::<Weight>().unwrap(), w);
    }

    #[test]
    fn weyl_lengths(x in 0usize..48, y in 0usize..48) {
        let g = b3();
        let (lx, ly, lxy) = (g.length(x), g.length(y), g.length(g.mul(x, y)));
        prop_assert_eq!(lxy % 2, (lx + ly) % 2);
        prop_assert!(lxy <= lx + ly);
        prop_assert_eq!(g.length(g.inverse(x)), lx);
        prop_assert_eq!(g.inversion_set(x).len(), lx);
        if g.bruhat_leq(x, y) {
            prop_assert!(lx <= ly);
            let w0 = g.longest();
            prop_assert!(g.bruhat_leq(g.mul(y, w0), g.mul(x, w0)));
        }
    }

    #[test]
    fn alcove_of_is_inverse_to_action(a in rational(), b in rational()) {
        let aff = AffineWeyl::new(&RootSystem::from_label("B2", &[]).unwrap()).unwrap();
        let lambda = Weight(vec![a, b]);
        prop_assume!(!aff.on_some_hyperplane(&lambda));
        let u = aff.alcove_of(&lambda).unwrap();
        let inner = aff.apply(&aff.inverse(&u), &lambda);
        prop_assert_eq!(aff.alcove_of(&inner).unwrap(), aff.identity());
        prop_assert_eq!(aff.alcove_of(&aff.barycenter(&u)).unwrap(), u.clone());
        prop_assert_eq!(aff.gallery(&u).unwrap().alcoves.last().unwrap().finite, aff.tilde(&u));
    }

    #[test]
    fn rank_one_characters_match_norms(p in rational(), noncompact in any::<bool>()) {
        prop_assume!(!p.is_integer() && p.abs() < Rational::from_integer(6));
        let nc: &[usize] = if noncompact { &[1] } else { &[] };
        let e = SignatureEngine::new(&RootSystem::from_label("A1", nc).unwrap(), 6).unwrap();
        let ch = e.signature_character_alcove_sum(&Weight(vec![p])).unwrap().character;
        let c = if noncompact { -1 } else { 1 };
        let mut norm = Rational::from_integer(1);
        for k in 0..=6i64 {
            if k > 0 {
                norm *= Rational::from_integer(c * k) * (p - Rational::from_integer(k));
            }
            let expected = if norm.is_zero() { 0 } else if norm.is_positive() { 1 } else { -1 };
            prop_assert_eq!(ch.coeff(&LatticeVector(vec![k])), expected);
        }
    }
}
