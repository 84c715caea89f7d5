//! Randomized algebraic identities over exact rationals.

use gwcalc_core::bps::{bps_to_gw, gw_to_bps, ClassDescriptor, Insertion, InsertionList};
use gwcalc_core::correspondence::{convolve, deconvolve};
use gwcalc_core::{EvenSeries, GenusSequence, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=20).prop_map(|(p, q)| Rational::new(p, q))
}

fn coeffs(order: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), order + 1)
}

fn series(order: usize) -> impl Strategy<Value = EvenSeries> {
    coeffs(order).prop_map(EvenSeries::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series(6), b in series(6), c in series(6)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        prop_assert_eq!(a.mul(&EvenSeries::unit(6)), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverse_and_powers(mut v in coeffs(6), k in -4i64..5) {
        if v[0].is_zero() {
            v[0] = Rational::one();
        }
        let a = EvenSeries::new(v);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv), EvenSeries::unit(6));
        prop_assert_eq!(a.pow(k).unwrap().mul(&a.pow(-k).unwrap()), EvenSeries::unit(6));
        prop_assert_eq!(a.pow(k + 1).unwrap(), a.pow(k).unwrap().mul(&a));
    }

    #[test]
    fn deconvolve_inverts_convolve(k in coeffs(8), mut p in coeffs(8)) {
        if p[0].is_zero() {
            p[0] = Rational::new(1, 3);
        }
        let k = GenusSequence::from_values(k);
        let p = GenusSequence::from_values(p);
        let h = convolve(&k, &p).unwrap();
        prop_assert_eq!(deconvolve(&h, &p).unwrap().values, k.values.clone());
        // Convolution is commutative.
        prop_assert_eq!(convolve(&p, &k).unwrap().values, h.values);
    }

    #[test]
    fn bps_is_linear_and_invertible(a in coeffs(6), b in coeffs(6), s in rational(), c1 in 1i64..7) {
        let class = ClassDescriptor::new(vec![1], c1).unwrap();
        let none = InsertionList::empty();
        let na = gw_to_bps(&GenusSequence::from_values(a.clone()), &class, &none).unwrap();
        let nb = gw_to_bps(&GenusSequence::from_values(b.clone()), &class, &none).unwrap();
        let combo: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + &(&s * y)).collect();
        let nc = gw_to_bps(&GenusSequence::from_values(combo), &class, &none).unwrap();
        let expected: Vec<Rational> = na.values.iter().zip(&nb.values).map(|(x, y)| x + &(&s * y)).collect();
        prop_assert_eq!(nc.values, expected);
        prop_assert_eq!(bps_to_gw(&na).unwrap().values, a);
    }

    #[test]
    fn divisor_reduction_is_multiplicative(xs in prop::collection::vec(rational(), 0..4), ys in prop::collection::vec(rational(), 0..4)) {
        let list = |v: &[Rational]| InsertionList::new(v.iter().cloned().map(Insertion::divisor).collect()).unwrap();
        let (sx, _) = list(&xs).reduce();
        let (sy, _) = list(&ys).reduce();
        let (sxy, rest) = list(&xs).concat(&list(&ys)).reduce();
        prop_assert_eq!(sxy, sx * sy);
        prop_assert!(rest.is_empty());
    }
}
