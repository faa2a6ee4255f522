use langton_core::{GroundField, PuiseuxScalar, TLaurent};
use num_rational::Rational64;
use proptest::prelude::*;

const Q: GroundField = GroundField::Rationals;

/// Sparse polynomial in `u = pi^{1/n}` shifted by `u^shift`, as a scalar.
fn scalar(terms: &[(i64, i64)], n: u32) -> PuiseuxScalar {
    terms.iter().fold(PuiseuxScalar::zero(Q, n), |acc, &(k, c)| {
        acc.add(&PuiseuxScalar::monomial(Q.from_i64(c), k, n))
    })
}

fn arb_scalar() -> impl Strategy<Value = PuiseuxScalar> {
    prop::collection::vec((-3i64..4, -4i64..5), 0..4).prop_map(|t| scalar(&t, 2))
}

fn arb_unit_scalar() -> impl Strategy<Value = PuiseuxScalar> {
    arb_scalar().prop_filter("nonzero", |x| !x.is_zero())
}

fn arb_series() -> impl Strategy<Value = TLaurent> {
    prop::collection::vec((-3i64..4, arb_scalar()), 0..4)
        .prop_map(|t| TLaurent::from_terms(Q, 2, t, None))
}

proptest! {
    #[test]
    fn scalar_ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn scalar_inverse(a in arb_unit_scalar(), b in arb_unit_scalar()) {
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        let q = a.div(&b).unwrap();
        prop_assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn pi_valuation_is_additive(a in arb_unit_scalar(), b in arb_unit_scalar()) {
        let va = a.val_pi().unwrap();
        let vb = b.val_pi().unwrap();
        prop_assert_eq!(a.mul(&b).val_pi().unwrap(), va + vb);
        let s = a.add(&b);
        if !s.is_zero() {
            prop_assert!(s.val_pi().unwrap() >= va.min(vb));
        }
    }

    #[test]
    fn root_extension_is_a_ring_map(a in arb_scalar(), b in arb_scalar(), d in 1u32..4) {
        prop_assert_eq!(a.mul(&b).extend(d), a.extend(d).mul(&b.extend(d)));
        prop_assert_eq!(a.add(&b).extend(d), a.extend(d).add(&b.extend(d)));
        prop_assert_eq!(a.extend(d).val_pi(), a.val_pi());
    }

    #[test]
    fn series_ring_axioms(x in arb_series(), y in arb_series(), z in arb_series()) {
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
    }

    #[test]
    fn series_inverse_to_precision(x in arb_series(), prec in 1i64..8) {
        prop_assume!(!x.is_zero());
        let inv = x.invert(prec).unwrap();
        let prod = x.mul(&inv);
        let lo = prod.lowest().unwrap();
        prop_assert_eq!(lo, 0);
        prop_assert!(prod.coeff(0).is_one());
        let p = prod.precision().unwrap_or(prec);
        prop_assert!(p >= prec);
        for e in 1..p {
            prop_assert!(prod.coeff(e).is_zero());
        }
    }
}

#[test]
fn fractional_pi_valuation() {
    let x = PuiseuxScalar::pi_power(Q.one(), Rational64::new(2, 3));
    assert_eq!(x.root_denominator(), 3);
    assert_eq!(x.val_pi(), Some(Rational64::new(2, 3)));
    assert!(!x.inv().unwrap().is_integral());
    assert_eq!(x.reduce_mod_pi().unwrap(), Q.zero());
}

#[test]
fn prime_field_arithmetic() {
    let f = GroundField::prime(7).unwrap();
    let three = PuiseuxScalar::from_i64(f, 3, 1);
    let five = PuiseuxScalar::from_i64(f, 5, 1);
    assert!(three.mul(&five).is_one());
    assert!(PuiseuxScalar::from_i64(f, 7, 1).is_zero());
}
