use std::cmp::Ordering;

use northshield::quadfield::{QuadInt, QuadRat};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

const FRAC_BITS: u32 = 256;

/// `⌊√2 · 2^256⌋`.
fn sqrt2_fixed() -> BigInt {
    (BigInt::from(2) << (2 * FRAC_BITS)).sqrt()
}

/// Sign of `x + y√2` from a 256-bit fixed-point approximation. The error is
/// below `|y| + 1` units, far smaller than any nonzero `|x + y√2|` for the
/// magnitudes generated here.
fn fixed_sign(x: &BigInt, y: &BigInt) -> Ordering {
    if x.is_zero() && y.is_zero() {
        return Ordering::Equal;
    }
    let approx: BigInt = (x << FRAC_BITS) + y * sqrt2_fixed();
    let slack = y.abs() + 1;
    assert!(approx.abs() > slack, "oracle cannot decide");
    approx.sign().cmp(&num_bigint::Sign::NoSign)
}

fn fixed_value(q: &QuadRat) -> f64 {
    let approx: BigInt = (&q.num().a << FRAC_BITS) + &q.num().b * sqrt2_fixed();
    let scaled = approx / q.den();
    scaled.to_f64().unwrap() / 2f64.powi(FRAC_BITS as i32)
}

fn quad_int() -> impl Strategy<Value = QuadInt> {
    (-1_000_000i64..=1_000_000, -1_000_000i64..=1_000_000).prop_map(|(a, b)| QuadInt::new(a, b))
}

fn quad_rat() -> impl Strategy<Value = QuadRat> {
    (quad_int(), 1i64..=10_000).prop_map(|(n, d)| QuadRat::new(n, d))
}

proptest! {
    #[test]
    fn ring_axioms(x in quad_int(), y in quad_int(), z in quad_int()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x - &x, QuadInt::zero());
    }

    #[test]
    fn sign_and_norm_are_multiplicative(x in quad_int(), y in quad_int()) {
        let p = &x * &y;
        prop_assert_eq!(p.signum(), x.signum() * y.signum());
        prop_assert_eq!(p.norm(), x.norm() * y.norm());
        prop_assert_eq!(x.signum() as i32, fixed_sign(&x.a, &x.b) as i32);
    }

    #[test]
    fn canonical_form(n in quad_int(), d in 1i64..=10_000, k in 1i64..=1000) {
        let q = QuadRat::new(n.clone(), d);
        prop_assert_eq!(&QuadRat::new(n.scale(&BigInt::from(k)), d * k), &q);
        prop_assert!(q.den().is_positive());
        let again = QuadRat::new(q.num().clone(), q.den().clone());
        prop_assert_eq!(&again, &q);
        let json = serde_json::to_string(&q).unwrap();
        prop_assert_eq!(serde_json::from_str::<QuadRat>(&json).unwrap(), q);
    }

    #[test]
    fn field_inverse(q in quad_rat()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!(&q * &q.recip().unwrap(), QuadRat::one());
    }

    #[test]
    fn to_f64_is_accurate(q in quad_rat()) {
        let exact = fixed_value(&q);
        let got = q.to_f64();
        prop_assert!((got - exact).abs() <= 1e-14 * exact.abs().max(1e-300), "{} vs {}", got, exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ordering_matches_fixed_point(p in quad_rat(), q in quad_rat()) {
        // p - q = (x + y√2) / (dp dq)
        let x = &p.num().a * q.den() - &q.num().a * p.den();
        let y = &p.num().b * q.den() - &q.num().b * p.den();
        prop_assert_eq!(p.cmp(&q), fixed_sign(&x, &y));
    }
}
