//! Exact arithmetic in the ring Z[√2] and its fraction field Q(√2).
//!
//! [`QuadInt`] stores `a + b√2` as a pair of arbitrary-precision integers.
//! [`QuadRat`] divides a `QuadInt` by a positive integer and is always kept
//! in lowest terms, so two values are equal exactly when their fields are.
//!
//! Ordering is decided with integer arithmetic only: the sign of `a + b√2`
//! follows from comparing `a²` with `2b²` when the coefficients disagree in
//! sign. Floats appear only in [`QuadInt::to_f64`] / [`QuadRat::to_f64`],
//! which are for display and diagnostics.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::json::{self, JsonError};

/// An element `a + b√2` of Z[√2].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuadInt {
    /// Rational part.
    pub a: BigInt,
    /// Coefficient of √2.
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_integer(a: impl Into<BigInt>) -> Self {
        QuadInt::new(a, 0)
    }

    pub fn zero() -> Self {
        QuadInt::default()
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        QuadInt::new(0, 1)
    }

    /// The silver mean `1 + √2`.
    pub fn silver() -> Self {
        QuadInt::new(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `true` when the √2-coefficient vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b√2`.
    pub fn conj(&self) -> Self {
        QuadInt {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// Field norm `a² - 2b²`, i.e. `x · conj(x)`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - (&self.b * &self.b) * 2
    }

    /// Sign of the real number `a + b√2`: `-1`, `0` or `+1`.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == 0 || sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        // Opposite signs: |a| vs |b|√2 decided by a² vs 2b².
        let a2 = &self.a * &self.a;
        let b2 = (&self.b * &self.b) * 2;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // a² = 2b² has no nonzero integer solution.
            Ordering::Equal => unreachable!("a^2 = 2b^2 with a, b nonzero"),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// `self^exp` by repeated squaring; `x^0 = 1`.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadInt::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Nearest-ish `f64`; see [`QuadRat::to_f64`] for the error bound.
    pub fn to_f64(&self) -> f64 {
        quad_to_f64(&self.a, &self.b, &BigInt::one())
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl From<i64> for QuadInt {
    fn from(a: i64) -> Self {
        QuadInt::from_integer(a)
    }
}

impl From<BigInt> for QuadInt {
    fn from(a: BigInt) -> Self {
        QuadInt::from_integer(a)
    }
}

impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a * &rhs.a + (&self.b * &rhs.b) * 2,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { a: -self.a, b: -self.b }
    }
}

macro_rules! forward_owned_binop {
    ($t:ty, $tr:ident, $method:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $method(self, rhs: &'a $t) -> $t {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(QuadInt, Add, add);
forward_owned_binop!(QuadInt, Sub, sub);
forward_owned_binop!(QuadInt, Mul, mul);

impl Sum for QuadInt {
    fn sum<I: Iterator<Item = QuadInt>>(iter: I) -> Self {
        iter.fold(QuadInt::zero(), |acc, x| acc + x)
    }
}

impl Product for QuadInt {
    fn product<I: Iterator<Item = QuadInt>>(iter: I) -> Self {
        iter.fold(QuadInt::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = |b: &BigInt| -> String {
            if b.is_one() {
                "√2".to_string()
            } else if *b == -BigInt::one() {
                "-√2".to_string()
            } else {
                format!("{b}√2")
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => f.write_str(&root(&self.b)),
            (false, false) => {
                let op = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}", self.a, op, root(&self.b.abs()))
            }
        }
    }
}

/// An element `(a + b√2) / den` of Q(√2) in lowest terms with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRat {
    num: QuadInt,
    den: BigInt,
}

impl QuadRat {
    /// Builds and reduces `num / den`.
    ///
    /// Panics if `den` is zero; use [`QuadRat::try_new`] for untrusted input.
    pub fn new(num: QuadInt, den: impl Into<BigInt>) -> Self {
        QuadRat::try_new(num, den).expect("QuadRat denominator must be nonzero")
    }

    pub fn try_new(num: QuadInt, den: impl Into<BigInt>) -> Option<Self> {
        let den = den.into();
        if den.is_zero() {
            return None;
        }
        let mut r = QuadRat { num, den };
        r.reduce();
        Some(r)
    }

    fn reduce(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = -&self.num;
        }
        let g = self.num.a.gcd(&self.num.b).gcd(&self.den);
        if !g.is_one() {
            self.num.a /= &g;
            self.num.b /= &g;
            self.den /= &g;
        }
    }

    pub fn zero() -> Self {
        QuadRat::from(QuadInt::zero())
    }

    pub fn one() -> Self {
        QuadRat::from(QuadInt::one())
    }

    /// The rational `p / q`.
    pub fn from_ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        QuadRat::new(QuadInt::from_integer(p), q)
    }

    pub fn num(&self) -> &QuadInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn into_parts(self) -> (QuadInt, BigInt) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn signum(&self) -> i8 {
        self.num.signum()
    }

    pub fn abs(&self) -> Self {
        QuadRat {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        QuadRat {
            num: self.num.conj(),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        // Powers of a reduced value need not be reduced: (√2/2)² = 2/4.
        QuadRat::new(self.num.pow(exp), self.den.pow(exp))
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        QuadRat::new(self.num.clone(), &self.den * k)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        QuadRat::new(self.num.scale(k), self.den.clone())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(a+b√2) = (a-b√2)/(a²-2b²)
        let norm = self.num.norm();
        Some(QuadRat::new(self.num.conj().scale(&self.den), norm))
    }

    pub fn checked_div(&self, rhs: &QuadRat) -> Option<Self> {
        rhs.recip().map(|inv| self * &inv)
    }

    /// Floating-point value of `(a + b√2) / den`.
    ///
    /// When `a` and `b` share a sign, the two terms are converted separately
    /// and summed; otherwise the value is rewritten as
    /// `(a² - 2b²) / (den · (a - b√2))`, whose denominator has no
    /// cancellation. The result is within a few ulp (about 4) of the true
    /// value for magnitudes inside the `f64` range. The bound is not
    /// certified; floats here are for display only.
    pub fn to_f64(&self) -> f64 {
        quad_to_f64(&self.num.a, &self.num.b, &self.den)
    }
}

fn quad_to_f64(a: &BigInt, b: &BigInt, den: &BigInt) -> f64 {
    let sa = sign_of(a);
    let sb = sign_of(b);
    if sa == 0 || sb == 0 || sa == sb {
        return ratio_to_f64(a, den) + ratio_to_f64(b, den) * std::f64::consts::SQRT_2;
    }
    let norm = a * a - (b * b) * 2;
    let conj = ratio_to_f64(a, &BigInt::one()) - ratio_to_f64(b, &BigInt::one()) * std::f64::consts::SQRT_2;
    ratio_to_f64(&norm, den) / conj
}

/// `n / d` as `f64`, keeping 64+ significant bits before the final rounding.
pub(crate) fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let neg = n.is_negative() != d.is_negative();
    let (n, d) = (n.abs(), d.abs());
    let shift = 64 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    let mag = ldexp(q.to_f64().unwrap_or(f64::INFINITY), -shift);
    if neg {
        -mag
    } else {
        mag
    }
}

fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

impl From<QuadInt> for QuadRat {
    fn from(num: QuadInt) -> Self {
        QuadRat {
            num,
            den: BigInt::one(),
        }
    }
}

impl From<i64> for QuadRat {
    fn from(a: i64) -> Self {
        QuadRat::from(QuadInt::from_integer(a))
    }
}

impl Ord for QuadRat {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num.scale(&other.den);
        let rhs = other.num.scale(&self.den);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &QuadRat) -> QuadRat {
        if self.den == rhs.den {
            return QuadRat::new(&self.num + &rhs.num, self.den.clone());
        }
        let num = self.num.scale(&rhs.den) + rhs.num.scale(&self.den);
        QuadRat::new(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &QuadRat) -> QuadRat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn div(self, rhs: &QuadRat) -> QuadRat {
        self.checked_div(rhs).expect("division by zero in Q(√2)")
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            num: -self.num,
            den: self.den,
        }
    }
}

forward_owned_binop!(QuadRat, Add, add);
forward_owned_binop!(QuadRat, Sub, sub);
forward_owned_binop!(QuadRat, Mul, mul);
forward_owned_binop!(QuadRat, Div, div);

impl Sum for QuadRat {
    fn sum<I: Iterator<Item = QuadRat>>(iter: I) -> Self {
        iter.fold(QuadRat::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.a.is_zero() || self.num.b.is_zero() {
            write!(f, "{}/{}", self.num, self.den)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [json::int_to_number(&self.a), json::int_to_number(&self.b)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        QuadInt::from_json(&value, "value").map_err(serde::de::Error::custom)
    }
}

impl Serialize for QuadRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadRat", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &json::int_to_number(&self.den))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QuadRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        QuadRat::from_json(&value, "value").map_err(serde::de::Error::custom)
    }
}

impl QuadInt {
    /// Reads `[a, b]` (or `[a]`, or a bare integer `a`) from a JSON value.
    /// `field` names the location for error messages.
    pub fn from_json(value: &serde_json::Value, field: &str) -> Result<Self, JsonError> {
        use serde_json::Value;
        match value {
            Value::Number(_) => Ok(QuadInt::from_integer(json::integer(value, field)?)),
            Value::Array(items) if (1..=2).contains(&items.len()) => {
                let a = json::integer(&items[0], &format!("{field}[0]"))?;
                let b = match items.get(1) {
                    Some(v) => json::integer(v, &format!("{field}[1]"))?,
                    None => BigInt::zero(),
                };
                Ok(QuadInt { a, b })
            }
            _ => Err(JsonError::WrongType {
                field: field.to_string(),
                expected: "integer pair [a, b]",
            }),
        }
    }
}

impl QuadRat {
    /// Reads `{"num": [a, b], "den": d}` with `den` (default 1) and `b`
    /// (default 0) optional. A bare `[a, b]` or integer is accepted as an
    /// integral value.
    pub fn from_json(value: &serde_json::Value, field: &str) -> Result<Self, JsonError> {
        use serde_json::Value;
        let Value::Object(map) = value else {
            return QuadInt::from_json(value, field).map(QuadRat::from);
        };
        let num_field = format!("{field}.num");
        let num = match map.get("num") {
            Some(v) => QuadInt::from_json(v, &num_field)?,
            None => return Err(JsonError::Missing { field: num_field }),
        };
        let den_field = format!("{field}.den");
        let den = match map.get("den") {
            Some(v) => json::integer(v, &den_field)?,
            None => BigInt::one(),
        };
        if !den.is_positive() {
            return Err(JsonError::BadDenominator { field: den_field });
        }
        Ok(QuadRat::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(a: i64, b: i64) -> QuadInt {
        QuadInt::new(a, b)
    }

    /// Independent power oracle: plain repeated multiplication.
    fn pow_naive(x: &QuadInt, n: u32) -> QuadInt {
        (0..n).fold(QuadInt::one(), |acc, _| &acc * x)
    }

    #[test]
    fn add_examples() {
        assert_eq!(qi(1, 1) + qi(1, -1), qi(2, 0));
        assert_eq!(qi(0, 0) + qi(3, 2), qi(3, 2));
        let p5 = pow_naive(&QuadInt::silver(), 5);
        assert_eq!(p5, qi(41, 29));
        assert_eq!(qi(41, 29) + qi(-41, 29), qi(0, 58));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(qi(1, 1) * qi(1, 1), qi(3, 2));
        assert_eq!(qi(1, 1) * qi(1, -1), qi(-1, 0));
        assert_eq!(pow_naive(&QuadInt::silver(), 4), qi(17, 12));
        assert_eq!(qi(17, 12) * qi(1, 1), qi(41, 29));
    }

    #[test]
    fn conj_examples() {
        assert_eq!(qi(3, 2).conj(), qi(3, -2));
        assert_eq!(qi(41, 29).conj().conj(), qi(41, 29));
        assert_eq!(qi(3, 2) * qi(3, -2), qi(1, 0));
        assert_eq!(qi(41, 29).norm(), BigInt::from(-1));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(qi(-7, 5).signum(), 1);
        assert_eq!(qi(0, 0).signum(), 0);
        assert_eq!(qi(99, -70).signum(), 1);
        assert_eq!(qi(-99, 70).signum(), -1);
        assert_eq!(qi(7, -5).signum(), -1);
        assert_eq!(qi(0, -3).signum(), -1);
        assert_eq!(qi(4, 0).signum(), 1);
    }

    #[test]
    fn pow_examples() {
        assert_eq!(qi(1, 1).pow(2), qi(3, 2));
        assert_eq!(qi(1, 1).pow(5), pow_naive(&qi(1, 1), 5));
        assert_eq!(qi(1, 1).pow(0), qi(1, 0));
        for n in 0..30 {
            assert_eq!(qi(3, -2).pow(n), pow_naive(&qi(3, -2), n));
        }
    }

    #[test]
    fn rat_cmp_examples() {
        let x = QuadRat::new(qi(1, 1), 2);
        let y = QuadRat::new(qi(3, 2), 5);
        // 5 + 5√2 vs 6 + 4√2  <=>  √2 vs 1
        assert_eq!(x.cmp(&y), Ordering::Greater);
        assert!(x.to_f64() > y.to_f64());
        assert_eq!(x.cmp(&x.clone()), Ordering::Equal);
        assert_eq!(QuadRat::zero().cmp(&QuadRat::new(qi(0, 1), 1000)), Ordering::Less);
    }

    #[test]
    fn canonical_form() {
        let r = QuadRat::new(qi(6, 4), -8);
        assert_eq!(r.num(), &qi(-3, -2));
        assert_eq!(r.den(), &BigInt::from(4));
        assert_eq!(QuadRat::new(qi(0, 0), 17).den(), &BigInt::one());
        assert!(QuadRat::try_new(qi(1, 0), 0).is_none());
    }

    #[test]
    fn to_f64_examples() {
        assert!((QuadRat::from(qi(0, 1)).to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(QuadRat::from(qi(1, 0)).to_f64(), 1.0);
        let v = QuadRat::new(qi(41, 29), 2).to_f64();
        let oracle = (41.0 + 29.0 * 2f64.sqrt()) / 2.0;
        assert!((v - oracle).abs() < 1e-13);
        assert_eq!(format!("{:.3}", QuadRat::from(qi(0, 1)).to_f64()), "1.414");
    }

    #[test]
    fn to_f64_survives_cancellation() {
        // (√2 - 1)^20 = p - q√2 with p, q ~ 1e7; naive evaluation loses
        // about half the digits.
        let x = qi(-1, 1).pow(20);
        let expected = (2f64.sqrt() - 1.0).powi(20);
        assert!(((x.to_f64() - expected) / expected).abs() < 1e-13);
    }

    #[test]
    fn recip_and_division() {
        let x = QuadRat::new(qi(3, 2), 7);
        let inv = x.recip().unwrap();
        assert_eq!(&x * &inv, QuadRat::one());
        assert!(QuadRat::zero().recip().is_none());
        assert_eq!(
            QuadRat::from(qi(41, 29)) / QuadRat::from(qi(17, 12)),
            QuadRat::from(qi(1, 1))
        );
    }

    #[test]
    fn display() {
        assert_eq!(qi(3, 2).to_string(), "3 + 2√2");
        assert_eq!(qi(3, -2).to_string(), "3 - 2√2");
        assert_eq!(qi(0, 1).to_string(), "√2");
        assert_eq!(qi(0, -29).to_string(), "-29√2");
        assert_eq!(qi(0, 0).to_string(), "0");
        assert_eq!(QuadRat::new(qi(3, 2), 2).to_string(), "(3 + 2√2)/2");
        assert_eq!(QuadRat::new(qi(0, 1), 36).to_string(), "√2/36");
    }

    #[test]
    fn json_shapes() {
        let r = QuadRat::new(qi(-3, 5), 4);
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, r#"{"num":[-3,5],"den":4}"#);
        let back: QuadRat = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let short: QuadRat = serde_json::from_str(r#"{"num":[7]}"#).unwrap();
        assert_eq!(short, QuadRat::from(7));
        let huge = qi(1, 1).pow(200);
        let text = serde_json::to_string(&huge).unwrap();
        assert_eq!(serde_json::from_str::<QuadInt>(&text).unwrap(), huge);
        assert!(serde_json::from_str::<QuadRat>(r#"{"num":[1.5, 0]}"#).is_err());
        assert!(serde_json::from_str::<QuadRat>(r#"{"num":[1, 0], "den": 0}"#).is_err());
    }
}
