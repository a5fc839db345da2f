//! Exact rationals with a machine-word fast path.
//!
//! Values are kept as reduced `i64` fractions while every intermediate fits
//! in `i128`; anything larger is promoted to a big fraction and demoted again
//! once it fits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    /// Reduced, positive denominator.
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    /// `n/d`. Panics when `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    pub fn from_big(r: BigRational) -> Self {
        Self::demote(r)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// Numerator and denominator when both fit in `i64`.
    pub fn as_i64_pair(&self) -> Option<(i64, i64)> {
        match &self.0 {
            Repr::Small(n, d) => Some((*n, *d)),
            Repr::Big(_) => None,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// `[num, den]`; components beyond `i64` are written as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        match &self.0 {
            Repr::Small(n, d) => serde_json::json!([n, d]),
            Repr::Big(r) => serde_json::json!([r.numer().to_string(), r.denom().to_string()]),
        }
    }

    /// Reads `[num, den]` (integers or decimal strings), a bare integer, or
    /// a string `"n/d"`.
    pub fn from_json(v: &serde_json::Value) -> std::result::Result<Self, String> {
        use serde_json::Value;
        let int = |v: &Value| -> std::result::Result<BigInt, String> {
            match v {
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| format!("{n} is not an integer")),
                Value::String(s) => s.parse::<BigInt>().map_err(|e| format!("{s:?}: {e}")),
                other => Err(format!("expected an integer, found {other}")),
            }
        };
        match v {
            Value::Array(a) if a.len() == 2 => {
                let (n, d) = (int(&a[0])?, int(&a[1])?);
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Self::demote(BigRational::new(n, d)))
            }
            Value::Number(_) => Ok(Self::demote(BigRational::from_integer(int(v)?))),
            Value::String(s) => s.parse(),
            other => Err(format!("expected [numerator, denominator], found {other}")),
        }
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let word = |x: i128| x.unsigned_abs() < i64::MAX as u128;
        let g = if word(n) && word(d) {
            (n as i64).gcd(&(d as i64)) as i128
        } else {
            n.gcd(&d)
        };
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn demote(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn small(&self) -> Option<(i128, i128)> {
        match &self.0 {
            Repr::Small(n, d) => Some((*n as i128, *d as i128)),
            Repr::Big(_) => None,
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.small(), other.small()) {
            if b == d {
                return Self::from_i128(a + c, b);
            }
            if let Some(n) = a.checked_mul(d).and_then(|x| c.checked_mul(b).and_then(|y| x.checked_add(y))) {
                return Self::from_i128(n, b * d);
            }
        }
        Self::demote(self.to_big() + other.to_big())
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.small(), other.small()) {
            return Self::from_i128(a * c, b * d);
        }
        Self::demote(self.to_big() * other.to_big())
    }

    fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "division by zero");
                Self::from_i128(*d as i128, *n as i128)
            }
            Repr::Big(r) => Self::demote(r.recip()),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            // both sides are normalized, so a big value never equals a small one
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.small(), other.small()) {
            (Some((a, b)), Some((c, d))) => (a * d).cmp(&(c * b)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl std::hash::Hash for Rational {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = String;

    /// Accepts `n` or `n/d` with arbitrary-size integers.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|e| format!("bad rational {s:?}: {e}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (parse(n)?, parse(d)?),
            None => (parse(s)?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(format!("bad rational {s:?}: zero denominator"));
        }
        Ok(Self::demote(BigRational::new(n, d)))
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(n) => Rational(Repr::Small(n, d)),
                None => Self::demote(-BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
            },
            Repr::Big(r) => Self::demote(-r),
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, other: Rational) -> Rational {
        self.add_impl(&other)
    }
}

impl Add<&Rational> for Rational {
    type Output = Rational;
    fn add(self, other: &Rational) -> Rational {
        self.add_impl(other)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, other: &Rational) -> Rational {
        self.add_impl(other)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, other: Rational) -> Rational {
        self.add_impl(&-other)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, other: Rational) -> Rational {
        self.mul_impl(&other)
    }
}

impl Mul<&Rational> for Rational {
    type Output = Rational;
    fn mul(self, other: &Rational) -> Rational {
        self.mul_impl(other)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, other: &Rational) -> Rational {
        self.mul_impl(other)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, other: Rational) -> Rational {
        self.mul_impl(&other.recip())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        let r = Rational::new(6, -4);
        assert_eq!(r.as_i64_pair(), Some((-3, 2)));
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sq = big.clone() * &big;
        assert!(sq.as_i64_pair().is_none());
        let back = sq / big.clone();
        assert_eq!(back, big);
        assert!(back.as_i64_pair().is_some());
        assert_eq!(-Rational::from_integer(i64::MIN), "9223372036854775808".parse().unwrap());
    }

    #[test]
    fn parses_fractions() {
        assert_eq!("3/-6".parse::<Rational>().unwrap(), Rational::new(-1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let big = Rational::from_integer(i64::MAX) * &Rational::new(3, 1);
        for r in [Rational::new(-3, 4), Rational::zero(), big] {
            assert_eq!(Rational::from_json(&r.to_json()).unwrap(), r);
        }
        assert_eq!(Rational::from_json(&serde_json::json!(5)).unwrap(), Rational::from_integer(5));
        assert!(Rational::from_json(&serde_json::json!([1, 0])).is_err());
        assert!(Rational::from_json(&serde_json::json!([1.5, 2])).is_err());
    }

    #[test]
    fn ordering_is_numeric() {
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert!(Rational::new(-1, 2) < Rational::zero());
    }
}
