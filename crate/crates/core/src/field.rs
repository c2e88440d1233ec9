//! Exact scalars: arbitrary-precision rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot read `{text}` as a scalar: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: &'static str,
}

impl ParseScalarError {
    fn new(text: &str, reason: &'static str) -> Self {
        ParseScalarError { text: text.to_string(), reason }
    }
}

/// A field with exact arithmetic.
///
/// Methods take references so that big rationals are not cloned on every
/// operation.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn parse_scalar(text: &str) -> Result<Self, ParseScalarError>;
    /// 0 for the rationals.
    fn characteristic() -> u64;
    /// Short name used in reports, e.g. `rat` or `fp:7`.
    fn label() -> String;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add(&a.mul(b));
    }
}

/// Rational number with an inline fast path for values that fit in `i64`.
///
/// Invariant: `Small(n, d)` has `d > 0` and `gcd(n, d) = 1`; a `Big` value
/// never fits the small representation.
#[derive(Clone)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Rational::Small(n, d);
        }
        Rational::Big(r)
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        match self {
            Rational::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => (r.numer().clone(), r.denom().clone()),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(x), Rational::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }

    fn one() -> Self {
        Rational::Small(1, 1)
    }

    fn from_i64(v: i64) -> Self {
        Rational::Small(v, 1)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    fn add(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if b == d {
                    return Rational::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(s) => Rational::from_i128(s, z),
                        None => Rational::from_big(self.to_big() + rhs.to_big()),
                    },
                    _ => Rational::from_big(self.to_big() + rhs.to_big()),
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let n = *a as i128 * *c as i128;
                let m = *b as i128 * *d as i128;
                Rational::from_i128(n, m)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }

    fn neg(&self) -> Self {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, *d),
                None => Rational::from_big(-self.to_big()),
            },
            Rational::Big(r) => Rational::from_big(-r.clone()),
        }
    }

    fn inv(&self) -> Option<Self> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(n, d) => Some(Rational::from_i128(*d as i128, *n as i128)),
            Rational::Big(r) => Some(Rational::from_big(r.recip())),
        }
    }

    fn parse_scalar(text: &str) -> Result<Self, ParseScalarError> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = num
            .parse()
            .map_err(|_| ParseScalarError::new(text, "numerator is not an integer"))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| ParseScalarError::new(text, "denominator is not an integer"))?;
        if d.is_zero() {
            return Err(ParseScalarError::new(text, "zero denominator"));
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }

    fn characteristic() -> u64 {
        0
    }

    fn label() -> String {
        "rat".to_string()
    }
}

/// Residue class modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        let p = P as i128;
        Fp(((v as i128 % p + p) % p) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        let p = P as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1 % P)
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }

    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(P - self.0)
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn parse_scalar(text: &str) -> Result<Self, ParseScalarError> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let reduce = |s: &str| -> Result<Self, ParseScalarError> {
            let v: BigInt = s
                .parse()
                .map_err(|_| ParseScalarError::new(text, "not an integer"))?;
            let r = v.mod_floor(&BigInt::from(P));
            Ok(Fp(r.to_u64().unwrap_or(0)))
        };
        let n = reduce(num)?;
        let d = reduce(den)?;
        d.inv()
            .map(|di| n.mul(&di))
            .ok_or_else(|| ParseScalarError::new(text, "denominator vanishes modulo p"))
    }

    fn characteristic() -> u64 {
        P
    }

    fn label() -> String {
        format!("fp:{P}")
    }
}

/// Moduli the command line can instantiate.
pub const SUPPORTED_PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 101, 32003, 65521, 1_000_003, 1_000_000_007];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Rational {
    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self {
            Rational::Small(n, _) => n.signum() as i32,
            Rational::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn rational_parse_and_display() {
        let r = Rational::parse_scalar("-6/4").unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::parse_scalar("5").unwrap(), Rational::from_i64(5));
        assert!(Rational::parse_scalar("1/0").is_err());
        assert!(Rational::parse_scalar("x").is_err());
    }

    #[test]
    fn rational_overflow_promotes() {
        let big = Rational::from_i64(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq.mul(&big.inv().unwrap());
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(..)));
        let m = Rational::from_i64(i64::MIN).neg();
        assert_eq!(m.add(&Rational::from_i64(i64::MIN)), Rational::zero());
    }

    #[test]
    fn prime_field_inverse() {
        for v in 1..7 {
            let x = F7::from_i64(v);
            assert!(x.mul(&x.inv().unwrap()).is_one());
        }
        assert_eq!(F7::parse_scalar("1/2").unwrap(), F7::from_i64(4));
        assert_eq!(F7::from_i64(-1), F7::from_i64(6));
        assert!(F7::parse_scalar("3/7").is_err());
    }

    #[test]
    fn primality() {
        assert!(SUPPORTED_PRIMES.iter().all(|&p| is_prime(p)));
        assert!(!is_prime(1) && !is_prime(91));
    }
}
