//! Exact scalar fields: the rationals and prime fields of characteristic at least 7.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Largest supported prime modulus.
pub const MAX_PRIME: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The prime field of order `p`. Characteristics 2, 3 and 5 are rejected.
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if p < 7 || p >= MAX_PRIME || !is_prime(p) {
            return Err(AlgebraError::UnsupportedCharacteristic(p));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `Q` or `Fp:<p>`.
    pub fn parse_spec(spec: &str) -> Result<Self, AlgebraError> {
        let s = spec.trim();
        if s == "Q" || s == "QQ" {
            return Ok(Field::Rationals);
        }
        let rest = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("F:"))
            .ok_or_else(|| AlgebraError::Parse(format!("unknown field spec `{s}`")))?;
        let p: u64 = rest
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad prime in field spec `{s}`")))?;
        Field::prime(p)
    }

    pub fn spec(self) -> String {
        match self {
            Field::Rationals => "Q".to_string(),
            Field::Prime(p) => format!("Fp:{p}"),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldElement::Residue {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                FieldElement::Residue {
                    value: r.to_u64().expect("reduced residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// Maps a rational number into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(self, q: &BigRational) -> Result<FieldElement, AlgebraError> {
        match self {
            Field::Rationals => Ok(FieldElement::Rational(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                let inv = den.inv().ok_or_else(|| {
                    AlgebraError::Parse(format!("denominator of {q} vanishes in {}", self.spec()))
                })?;
                Ok(&num * &inv)
            }
        }
    }

    /// Parses a coefficient literal `a`, `-a` or `a/b`.
    pub fn parse(self, s: &str) -> Result<FieldElement, AlgebraError> {
        let s = s.trim();
        let bad = || AlgebraError::Parse(format!("bad coefficient literal `{s}`"));
        let q = match s.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(bad());
                }
                BigRational::new(a, b)
            }
            None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
        };
        self.from_rational(&q)
    }

    /// Every element of a prime field, in increasing order of representative.
    pub fn elements(self) -> Option<impl Iterator<Item = FieldElement>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..p).map(move |value| FieldElement::Residue { value, modulus: p })),
        }
    }

    pub fn contains(self, e: &FieldElement) -> bool {
        e.field() == self
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.spec())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Field::parse_spec(&s).map_err(serde::de::Error::custom)
    }
}

/// An exact scalar. Rationals are kept reduced with positive denominator,
/// residues in `[0, p-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rationals,
            FieldElement::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Exact rational value, when over the rationals.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            FieldElement::Residue { .. } => None,
        }
    }

    /// Serialized literal: `a/b` for rationals, `r` for residues.
    pub fn to_literal(&self) -> String {
        match self {
            FieldElement::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
            FieldElement::Residue { value, .. } => value.to_string(),
        }
    }

    fn check_same(&self, other: &FieldElement) {
        assert_eq!(
            self.field(),
            other.field(),
            "arithmetic between elements of different fields"
        );
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a.cmp(b),
            (
                FieldElement::Residue { value: a, modulus: m },
                FieldElement::Residue { value: b, modulus: n },
            ) => (m, a).cmp(&(n, b)),
            (FieldElement::Rational(_), _) => Ordering::Less,
            (_, FieldElement::Rational(_)) => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Residue { value: a, modulus }, FieldElement::Residue { value: b, .. }) => {
                FieldElement::Residue {
                    value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (FieldElement::Residue { value: a, modulus }, FieldElement::Residue { value: b, .. }) => {
                FieldElement::Residue {
                    value: ((*a as u128 + *modulus as u128 - *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Residue { value: a, modulus }, FieldElement::Residue { value: b, .. }) => {
                FieldElement::Residue {
                    value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero.
    fn div(self, rhs: &FieldElement) -> FieldElement {
        let inv = rhs.inv().expect("division by zero field element");
        self * &inv
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
