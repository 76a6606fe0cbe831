//! Exact arithmetic in ℚ(√m₁, √m₂, …): finite sums of rational multiples of
//! square roots of squarefree positive integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurdError {
    #[error("square root of negative rational {0}")]
    NegativeSqrt(Rational),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(numer: N, denom: D) -> Self {
        let d: BigInt = denom.into();
        assert!(!d.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), d))
    }

    pub fn from_integer<N: Into<BigInt>>(n: N) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            BigSign::Minus => -1,
            BigSign::NoSign => 0,
            BigSign::Plus => 1,
        }
    }

    /// The value as an integer, when the denominator is 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, e: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

macro_rules! rational_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = SurdError;
    fn from_str(s: &str) -> Result<Self, SurdError> {
        parse_rational_at(s, 0)
    }
}

fn parse_rational_at(s: &str, offset: usize) -> Result<Rational, SurdError> {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    let err = |pos: usize, msg: &str| SurdError::Parse {
        pos: offset + lead + pos,
        msg: msg.to_string(),
    };
    if t.is_empty() {
        return Err(err(0, "expected a rational number"));
    }
    let (num, den) = match t.find('/') {
        Some(i) => (&t[..i], Some((i + 1, &t[i + 1..]))),
        None => (t, None),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| err(0, &format!("invalid integer '{}'", num.trim())))?;
    let d: BigInt = match den {
        Some((at, d)) => d
            .trim()
            .parse()
            .map_err(|_| err(at, &format!("invalid denominator '{}'", d.trim())))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err(t.len().saturating_sub(1), "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(de::Error::custom),
            serde_json::Value::Number(n) => n.to_string().parse().map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("expected rational, got {other}"))),
        }
    }
}

/// Exact sign of a real number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// `Σ qᵢ·√mᵢ` with distinct squarefree radicands and nonzero coefficients.
/// Radicand 1 holds the rational part. The representation is canonical,
/// so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: BTreeMap<BigUint, Rational>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Surd::from_rational(Rational::from(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(BigUint::one(), q);
        }
        Surd { terms }
    }

    /// `q·√m` for an arbitrary positive integer `m` (square factors are
    /// pulled out).
    pub fn term(q: Rational, m: &BigUint) -> Self {
        if q.is_zero() || m.is_zero() {
            return Surd::zero();
        }
        let (s, core) = squarefree_decompose(m);
        let mut terms = BTreeMap::new();
        terms.insert(core, q * Rational::from(BigInt::from(s)));
        Surd { terms }
    }

    /// Canonical √x for a nonnegative rational x, as a single term.
    pub fn sqrt(x: &Rational) -> Result<Self, SurdError> {
        if x.is_negative() {
            return Err(SurdError::NegativeSqrt(x.clone()));
        }
        if x.is_zero() {
            return Ok(Surd::zero());
        }
        // √(a/b) = √(ab)/b
        let a = x.numer().magnitude();
        let b = x.denom().magnitude();
        let (s, core) = squarefree_decompose(&(a * b));
        let coef = Rational::new(BigInt::from(s), BigInt::from(b.clone()));
        let mut terms = BTreeMap::new();
        terms.insert(core, coef);
        Ok(Surd { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (radicand, coefficient), ascending by radicand.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    /// The rational part (coefficient of √1).
    pub fn rational_part(&self) -> Rational {
        self.terms.get(&BigUint::one()).cloned().unwrap_or_default()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// The integer value, if this is a rational with denominator 1.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().and_then(|q| q.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn div_rational(&self, q: &Rational) -> Result<Self, SurdError> {
        if q.is_zero() {
            return Err(SurdError::DivisionByZero);
        }
        Ok(self.scale(&q.recip()))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, q)| q.to_f64() * m.to_f64().unwrap_or(f64::INFINITY).sqrt())
            .sum()
    }

    /// Exact sign by interval evaluation at doubling binary precision.
    pub fn sign(&self) -> Sign {
        let sgn = |x: i32| match x {
            x if x < 0 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        };
        match self.terms.len() {
            0 => return Sign::Zero,
            1 => return sgn(self.terms.values().next().unwrap().signum()),
            _ => {}
        }
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scaled: Vec<(&BigUint, BigInt)> = self
            .terms
            .iter()
            .map(|(m, q)| (m, q.numer() * (&den / q.denom())))
            .collect();
        let mut bits: u64 = 64;
        loop {
            let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
            for (m, a) in &scaled {
                let shifted: BigUint = (*m).clone() << (2 * bits);
                let s = shifted.sqrt();
                let exact = &s * &s == shifted;
                let s = BigInt::from(s);
                let s1 = if exact { s.clone() } else { &s + 1 };
                if a.is_positive() {
                    lo += a * &s;
                    hi += a * &s1;
                } else {
                    lo += a * &s1;
                    hi += a * &s;
                }
            }
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            bits *= 2;
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    fn add_term(&mut self, m: BigUint, q: Rational) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for Surd {
    fn from(q: Rational) -> Self {
        Surd::from_rational(q)
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Self {
        Surd::from_int(n)
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), -q);
        }
        out
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        let one = BigUint::one();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &rhs.terms {
                let q = q1 * q2;
                if *m1 == one {
                    out.add_term(m2.clone(), q);
                } else if *m2 == one {
                    out.add_term(m1.clone(), q);
                } else {
                    // √a·√b = g·√((a/g)(b/g)) for squarefree a, b
                    let g = m1.gcd(m2);
                    let m = (m1 / &g) * (m2 / &g);
                    out.add_term(m, q * Rational::from(BigInt::from(g)));
                }
            }
        }
        out
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }
}

macro_rules! surd_owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: &Surd) -> Surd {
                (&self).$m(rhs)
            }
        }
        impl $tr<Surd> for &Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                self.$m(&rhs)
            }
        }
    };
}

surd_owned_ops!(Add, add);
surd_owned_ops!(Sub, sub);
surd_owned_ops!(Mul, mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl AddAssign<&Surd> for Surd {
    fn add_assign(&mut self, rhs: &Surd) {
        for (m, q) in &rhs.terms {
            self.add_term(m.clone(), q.clone());
        }
    }
}

impl AddAssign<Surd> for Surd {
    fn add_assign(&mut self, rhs: Surd) {
        for (m, q) in rhs.terms {
            self.add_term(m, q);
        }
    }
}

impl SubAssign<&Surd> for Surd {
    fn sub_assign(&mut self, rhs: &Surd) {
        for (m, q) in &rhs.terms {
            self.add_term(m.clone(), -q);
        }
    }
}

impl Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        let mut acc = Surd::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, q)) in self.terms.iter().rev().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.0.is_one() {
                write!(f, "sqrt({m})")?;
            } else {
                write!(f, "{a}*sqrt({m})")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Surd {
    type Err = SurdError;

    /// Parses the canonical text form, e.g. `3/2*sqrt(5) + 7`. Radicands
    /// need not be squarefree; terms may repeat.
    fn from_str(s: &str) -> Result<Self, SurdError> {
        let bytes = s.as_bytes();
        let mut out = Surd::zero();
        let mut i = 0;
        let mut first = true;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        loop {
            skip_ws(&mut i);
            if i >= bytes.len() {
                if first {
                    return Err(SurdError::Parse {
                        pos: i,
                        msg: "empty surd".into(),
                    });
                }
                break;
            }
            let mut negative = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                negative = bytes[i] == b'-';
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(SurdError::Parse {
                    pos: i,
                    msg: "expected '+' or '-'".into(),
                });
            }
            first = false;
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &s[start..i];
            let (coef, rad) = parse_term(term, start)?;
            let coef = if negative { -coef } else { coef };
            out += Surd::term(coef, &rad);
        }
        Ok(out)
    }
}

fn parse_term(term: &str, offset: usize) -> Result<(Rational, BigUint), SurdError> {
    let t = term.trim_end();
    match t.find("sqrt(") {
        None => Ok((parse_rational_at(t, offset)?, BigUint::one())),
        Some(at) => {
            let coef = if at == 0 {
                Rational::one()
            } else {
                let head = t[..at].trim_end();
                let head = head.strip_suffix('*').ok_or(SurdError::Parse {
                    pos: offset + at,
                    msg: "expected '*' before sqrt".into(),
                })?;
                parse_rational_at(head, offset)?
            };
            let inner_start = at + 5;
            let close = t.rfind(')').filter(|&c| c == t.len() - 1).ok_or(SurdError::Parse {
                pos: offset + t.len(),
                msg: "expected ')'".into(),
            })?;
            let inner = t[inner_start..close].trim();
            let rad: BigUint = inner.parse().map_err(|_| SurdError::Parse {
                pos: offset + inner_start,
                msg: format!("invalid radicand '{inner}'"),
            })?;
            Ok((coef, rad))
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        struct Terms<'a>(&'a Surd);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.terms.len()))?;
                for (m, q) in self.0.terms.iter().rev() {
                    let rad = match m.to_u64() {
                        Some(v) => serde_json::Value::from(v),
                        None => serde_json::Value::from(m.to_string()),
                    };
                    seq.serialize_element(&(q.to_string(), rad))?;
                }
                seq.end()
            }
        }
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("terms", &Terms(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<(Rational, serde_json::Value)>,
        }
        let raw = Raw::deserialize(d)?;
        let mut out = Surd::zero();
        for (q, m) in raw.terms {
            let m: BigUint = match m {
                serde_json::Value::Number(n) => n.to_string().parse().map_err(de::Error::custom)?,
                serde_json::Value::String(s) => s.parse().map_err(de::Error::custom)?,
                other => return Err(de::Error::custom(format!("bad radicand {other}"))),
            };
            if m.is_zero() {
                return Err(de::Error::custom("radicand must be positive"));
            }
            out += Surd::term(q, &m);
        }
        Ok(out)
    }
}

/// Splits `n = s²·m` with `m` squarefree.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    if let Some(v) = n.to_u64() {
        let (s, m) = squarefree_u64(v);
        return (BigUint::from(s), BigUint::from(m));
    }
    let mut s = BigUint::one();
    let mut m = BigUint::one();
    for (p, e) in factorize(n) {
        if e / 2 > 0 {
            s *= p.pow(e / 2);
        }
        if e % 2 == 1 {
            m *= p;
        }
    }
    (s, m)
}

const TRIAL_BOUND: u64 = 1 << 16;

fn squarefree_u64(mut n: u64) -> (u64, u64) {
    let (mut s, mut m) = (1u64, 1u64);
    let mut p = 2u64;
    // Once no prime ≤ ∛n divides n, n is 1, a prime, a product of two
    // distinct primes, or a prime square.
    while p <= TRIAL_BOUND && p * p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            for _ in 0..e / 2 {
                s *= p;
            }
            if e % 2 == 1 {
                m *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if p * p * p > n {
        let r = n.sqrt();
        if r > 1 && r * r == n {
            s *= r;
        } else {
            m *= n;
        }
        return (s, m);
    }
    let (s2, m2) = squarefree_decompose_big(&BigUint::from(n));
    (s * s2.to_u64().unwrap(), m * m2.to_u64().unwrap())
}

fn squarefree_decompose_big(n: &BigUint) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut m = BigUint::one();
    for (p, e) in factorize(n) {
        if e / 2 > 0 {
            s *= p.pow(e / 2);
        }
        if e % 2 == 1 {
            m *= p;
        }
    }
    (s, m)
}

/// Prime factorization by trial division followed by Pollard's rho.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            *out.entry(bp.clone()).or_default() += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if is_probable_prime(&x) {
            *out.entry(x).or_default() += 1;
            continue;
        }
        let d = pollard_rho(&x);
        let q = &x / &d;
        stack.push(d);
        stack.push(q);
    }
    out.into_iter().collect()
}

fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let r = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> r;
    'witness: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..r {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let r = n.sqrt();
    if &r * &r == *n {
        return r;
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y) = (BigUint::from(2u32), BigUint::from(2u32));
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}
