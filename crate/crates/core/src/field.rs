//! Exact scalars over the two coefficient fields used throughout the crate:
//! arbitrary-precision rationals and odd prime fields `F_p` with `p < 2^31`.
//!
//! The prime bound keeps all modular products inside `u64` without widening.
//! Mixed-field arithmetic is a programming error once inputs have been
//! validated, so the binary operations panic on mismatched fields; every
//! boundary that accepts external data goes through a fallible constructor.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;
use std::str::FromStr;

/// Coefficient field descriptor carried by every scalar and container.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    /// The rational numbers with arbitrary-precision arithmetic.
    Rational,
    /// The prime field `F_p`; the modulus is an odd prime below `2^31`.
    Prime(u64),
}

impl FieldKind {
    /// Validated constructor for a prime field.
    pub fn prime(p: u64) -> Result<Self> {
        if is_odd_prime_u31(p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(Error::InvalidModulus(p))
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldKind::Rational)
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "q"),
            FieldKind::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    /// Accepts `q` (or `rational`) for the rationals and a decimal odd prime
    /// below `2^31` for a prime field.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "q" | "Q" | "rational" => Ok(FieldKind::Rational),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| Error::Invalid(format!("unrecognized field `{t}`")))?;
                FieldKind::prime(p)
            }
        }
    }
}

/// Deterministic Miller-Rabin for `n < 2^31`; bases 2, 3, 5, 7 suffice there.
/// Returns false for 2 since only odd primes are supported moduli.
pub fn is_odd_prime_u31(n: u64) -> bool {
    if !(3..1 << 31).contains(&n) || n.is_multiple_of(2) {
        return false;
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &[2u64, 3, 5, 7] {
        if a % n == 0 {
            continue;
        }
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x * x) % n;
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// An exact field element tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Fp { p: u64, val: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Fp { p, .. } => FieldKind::Prime(*p),
        }
    }

    pub fn zero(field: FieldKind) -> Self {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldKind) -> Self {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldKind, n: i64) -> Self {
        match field {
            FieldKind::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Prime(p) => {
                let m = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, val: m }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    fn expect_same_field(&self, other: &Scalar) -> FieldKind {
        let (a, b) = (self.field(), other.field());
        assert_eq!(a, b, "mixed-field arithmetic: {a} vs {b}");
        a
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.expect_same_field(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                Scalar::Fp { p: *p, val: (a + b) % p }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Fp { p, val } => Scalar::Fp { p: *p, val: (p - val) % p },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.expect_same_field(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                // p < 2^31, so the product fits in u64.
                Scalar::Fp { p: *p, val: a * b % p }
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Fp { p, val } => Scalar::Fp { p: *p, val: mod_inv(*val, *p) },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut acc = Scalar::one(self.field());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Parses a scalar in the given field. Rationals accept `a` or `a/b`
    /// with arbitrary-precision integers; prime fields accept any integer
    /// and reduce it mod p.
    pub fn parse(field: FieldKind, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match field {
            FieldKind::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), Some(d.trim())),
                    None => (s, None),
                };
                let n = BigInt::from_str(num)
                    .map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
                let d = match den {
                    Some(d) => BigInt::from_str(d)
                        .map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?,
                    None => BigInt::one(),
                };
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            FieldKind::Prime(p) => {
                let n = BigInt::from_str(s)
                    .map_err(|_| Error::Invalid(format!("bad integer `{s}`")))?;
                let m = n.mod_floor_u64(p);
                Ok(Scalar::Fp { p, val: m })
            }
        }
    }

    /// Reads a scalar from a JSON value: either an integer number or a string
    /// in the syntax of [`Scalar::parse`].
    pub fn from_json(field: FieldKind, v: &serde_json::Value) -> Result<Scalar> {
        match v {
            serde_json::Value::Number(n) => {
                let i = n
                    .as_i64()
                    .ok_or_else(|| Error::Invalid(format!("non-integer scalar {n}")))?;
                Ok(Scalar::from_i64(field, i))
            }
            serde_json::Value::String(s) => Scalar::parse(field, s),
            other => Err(Error::Invalid(format!("expected scalar, found {other}"))),
        }
    }

    /// Emits a scalar as JSON: prime-field elements as numbers, rationals as
    /// strings (`"a"` or `"a/b"`), so arbitrary precision survives the trip.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rational(r) => serde_json::Value::String(r.to_string()),
            Scalar::Fp { val, .. } => serde_json::Value::Number((*val).into()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num::{Integer, ToPrimitive};
        self.mod_floor(&BigInt::from(p))
            .to_u64()
            .expect("mod_floor lands in [0, p)")
    }
}

/// Extended-Euclid inverse; `a` must be nonzero mod the odd prime `p`.
fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse of non-unit");
    t0.rem_euclid(p as i64) as u64
}
