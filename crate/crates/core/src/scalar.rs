//! Exact scalars over ℚ or a prime field GF(p).
//!
//! Every scalar knows its field; mixing fields in arithmetic is a
//! programming error and panics. All arithmetic is exact: rationals stay
//! reduced with positive denominator, prime-field residues stay in `[0, p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a computation: ℚ or GF(p) with p prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

const MAX_PRIME: u64 = (1 << 31) - 1;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Prime field of order `p`. Fails when `p` is not prime or too large
    /// for overflow-free residue arithmetic.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::InvalidInput(format!("modulus {p} too large")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    /// 0 for ℚ, p for GF(p).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Mod(0, *p),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::PrimeField(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Mod(r, *p)
            }
        }
    }

    /// Parses "a", "-a" or "a/b". Over GF(p) the division is carried out in
    /// the field.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        let den: BigInt = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
            FieldSpec::PrimeField(p) => {
                let reduce = |x: &BigInt| -> u64 {
                    let m = BigInt::from(*p);
                    let r = ((x % &m) + &m) % &m;
                    // r in [0, p), p fits u64
                    u64::try_from(r).unwrap()
                };
                let n = Scalar::Mod(reduce(&num), *p);
                let d = Scalar::Mod(reduce(&den), *p);
                let d_inv = d
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("denominator of {s:?} is 0 mod {p}")))?;
                Ok(&n * &d_inv)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// An exact field element: a reduced rational or a residue mod p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64, u64),
}

impl Scalar {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod(_, p) => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(r, _) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod(r, _) => *r == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Mod(r, p) => {
                if *r == 0 {
                    None
                } else {
                    Some(Scalar::Mod(mod_inv(*r, *p), *p))
                }
            }
        }
    }

    fn assert_same(&self, other: &Scalar) {
        if self.spec() != other.spec() {
            panic!("field mismatch: {} vs {}", self.spec(), other.spec());
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p); p prime, a != 0 mod p
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of non-unit mod {p}");
    s0.rem_euclid(p as i128) as u64
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod((a + b) % p, *p),
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.assert_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod((a + p - b) % p, *p),
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => {
                Scalar::Mod(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod(a, p) => Scalar::Mod(if *a == 0 { 0 } else { p - a }, *p),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(r, _) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_rationals() {
        let q = FieldSpec::rationals();
        assert_eq!(q.parse("3/6").unwrap().to_string(), "1/2");
        assert_eq!(q.parse("-4/2").unwrap().to_string(), "-2");
        assert_eq!(q.parse("0/5").unwrap(), q.zero());
        assert_eq!(q.parse("2/-4").unwrap().to_string(), "-1/2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn parse_prime_field() {
        let f7 = FieldSpec::prime_field(7).unwrap();
        assert_eq!(f7.parse("10").unwrap(), Scalar::Mod(3, 7));
        assert_eq!(f7.parse("-1").unwrap(), Scalar::Mod(6, 7));
        assert_eq!(f7.parse("1/2").unwrap(), Scalar::Mod(4, 7));
        assert!(f7.parse("1/7").is_err());
        assert!(FieldSpec::prime_field(6).is_err());
        assert!(FieldSpec::prime_field(1).is_err());
    }

    #[test]
    fn gf3_double_inverse() {
        // 2 * 2 = 4 = 1 mod 3
        let f3 = FieldSpec::prime_field(3).unwrap();
        let two = f3.from_i64(2);
        assert_eq!(&two * &two, f3.one());
        assert_eq!(two.inv().unwrap(), two);
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let a = FieldSpec::rationals().one();
        let b = FieldSpec::prime_field(3).unwrap().one();
        let _ = &a + &b;
    }

    #[test]
    fn canonical_after_ops() {
        let q = FieldSpec::rationals();
        let a = q.parse("2/3").unwrap();
        let b = q.parse("4/3").unwrap();
        let s = &a + &b; // 2
        match &s {
            Scalar::Rat(r) => {
                use num::Signed;
                assert!(r.denom().is_one());
                assert!(r.denom().is_positive());
            }
            _ => unreachable!(),
        }
    }
}
