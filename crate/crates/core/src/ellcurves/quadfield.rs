use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_squarefree;

/// a + b sqrt(D) with exact rational a, b. `d == 1` encodes Q; an element of
/// Q (b = 0) combines with elements of any Q(sqrt D).
#[derive(Debug, Clone)]
pub struct QuadFieldElem {
    a: BigRational,
    b: BigRational,
    d: i64,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `n` or `n/d`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| err())?,
        )),
    }
}

/// Square root of a nonnegative rational, if it is a square.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

pub fn check_field(d: i64) -> Result<()> {
    if d == 1 || (d != 0 && is_squarefree(d)) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{d} is not a squarefree integer different from 0"
        )))
    }
}

impl QuadFieldElem {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Result<Self> {
        check_field(d)?;
        if d == 1 && !b.is_zero() {
            return Err(Error::InvalidArgument(
                "rational element with b != 0".into(),
            ));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// sqrt(D) itself.
    pub fn sqrt_d(d: i64) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Same value viewed in Q(sqrt d).
    pub fn in_field(&self, d: i64) -> Self {
        if self.d == d || !self.b.is_zero() {
            self.clone()
        } else {
            Self {
                a: self.a.clone(),
                b: BigRational::zero(),
                d,
            }
        }
    }

    fn common_d(&self, other: &Self) -> i64 {
        match (self.d, other.d) {
            (x, y) if x == y => x,
            (1, y) if self.b.is_zero() => y,
            (x, 1) if other.b.is_zero() => x,
            (x, _) if other.b.is_zero() => x,
            (_, y) if self.b.is_zero() => y,
            (x, y) => panic!("elements of Q(sqrt {x}) and Q(sqrt {y}) do not mix"),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * int(self.d)
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(1).in_field(self.d);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// A square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::rational(r).in_field(self.d));
            }
            if self.d == 1 {
                return None;
            }
            let y = rational_sqrt(&(&self.a / int(self.d)))?;
            return Some(Self {
                a: BigRational::zero(),
                b: y,
                d: self.d,
            });
        }
        // (x + y sqrt D)^2 = a + b sqrt D: x^2 + D y^2 = a, 2xy = b
        let n = rational_sqrt(&self.norm())?;
        let two = int(2);
        for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(x) = rational_sqrt(&cand) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let r = Self {
                    a: x,
                    b: y,
                    d: self.d,
                };
                if &(&r * &r) == self {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Least common denominator of both coordinates.
    pub fn denominator(&self) -> BigInt {
        num_integer::Integer::lcm(self.a.denom(), self.b.denom())
    }
}

impl PartialEq for QuadFieldElem {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (self.d == o.d || self.b.is_zero())
    }
}

impl Eq for QuadFieldElem {}

impl std::hash::Hash for QuadFieldElem {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.a.hash(h);
        self.b.hash(h);
        if !self.b.is_zero() {
            self.d.hash(h);
        }
    }
}

impl fmt::Display for QuadFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Serialize for QuadFieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            a: String,
            b: String,
            #[serde(rename = "D")]
            d: i64,
        }
        Repr {
            a: self.a.to_string(),
            b: self.b.to_string(),
            d: self.d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadFieldElem {
    fn deserialize<De: serde::Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        #[derive(Deserialize)]
        struct Repr {
            a: String,
            b: String,
            #[serde(rename = "D")]
            d: i64,
        }
        let r = Repr::deserialize(de)?;
        let a = parse_rational(&r.a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&r.b).map_err(serde::de::Error::custom)?;
        QuadFieldElem::new(a, b, r.d).map_err(serde::de::Error::custom)
    }
}

impl FromStr for QuadFieldElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::rational(parse_rational(s)?))
    }
}

impl QuadFieldElem {
    /// `x` for a rational, `x,y` for x + y sqrt D; x and y are `n` or `n/d`.
    pub fn parse_in_field(s: &str, d: i64) -> Result<Self> {
        check_field(d)?;
        match s.split_once(',') {
            None => Ok(Self::rational(parse_rational(s)?).in_field(d)),
            Some((x, y)) => {
                let y = parse_rational(y)?;
                if d == 1 && !y.is_zero() {
                    return Err(Error::Parse(format!("{s:?} needs a quadratic field")));
                }
                Self::new(parse_rational(x)?, y, d)
            }
        }
    }
}

impl From<BigRational> for QuadFieldElem {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

impl<'a> Add<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn add(self, o: &QuadFieldElem) -> QuadFieldElem {
        let d = self.common_d(o);
        QuadFieldElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d,
        }
    }
}

impl<'a> Sub<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn sub(self, o: &QuadFieldElem) -> QuadFieldElem {
        let d = self.common_d(o);
        QuadFieldElem {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            d,
        }
    }
}

impl<'a> Mul<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn mul(self, o: &QuadFieldElem) -> QuadFieldElem {
        let d = self.common_d(o);
        QuadFieldElem {
            a: &self.a * &o.a + &self.b * &o.b * int(d),
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl<'a> Div<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn div(self, o: &QuadFieldElem) -> QuadFieldElem {
        self * &o.inv().expect("division by zero in Q(sqrt D)")
    }
}

impl Neg for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        QuadFieldElem {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadFieldElem {
            type Output = QuadFieldElem;
            fn $m(self, o: QuadFieldElem) -> QuadFieldElem {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: i64) -> QuadFieldElem {
        QuadFieldElem::new(int(a), int(b), d).unwrap()
    }

    #[test]
    fn arithmetic() {
        let x = q(1, 1, 5);
        let y = q(2, -3, 5);
        assert_eq!(&x * &y, q(2 - 15, -3 + 2, 5));
        assert_eq!(&(&x / &y) * &y, x);
        assert_eq!(x.norm(), int(-4));
        let r = QuadFieldElem::from_int(3);
        assert_eq!(&r + &x, q(4, 1, 5));
        assert!(QuadFieldElem::new(int(1), int(1), 4).is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(
            QuadFieldElem::from_int(4).sqrt(),
            Some(QuadFieldElem::from_int(2))
        );
        assert!(QuadFieldElem::from_int(2).sqrt().is_none());
        let m7 = QuadFieldElem::from_int(-7).in_field(-7);
        assert_eq!(m7.sqrt(), Some(q(0, 1, -7)));
        let z = q(3, 2, 5);
        let sq = &z * &z;
        let r = sq.sqrt().unwrap();
        assert_eq!(&r * &r, sq);
        assert!(q(1, 1, 5).sqrt().is_none());
    }

    #[test]
    fn parsing_in_field() {
        let x = QuadFieldElem::parse_in_field("1/2,-3", 5).unwrap();
        assert_eq!(x, QuadFieldElem::new(rat(1, 2), rat(-3, 1), 5).unwrap());
        assert_eq!(
            QuadFieldElem::parse_in_field("7", 5).unwrap(),
            QuadFieldElem::from_int(7)
        );
        assert!(QuadFieldElem::parse_in_field("1,1", 1).is_err());
        assert!(QuadFieldElem::parse_in_field("1,x", 5).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("2268945/128").unwrap(), rat(2268945, 128));
        assert_eq!(parse_rational("-12").unwrap(), int(-12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
