//! Exact rationals used for endpoints, offsets and scales.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    /// The exact dyadic value of a finite float.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x).map(Rational).ok_or(Error::NonFinite { context: "float to rational" })
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    /// Integer value if the number is an integer that fits `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Nearest float.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.0.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

/// Least common denominator of a list of rationals (1 for an empty list).
pub fn lcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
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

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p`, `p/q`, and plain decimals such as `-0.08` or `1.5e-3`, all parsed exactly.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidRational { text: text.to_string() };
        let s = text.trim();
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Rational(BigRational::new(p, q)));
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let all: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
        let shift = exponent - frac_part.len() as i32;
        if shift.unsigned_abs() > 4096 {
            return Err(bad());
        }
        let ten = BigInt::from(10);
        let mut value = BigRational::from_integer(all);
        let scale = BigRational::from_integer(num_traits::pow(ten, shift.unsigned_abs() as usize));
        value = if shift >= 0 { value * scale } else { value / scale };
        Ok(Rational(if negative { -value } else { value }))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(&self.0, rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

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

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer((*other).into()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Text(String),
}

impl IntRepr {
    fn encode(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Text(n.to_string()),
        }
    }

    fn decode(self) -> std::result::Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(v.into()),
            IntRepr::Text(s) => s.parse().map_err(|_| format!("invalid integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: IntRepr,
    den: IntRepr,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRepr { num: IntRepr::encode(self.numer()), den: IntRepr::encode(self.denom()) }
            .serialize(serializer)
    }
}

/// Accepted inputs: `{num, den}`, a JSON integer, or a literal string such as `"1/3"` or `"0.08"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalInput {
    Pair(RationalRepr),
    Integer(i64),
    Literal(String),
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = match RationalInput::deserialize(deserializer)
            .map_err(|_| D::Error::custom("expected a rational: {num, den}, an integer or a string like \"1/3\""))?
        {
            RationalInput::Pair(repr) => repr,
            RationalInput::Integer(v) => return Ok(Rational::from_integer(v)),
            RationalInput::Literal(text) => return text.parse().map_err(D::Error::custom),
        };
        let num = repr.num.decode().map_err(D::Error::custom)?;
        let den = repr.den.decode().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!("0.08".parse::<Rational>().unwrap(), Rational::new(2, 25));
        assert_eq!("-1.5e-3".parse::<Rational>().unwrap(), Rational::new(-3, 2000));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_integer(7));
        assert_eq!(".5".parse::<Rational>().unwrap(), Rational::new(1, 2));
        for bad in ["", "1/0", "abc", "1.2.3", "-", "1e"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn json_input_forms() {
        let from = |t: &str| serde_json::from_str::<Rational>(t);
        assert_eq!(from("{\"num\": 2, \"den\": 4}").unwrap(), Rational::new(1, 2));
        assert_eq!(from("3").unwrap(), Rational::from_integer(3));
        assert_eq!(from("\"-1/3\"").unwrap(), Rational::new(-1, 3));
        assert!(from("0.5").is_err());
        assert!(from("{\"num\": 1, \"den\": 0}").is_err());
        let big = Rational::from_big(BigInt::from(10).pow(30u32), BigInt::from(7));
        assert_eq!(from(&serde_json::to_string(&big).unwrap()).unwrap(), big);
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(Rational::new(-1, 3).frac(), Rational::new(2, 3));
        assert_eq!(Rational::new(7, 2).frac(), Rational::new(1, 2));
        assert!(Rational::from_integer(-4).frac().is_zero());
    }

    #[test]
    fn serde_round_trip_small_and_big() {
        let small = Rational::new(-3, 8);
        let json = serde_json::to_string(&small).unwrap();
        assert_eq!(json, r#"{"num":-3,"den":8}"#);
        assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), small);

        let big = Rational::from_f64(0.1).unwrap();
        let json = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), big);

        let huge = Rational::from_big(BigInt::from(1) << 80u32, BigInt::from(3));
        let json = serde_json::to_string(&huge).unwrap();
        assert!(json.contains('"'));
        assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), huge);
    }

    #[test]
    fn from_f64_is_exact() {
        let r = Rational::from_f64(0.1).unwrap();
        assert_eq!(r.to_f64(), 0.1);
        assert_ne!(r, Rational::new(1, 10));
        assert!(Rational::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn lcd_of_mixed_denominators() {
        let v = [Rational::new(1, 4), Rational::new(1, 6), Rational::from_integer(3)];
        assert_eq!(lcd(&v), BigInt::from(12));
        assert_eq!(lcd(std::iter::empty()), BigInt::from(1));
    }
}
