//! Exact extended rationals: arbitrary-precision rationals plus `+inf`.
//!
//! Small integers stay on an `i64` fast path; everything else is a reduced
//! `BigRational`. The representation is canonical, so derived hashing and
//! structural equality agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum ExtRat {
    Int(i64),
    Ratio(BigRational),
    Inf,
}

impl ExtRat {
    pub fn int(v: i64) -> Self {
        ExtRat::Int(v)
    }

    pub fn inf() -> Self {
        ExtRat::Inf
    }

    pub fn zero() -> Self {
        ExtRat::Int(0)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_inf()
    }

    pub fn from_ratio(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return ExtRat::Int(v);
            }
        }
        ExtRat::Ratio(r)
    }

    pub fn new_ratio(numer: i64, denom: i64) -> Self {
        Self::from_ratio(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn to_ratio(&self) -> Option<BigRational> {
        match self {
            ExtRat::Int(v) => Some(BigRational::from_integer(BigInt::from(*v))),
            ExtRat::Ratio(r) => Some(r.clone()),
            ExtRat::Inf => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExtRat::Int(v) => *v < 0,
            ExtRat::Ratio(r) => r.is_negative(),
            ExtRat::Inf => false,
        }
    }

    /// `None` when the number is infinite or not an integer.
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            ExtRat::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn min_of(a: &ExtRat, b: &ExtRat) -> ExtRat {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &ExtRat, b: &ExtRat) -> ExtRat {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn mul(&self, other: &ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Inf, x) | (x, ExtRat::Inf) => {
                if x.is_zero_value() {
                    ExtRat::zero()
                } else {
                    ExtRat::Inf
                }
            }
            (ExtRat::Int(a), ExtRat::Int(b)) => match a.checked_mul(*b) {
                Some(v) => ExtRat::Int(v),
                None => Self::from_ratio(self.to_ratio().unwrap() * other.to_ratio().unwrap()),
            },
            _ => Self::from_ratio(self.to_ratio().unwrap() * other.to_ratio().unwrap()),
        }
    }

    pub fn is_zero_value(&self) -> bool {
        matches!(self, ExtRat::Int(0))
    }
}

impl Add for &ExtRat {
    type Output = ExtRat;

    fn add(self, other: &ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Inf, _) | (_, ExtRat::Inf) => ExtRat::Inf,
            (ExtRat::Int(a), ExtRat::Int(b)) => match a.checked_add(*b) {
                Some(v) => ExtRat::Int(v),
                None => ExtRat::from_ratio(self.to_ratio().unwrap() + other.to_ratio().unwrap()),
            },
            _ => ExtRat::from_ratio(self.to_ratio().unwrap() + other.to_ratio().unwrap()),
        }
    }
}

impl PartialEq for ExtRat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtRat {}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
            (ExtRat::Inf, _) => Ordering::Greater,
            (_, ExtRat::Inf) => Ordering::Less,
            (ExtRat::Int(a), ExtRat::Int(b)) => a.cmp(b),
            _ => self.to_ratio().unwrap().cmp(&other.to_ratio().unwrap()),
        }
    }
}

impl Hash for ExtRat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            ExtRat::Int(v) => {
                0u8.hash(state);
                v.hash(state);
            }
            ExtRat::Ratio(r) => {
                1u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            ExtRat::Inf => 2u8.hash(state),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Int(v) => write!(f, "{v}"),
            ExtRat::Ratio(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ExtRat::Inf => write!(f, "inf"),
        }
    }
}

impl ExtRat {
    /// Canonical `p/q` text used by the JSON encoding (`"3/1"`, `"inf"`).
    pub fn to_fraction_string(&self) -> String {
        match self {
            ExtRat::Int(v) => format!("{v}/1"),
            ExtRat::Ratio(r) => format!("{}/{}", r.numer(), r.denom()),
            ExtRat::Inf => "inf".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not an extended rational: {0:?}")]
pub struct ParseNumError(pub String);

impl FromStr for ExtRat {
    type Err = ParseNumError;

    /// Accepts `inf`, `+inf`, integers, `p/q` fractions and finite decimals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseNumError(s.to_string());
        if t == "inf" || t == "+inf" || t == "∞" || t == "+∞" {
            return Ok(ExtRat::Inf);
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Self::from_ratio(BigRational::new(p, q)));
        }
        if let Some((whole, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let neg = whole.starts_with('-');
            let whole_abs = whole.trim_start_matches(['-', '+']);
            let whole_v: BigInt = if whole_abs.is_empty() {
                BigInt::zero()
            } else {
                whole_abs.parse().map_err(|_| err())?
            };
            let frac_v: BigInt = frac.parse().map_err(|_| err())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let mut numer = whole_v * &scale + frac_v;
            if neg {
                numer = -numer;
            }
            return Ok(Self::from_ratio(BigRational::new(numer, scale)));
        }
        let v: BigInt = t.parse().map_err(|_| err())?;
        Ok(Self::from_ratio(BigRational::from_integer(v)))
    }
}

impl From<i64> for ExtRat {
    fn from(v: i64) -> Self {
        ExtRat::Int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!("3".parse::<ExtRat>().unwrap(), ExtRat::int(3));
        assert_eq!("6/2".parse::<ExtRat>().unwrap(), ExtRat::int(3));
        assert_eq!("0.7".parse::<ExtRat>().unwrap(), ExtRat::new_ratio(7, 10));
        assert_eq!("inf".parse::<ExtRat>().unwrap(), ExtRat::Inf);
        assert!("1/0".parse::<ExtRat>().is_err());
    }

    #[test]
    fn canonical_after_overflow() {
        let big = &ExtRat::int(i64::MAX) + &ExtRat::int(1);
        let back = &big + &ExtRat::int(-1);
        assert_eq!(back, ExtRat::int(i64::MAX));
        assert!(matches!(back, ExtRat::Int(_)));
    }

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(&ExtRat::Inf + &ExtRat::int(5), ExtRat::Inf);
        assert!(ExtRat::int(1_000_000) < ExtRat::Inf);
    }

    #[test]
    fn fraction_string() {
        assert_eq!(ExtRat::int(3).to_fraction_string(), "3/1");
        assert_eq!(ExtRat::new_ratio(2, 4).to_fraction_string(), "1/2");
    }
}
