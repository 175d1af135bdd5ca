//! Exact rationals and their string encoding (`"p/q"` or `"n"`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(pub BigRational);

impl Q {
    pub fn zero() -> Self {
        Q(BigRational::zero())
    }

    pub fn one() -> Self {
        Q(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Self {
        Q(self.0.recip())
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl std::ops::$tr<&Q> for &Q {
            type Output = Q;
            fn $m(self, rhs: &Q) -> Q {
                Q(&self.0 $op &rhs.0)
            }
        }
        impl std::ops::$tr for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                Q(self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

impl std::ops::Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl std::ops::Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-&self.0)
    }
}

impl std::ops::AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        self.0 += &rhs.0;
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseQError(pub String);

impl FromStr for Q {
    type Err = ParseQError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseQError(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Q(BigRational::new(num, den)))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `"p/q"`, `"n"` or a bare JSON integer.
impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Int(i64),
            Str(String),
        }
        match Lit::deserialize(d)? {
            Lit::Int(n) => Ok(Q::from_int(n)),
            Lit::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Serde helper for integer coefficients stored as exact decimal strings.
pub mod int_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &i64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Int(i64),
            Str(String),
        }
        match Lit::deserialize(d)? {
            Lit::Int(n) => Ok(n),
            Lit::Str(s) => {
                s.trim().parse().map_err(|_| serde::de::Error::custom(format!("invalid integer literal {s:?}")))
            }
        }
    }
}

/// Same as [`int_string`] for sequences.
pub mod int_string_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::int_string")] i64);

    pub fn serialize<S: Serializer>(v: &[i64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&n| Wrap(n)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i64>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}
