//! JSON encodings for exact numbers: integers as JSON numbers when they
//! fit in an `i64` and as decimal strings otherwise; rationals as `"p/q"`
//! strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

struct Big<'a>(&'a BigInt);

impl Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BigRepr {
    Int(i64),
    Str(String),
}

struct BigDe(BigInt);

impl<'de> Deserialize<'de> for BigDe {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match BigRepr::deserialize(d)? {
            BigRepr::Int(x) => Ok(BigDe(BigInt::from(x))),
            BigRepr::Str(s) => s.parse().map(BigDe).map_err(D::Error::custom),
        }
    }
}

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        Big(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Ok(BigDe::deserialize(d)?.0)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(Big))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<BigDe>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

pub mod big_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|row| row.iter().map(Big).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Vec<BigDe>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect())
    }
}

pub mod ratio_vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(D::Error::custom))
            .collect()
    }
}
