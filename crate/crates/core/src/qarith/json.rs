//! JSON encodings: `{"lo": k, "coeffs": [...]}` and `{"num": .., "den": ..}`.
//! Coefficients outside the `i64` range are written as decimal strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{LaurentInt, RatQ};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for Coeff {
    fn from(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(v) => Coeff::Small(v),
            None => Coeff::Big(c.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    lo: i64,
    coeffs: Vec<Coeff>,
}

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: LaurentInt,
    den: LaurentInt,
}

impl Serialize for LaurentInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentRepr { lo: self.lo(), coeffs: self.coeffs().iter().map(Coeff::from).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LaurentRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .into_iter()
            .map(|c| match c {
                Coeff::Small(v) => Ok(BigInt::from(v)),
                Coeff::Big(s) => s.parse::<BigInt>().map_err(de::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentInt::new(r.lo, coeffs))
    }
}

impl Serialize for RatQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatRepr { num: self.num().clone(), den: self.den().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RatRepr::deserialize(d)?;
        RatQ::new(r.num, r.den).map_err(de::Error::custom)
    }
}
