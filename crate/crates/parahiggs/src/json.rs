//! Serde helpers: rationals cross every boundary as `"num/den"` strings.

use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactlin::{format_rational, parse_rational};

pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        format_rational(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

pub mod rat_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(D::Error::custom))
            .transpose()
    }
}

pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        x.iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

pub mod rat_grid {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        x.iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Rational interval `(lo, hi)` or `[lo, hi]`, serialized as a two-element array.
pub mod rat_pair {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &(BigRational, BigRational),
        s: S,
    ) -> Result<S::Ok, S::Error> {
        [format_rational(&x.0), format_rational(&x.1)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<(BigRational, BigRational), D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        Ok((
            parse_rational(&a).map_err(D::Error::custom)?,
            parse_rational(&b).map_err(D::Error::custom)?,
        ))
    }
}

pub mod rat_opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref()
            .map(|v| v.iter().map(format_rational).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<BigRational>>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|v| {
            v.iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        })
        .transpose()
    }
}
