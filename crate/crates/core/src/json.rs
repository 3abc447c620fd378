//! JSON encoding of arbitrary-precision integers.
//!
//! Integers that fit in an `i64` are written as JSON numbers; anything larger is
//! written as a decimal string. Both forms are accepted on input.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// Borrowed serializer for one integer.
pub struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// Owned integer that deserializes from a JSON number or decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonIntOwned(pub BigInt);

impl<'de> Deserialize<'de> for JsonIntOwned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(IntVisitor).map(JsonIntOwned)
    }
}

impl Serialize for JsonIntOwned {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        JsonInt(&self.0).serialize(s)
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        v.trim()
            .parse::<BigInt>()
            .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

/// `#[serde(with = "crate::json::int")]` adapter for `BigInt` fields.
pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        JsonInt(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        JsonIntOwned::deserialize(d).map(|v| v.0)
    }
}

/// `#[serde(with = "crate::json::opt_int")]` adapter for `Option<BigInt>` fields.
pub mod opt_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&JsonInt(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<JsonIntOwned>::deserialize(d).map(|v| v.map(|v| v.0))
    }
}

/// `#[serde(with = "crate::json::int_vec")]` adapter for `Vec<BigInt>` fields.
pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&JsonInt(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        struct SeqVisitor;
        impl<'de> Visitor<'de> for SeqVisitor {
            type Value = Vec<BigInt>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<BigInt>, A::Error> {
                let mut out = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(JsonIntOwned(v)) = seq.next_element()? {
                    out.push(v);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(SeqVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    struct Wrapper {
        #[serde(with = "int")]
        v: BigInt,
        #[serde(with = "int_vec")]
        xs: Vec<BigInt>,
    }

    #[test]
    fn large_values_become_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let w = Wrapper {
            v: big.clone(),
            xs: vec![BigInt::from(-3), big],
        };
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(
            text,
            r#"{"v":"123456789012345678901234567890","xs":[-3,"123456789012345678901234567890"]}"#
        );
        let back: Wrapper = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn i64_boundary() {
        let w = Wrapper {
            v: BigInt::from(i64::MAX),
            xs: vec![BigInt::from(i64::MAX) + 1],
        };
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"v":9223372036854775807,"xs":["9223372036854775808"]}"#);
    }

    #[test]
    fn rejects_garbage() {
        assert!(serde_json::from_str::<Wrapper>(r#"{"v":"12a","xs":[]}"#).is_err());
        assert!(serde_json::from_str::<Wrapper>(r#"{"v":1.5,"xs":[]}"#).is_err());
    }
}
