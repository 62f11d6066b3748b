//! Serde helpers: exact integers are emitted as decimal strings so JSON
//! consumers limited to 53-bit floats never truncate them.

use num_bigint::BigUint;
use serde::Serializer;

pub mod biguint_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }
}

pub mod opt_biguint_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }
}
