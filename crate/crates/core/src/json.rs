//! Shared JSON helpers. Integers and addresses are emitted as decimal strings.

use num_bigint::BigInt;
use serde::Serializer;

pub const SCHEMA_VERSION: u32 = 1;

pub fn ser_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn ser_bigints<S: Serializer>(ns: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ns.iter().map(|n| n.to_string()))
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
