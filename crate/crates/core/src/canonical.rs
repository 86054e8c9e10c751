//! Canonical JSON: object keys sorted, integers already encoded as decimal
//! strings by the types themselves, no insignificant whitespace.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Compact canonical encoding. Used for content digests.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    // `Value` stores objects in sorted maps, so this pass sorts every key
    let v = serde_json::to_value(value).expect("crate types always serialize");
    serde_json::to_string(&v).expect("values always serialize")
}

/// Indented canonical encoding with a trailing newline, for files.
pub fn to_canonical_pretty<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("crate types always serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
    s.push('\n');
    s
}

/// Lowercase hex SHA-256 of the compact canonical encoding.
pub fn digest<T: Serialize>(value: &T) -> String {
    let hash = Sha256::digest(to_canonical_string(value).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}
