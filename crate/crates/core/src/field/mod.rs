//! Prime fields, their extensions, and root finding.

mod ext;
mod fp;
pub mod roots;

pub use ext::{FieldContext, FieldElement};
pub use fp::{is_prime, FiniteField, Fp};
pub use roots::find_roots;

/// Serialize canonical representatives as decimal strings.
pub fn serialize_decimals<S: serde::Serializer>(v: &[u64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(u64::to_string))
}
