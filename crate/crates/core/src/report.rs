//! Serialization helpers shared by reports.

use num_bigint::BigUint;
use serde::Serializer;

/// Big integers travel as decimal strings.
pub fn biguint_string<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}
