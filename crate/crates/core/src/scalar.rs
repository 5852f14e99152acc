//! The integer scalar abstraction used by the arithmetic modules.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::{Error, Result};

/// Exact signed integer: the machine integers `i32`, `i64`, `i128`, or an
/// arbitrary-precision type such as `num_bigint::BigInt`.
pub trait Int:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Hash
    + Debug
    + Display
    + Send
    + Sync
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Hash
        + Debug
        + Display
        + Send
        + Sync
{
}

pub(crate) fn add<T: Int>(a: &T, b: &T, what: &'static str) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

pub(crate) fn sub<T: Int>(a: &T, b: &T, what: &'static str) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow(what))
}

pub(crate) fn mul<T: Int>(a: &T, b: &T, what: &'static str) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

pub(crate) fn from_i64<T: Int>(v: i64, what: &'static str) -> Result<T> {
    T::from_i64(v).ok_or(Error::Overflow(what))
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`. The result lies in `[0, m)`.
pub fn mod_inverse<T: Int>(a: &T, m: &T) -> Option<T> {
    let a = a.mod_floor(m);
    let egcd = a.extended_gcd(m);
    egcd.gcd.is_one().then(|| egcd.x.mod_floor(m))
}
