//! The integer type every election quantity is measured in.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Exact signed integers: `i64` for small work, `BigInt` when reductions blow values up.
pub trait Int:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + ToPrimitive
    + FromPrimitive
    + Sum
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + ToPrimitive
        + FromPrimitive
        + Sum
        + Send
        + Sync
        + 'static
{
}

/// Lifts a machine count into `T`.
pub fn int<T: Int>(n: usize) -> T {
    T::from_usize(n).expect("usize fits every supported scalar")
}

/// Lowers `x` to an index-sized count, refusing negatives and anything above `cap`.
pub fn small<T: Int>(x: &T, cap: usize, what: &str) -> Result<usize> {
    match x.to_usize() {
        Some(v) if v <= cap => Ok(v),
        Some(v) => Err(Error::TooLarge(format!("{what} = {v} exceeds {cap}"))),
        None => Err(Error::TooLarge(format!("{what} = {x} is out of range"))),
    }
}
