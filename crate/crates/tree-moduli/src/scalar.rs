//! The scalar type the numeric half of the crate is generic over.
//!
//! Exact computations instantiate it with [`crate::Rat`]; anything that is a
//! field with the `num-traits` interfaces (e.g. `f64`) works as well.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Field-like coefficients: ring ops with division, negation, and an
/// embedding of small integers.
pub trait Scalar: Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + FromPrimitive {
    /// Embeds an `i64`, which every supported scalar can represent.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("scalar cannot represent an i64")
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + Clone + PartialEq + Debug + Display + FromPrimitive
{
}
