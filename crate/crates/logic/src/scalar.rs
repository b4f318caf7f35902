//! Value domains for robustness scores.
//!
//! Robustness only ever combines atom values with min, max and negation, so
//! the evaluator is generic over [`Lattice`]. Anything that also needs an
//! order (satisfaction, threshold sweeps) asks for [`Scalar`].

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

/// A bounded distributive lattice with an order-reversing involution.
pub trait Lattice: Copy + PartialEq + Debug + Send + Sync + 'static {
    fn meet(self, other: Self) -> Self;
    fn join(self, other: Self) -> Self;
    fn negate(self) -> Self;
}

/// Totally ordered numeric values usable as robustness scores.
pub trait Scalar: Lattice + PartialOrd + Signed + ToPrimitive + Display {}

impl<T> Scalar for T where T: Lattice + PartialOrd + Signed + ToPrimitive + Display {}

macro_rules! float_lattice {
    ($($t:ty)*) => ($(
        impl Lattice for $t {
            #[inline]
            fn meet(self, other: Self) -> Self { self.min(other) }
            #[inline]
            fn join(self, other: Self) -> Self { self.max(other) }
            #[inline]
            fn negate(self) -> Self { -self }
        }
    )*)
}

macro_rules! ord_lattice {
    ($($t:ty)*) => ($(
        impl Lattice for $t {
            #[inline]
            fn meet(self, other: Self) -> Self { std::cmp::min(self, other) }
            #[inline]
            fn join(self, other: Self) -> Self { std::cmp::max(self, other) }
            #[inline]
            fn negate(self) -> Self { -self }
        }
    )*)
}

float_lattice!(f32 f64);
ord_lattice!(i32 i64 Ratio<i64>);

/// 64 independent two-valued scores packed in one word.
///
/// Bit `k` set means the `k`-th valuation scores `+1`, clear means `-1`. Min
/// and max over `{-1, 1}` are bitwise and/or, so a single evaluation checks
/// 64 valuations at once.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Bits(pub u64);

impl Bits {
    pub const TOP: Bits = Bits(!0);
    pub const BOTTOM: Bits = Bits(0);
}

impl Lattice for Bits {
    #[inline]
    fn meet(self, other: Self) -> Self {
        Bits(self.0 & other.0)
    }
    #[inline]
    fn join(self, other: Self) -> Self {
        Bits(self.0 | other.0)
    }
    #[inline]
    fn negate(self) -> Self {
        Bits(!self.0)
    }
}

/// Clamp `v` into `[-bound, bound]` using only lattice operations.
pub fn clip<T: Lattice>(v: T, bound: T) -> T {
    v.meet(bound).join(bound.negate())
}
