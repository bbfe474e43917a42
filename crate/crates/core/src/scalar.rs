//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! Everything that only needs field arithmetic (Walsh transforms, channel
//! application, simplex projection, closed-form second moments) is written
//! against [`Scalar`] so it runs unchanged on `f32`, `f64` and exact
//! rationals. Routines that need square roots, logarithms or random draws
//! additionally require [`RealScalar`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, NumAssign, Signed, ToPrimitive};

/// An ordered field element.
pub trait Scalar:
    Num + NumAssign + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lossy conversion used for tolerances and thresholds.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite tolerance representable in scalar type")
    }

    fn from_usize_exact(v: usize) -> Self {
        Self::from_usize(v).expect("index representable in scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `true` for finite values; always `true` for exact types.
    fn is_finite_value(&self) -> bool {
        self.to_f64().is_some_and(f64::is_finite)
    }
}

impl<T> Scalar for T where
    T: Num + NumAssign + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Floating-point scalars (`f32`, `f64`).
pub trait RealScalar: Scalar + Float + Copy {}

impl RealScalar for f32 {}
impl RealScalar for f64 {}

/// Exact rational with machine-sized numerator and denominator.
pub type Rational64 = Ratio<i64>;

/// Exact rational with arbitrary precision.
pub type Rational = BigRational;

/// Convenience constructor for [`Rational`].
pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub(crate) fn max_of<T: Scalar>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}
