//! Scalar abstraction shared by word evaluation, homomorphism counting and
//! transfer matrices.
//!
//! Everything that only needs a ring (products, sums, traces) is written
//! against [`Scalar`]; the spectral routines are specialised to `f64` and
//! `Complex<f64>`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive};

/// A commutative ring element with an involution (complex conjugation, or
/// the identity for real and exact types).
pub trait Scalar: Clone + Num + Debug + Send + Sync {
    fn conj(&self) -> Self;

    /// Conversion from a small signed integer.
    fn from_i64(v: i64) -> Self;

    /// Modulus as a float, used for tolerance checks.
    fn abs_f64(&self) -> f64;
}

macro_rules! real_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn conj(&self) -> Self {
                *self
            }
            #[inline]
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            #[inline]
            fn abs_f64(&self) -> f64 {
                (*self as f64).abs()
            }
        }
    )*};
}

real_scalar!(f32, f64, i64, i128);

impl<T> Scalar for Complex<T>
where
    T: Clone + Num + Signed + Debug + Send + Sync + Scalar,
{
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(T::from_i64(v), T::zero())
    }
    fn abs_f64(&self) -> f64 {
        self.re.abs_f64().hypot(self.im.abs_f64())
    }
}

impl Scalar for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Scalars with a total order, needed where a sign decides the outcome
/// (hom-value negativity, minimum over samples).
pub trait OrderedScalar: Scalar + PartialOrd {}

impl<T: Scalar + PartialOrd> OrderedScalar for T {}
