//! Scalar abstractions.
//!
//! Rate regions are generic over [`RateScalar`], which covers both floating
//! point bounds (Gaussian channels) and exact rationals (the deterministic
//! model, where every bound is an integer rank). The Gaussian formulas need
//! complex linear algebra on top of that and use [`Real`].

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Number type a rate bound can be expressed in.
pub trait RateScalar:
    Num + PartialOrd + Copy + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn is_finite_value(&self) -> bool;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("subset size fits the scalar type")
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl RateScalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl RateScalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl RateScalar for Rational64 {
    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Real floating-point scalar used by the Gaussian bound formulas.
///
/// Implemented for `f32` and `f64`. Acceptance tolerances (1e-9 and tighter)
/// are only meaningful for `f64`.
pub trait Real: RealField + RateScalar + Copy {
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
