//! Capacity bounds for multicast channels with feedback.
//!
//! Gaussian inner and outer bounds with their constant-gap certificates,
//! exact regions for the linear deterministic model, and a bit-level
//! simulator for feedback strategies on that model.

pub mod adt;
pub mod certify;
pub mod channel;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod gf2;
pub mod region;
pub mod scalar;
pub mod sim;
pub mod subset;
pub mod sweeps;

pub use adt::{adt_computing_bound_nf, adt_feedback_region, adt_nonfeedback_region, ExactRegion};
pub use channel::{
    adt_from_gaussian, db_to_linear, load_adt_channel, load_gaussian_channel, AdtChannel, CorrelationParam,
    CovarianceParam, GaussianChannel, RateVector,
};
pub use error::{Error, Result};
pub use region::{constraintwise_gap, family_sym_capacity, GapReport, Provenance, RateRegion, RegionFamily};
pub use scalar::{RateScalar, Real};
pub use subset::Subset;

pub type GaussianChannel64 = GaussianChannel<f64>;
pub type GaussianChannel32 = GaussianChannel<f32>;
pub type Region64 = RateRegion<f64>;
pub type Region32 = RateRegion<f32>;
pub type Rho64 = CorrelationParam<f64>;
pub type Covariance64 = CovarianceParam<f64>;
pub type GapReport64 = GapReport<f64>;
