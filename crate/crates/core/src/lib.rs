//! Exponential Riesz bases on unions of intervals: exact domains, scaled Vandermonde matrices,
//! singular-value oracles, cluster bounds, closed-form frame certificates and their verification.

pub mod cluster;
pub mod domain;
pub mod error;
pub mod json;
pub mod linalg;
pub mod rational;
pub mod spectral;
pub mod theorems;
pub mod vandermonde;
pub mod verifier;

pub use domain::{ExponentSystem, FrameBounds, IntegerIntervalUnion, RationalIntervalUnion, ScalingTransform};
pub use error::{Error, Result};
pub use rational::Rational;
pub use spectral::SingularSpectrum;
pub use theorems::{FrameCertificate, Method};
pub use vandermonde::NodeMatrix;
