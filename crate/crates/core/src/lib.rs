//! Spectral evaluation of the sharp fractional Sobolev and
//! Moser–Trudinger–Onofri functionals on the round sphere `S^n` and on the
//! CR sphere `S^{2n+1}`, including the endpoint limits that connect them and
//! numerical recovery of the sharp Sobolev constant.
//!
//! All kernels are generic over the floating-point type through [`Real`];
//! the aliases below fix `f64`, which is what the tolerances in the test
//! suites are calibrated for.

pub mod cr;
pub mod error;
pub mod extremal;
pub mod inequalities;
pub mod scalar;
pub mod specfun;
pub mod sphere;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SphereContext = sphere::SphereContext<f64>;
pub type ZonalField = sphere::ZonalField<f64>;
pub type SpectrumDiagonal = sphere::SpectrumDiagonal<f64>;
pub type QuadratureRule = specfun::QuadratureRule<f64>;
pub type CrContext = cr::CrContext<f64>;
pub type DiskField = cr::DiskField<f64>;
pub type BidegreeSpectrum = cr::BidegreeSpectrum<f64>;
pub type OptimizerReport = extremal::OptimizerReport<f64>;
