//! Exact positivity calculus on projectivized vector bundles and decision
//! procedures for their convex Fujita number.
//!
//! Every type is generic over an integer backend `T: Scalar`; rationals are
//! `Ratio<T>`. The aliases below fix the common backends.

pub mod bundles;
pub mod error;
pub mod fujita;
pub mod nslattice;
pub mod oracle;
pub mod positivity;
pub mod scalar;
pub mod ternary;

pub use error::{Error, Result};
pub use scalar::{Scalar, Q};
pub use ternary::Ternary;

use num_bigint::BigInt;

pub type Rational = num_rational::Ratio<i64>;
pub type Class = nslattice::RationalClass<i64>;
pub type Model = nslattice::NsModel<i64>;
pub type Base = bundles::BaseVariety<i64>;
pub type Bundle = bundles::BundleDescriptor<i64>;

pub type BigRational = num_rational::Ratio<BigInt>;
pub type BigClass = nslattice::RationalClass<BigInt>;
pub type BigBundle = bundles::BundleDescriptor<BigInt>;
