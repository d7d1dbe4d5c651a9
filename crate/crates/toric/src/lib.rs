//! Exact-arithmetic analysis of smooth complete fans in a rank-2 lattice.
//!
//! Starting from a fan this crate computes self-intersection numbers, the
//! Picard lattice with its intersection form, the chains of -2-curves, the
//! positivity of the anticanonical class, line-bundle cohomology by lattice
//! point counting, and the numerical K-theory shadow of spherical twists and
//! exceptional presentations, all without a single floating-point operation.
//!
//! The linear algebra core is generic over the integer scalar; the aliases
//! below pin the concrete types used throughout the crate.

pub mod divisor;
pub mod fan;
pub mod knum;
pub mod lattice;
pub mod neg2;
pub mod report;

/// Arbitrary-precision integer used for normal forms and cokernels, where
/// intermediate entries can outgrow machine words.
pub type Int = num_bigint::BigInt;

/// Exact rational scalar for cone membership and vertex enumeration.
pub type Rat = num_rational::BigRational;

/// Ray and divisor coordinates. Fans built by blow-ups keep coordinates far
/// below this range; overflow checks stay on in release builds.
pub type Coord = i64;

/// Matrix over [`Int`].
pub type IntMatrix = lattice::Mat<Int>;

pub use divisor::{picard, DivisorClass, Picard, TorusDivisor};
pub use fan::{Fan, Vec2};
