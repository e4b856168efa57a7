//! Exact and certified computations for rational maps on the Riemann sphere.
//!
//! The algebra is generic over the coefficient field ([`ExactField`]); the
//! usual instance is the Gaussian rationals [`GaussRat`].

pub mod arith;
pub mod certificate;
pub mod config;
pub mod dynpair;
pub mod error;
pub mod expr;
pub mod fibercurve;
pub mod monodromy;
pub mod numeric;
pub mod orbifold;
pub mod poly;
pub mod ratmap;
pub mod scalar;
pub mod search;
pub mod symmetry;

pub use arith::{AlgebraicPoint, BigFloat, ComplexBall, DoubleDouble, Distinct, QuadRat};
pub use config::Config;
pub use error::{Error, Result};
pub use expr::parse_map;
pub use poly::Poly;
pub use ratmap::{Mobius, PointSet, Portrait, RatMap};
pub use scalar::{ExactField, Field, Real, Ring};

/// `Q(i)`.
pub type GaussRat = QuadRat<1>;
/// `Q(sqrt(-3))`.
pub type EisensteinRat = QuadRat<3>;
pub type GaussPoly = Poly<GaussRat>;
pub type GaussMap = RatMap<GaussRat>;
