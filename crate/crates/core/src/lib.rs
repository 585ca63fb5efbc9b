//! Compact sets in ℝ^d (d ≤ 3), the Steinhaus map `S(K) = ½(K - K)` and
//! its iteration, together with the radius bounds and convex-geometry
//! functionals that go with it.
//!
//! Everything is generic over [`Scalar`]: exact rationals, `f64` and `f32`.
//! The aliases below fix the common choices.

pub mod bounds;
pub mod convex;
pub mod edt;
pub mod error;
pub mod geom;
pub mod minkowski;
pub mod scalar;
pub mod set_model;
pub mod verify;

pub use error::{Error, Result};
pub use geom::Point;
pub use scalar::{Rational, Scalar};
pub use set_model::{
    CompactSet, ConvexPolytope, GridSandwich, GridSet, IntervalUnion, Length, Measured, PointSet, VolumeBracket,
};

pub type ExactSet = CompactSet<Rational>;
pub type FloatSet = CompactSet<f64>;
pub type Float32Set = CompactSet<f32>;
pub type ExactGrid = GridSet<Rational>;
pub type FloatGrid = GridSet<f64>;
pub type ExactPoints = PointSet<Rational>;
pub type ExactIntervals = IntervalUnion<Rational>;
pub type ExactPolytope = ConvexPolytope<Rational>;
pub type FloatPolytope = ConvexPolytope<f64>;
