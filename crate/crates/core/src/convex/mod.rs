//! Convex hulls, quasi-support profiles, star-convex subsets, Carathéodory
//! decompositions and the radius of the largest centred ball.

mod ball;
mod caratheodory;
mod directions;
pub mod hull;
mod profile;

pub use ball::{origin_ball_radius, RadiusBracket};
pub use caratheodory::{
    caratheodory_decompose, dyadic_round, dyadic_threshold, weighted_combination_set, CaratheodoryDecomposition,
    DyadicRounding,
};
pub use directions::{direction_plan, DEFAULT_DIRECTIONS_2D, DEFAULT_DIRECTIONS_3D};
pub use profile::{quasi_support, ray_profile, star_subset, QuasiSupportProfile};

use crate::error::Result;
use crate::set_model::{ConvexPolytope, PointSet};
use crate::scalar::Scalar;

/// Vertex-minimal convex hull of a finite point set.
pub fn convex_hull<T: Scalar>(p: &PointSet<T>) -> Result<ConvexPolytope<T>> {
    ConvexPolytope::hull(p.points())
}
