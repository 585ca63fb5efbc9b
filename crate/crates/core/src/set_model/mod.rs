//! Representations of nonempty compact subsets of ℝ^d, d ≤ 3.

mod grid;
mod handle;
mod interval;
mod json;
pub(crate) mod metrics;
mod points;
mod polytope;
mod raster;
pub mod runs;

pub use grid::{GridSandwich, GridSet};
pub use handle::{CompactSet, DEFAULT_CELL_BUDGET};
pub use interval::IntervalUnion;
pub use json::{decode_set, encode_set, SCHEMA_VERSION};
pub use points::PointSet;
pub use polytope::ConvexPolytope;
pub use metrics::{directed_half_lattice, farthest_point, grid_hausdorff, grid_hausdorff_half2, HALF_LATTICE_CAP};
pub use raster::{rasterize, rasterize_sandwich, Ellipsoid, RasterMode, Rasterize};

use crate::scalar::Scalar;

/// A nonnegative length carried through its exact square, since distances
/// between rational points are generally irrational.
#[derive(Clone, Debug, PartialEq)]
pub struct Length<T> {
    pub squared: T,
}

impl<T: Scalar> Length<T> {
    pub fn from_squared(squared: T) -> Self {
        Length { squared }
    }

    pub fn from_value(v: T) -> Self {
        Length { squared: v.clone() * v }
    }

    pub fn zero() -> Self {
        Length { squared: T::zero() }
    }

    pub fn value(&self) -> f64 {
        self.squared.lossy_f64().sqrt()
    }

    /// The length itself when its square root is representable.
    pub fn exact(&self) -> Option<T> {
        self.squared.sqrt_exact()
    }

    pub fn max(self, other: Self) -> Self {
        if other.squared > self.squared {
            other
        } else {
            self
        }
    }
}

/// A distance-like quantity with an additive error bound; `error == 0`
/// means the value is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Measured<T> {
    pub length: Length<T>,
    pub error: f64,
}

impl<T: Scalar> Measured<T> {
    pub fn exact(length: Length<T>) -> Self {
        Measured { length, error: 0.0 }
    }

    pub fn value(&self) -> f64 {
        self.length.value()
    }

    pub fn is_exact(&self) -> bool {
        self.error == 0.0
    }
}

/// Volume of a set, as a bracket when only a sandwich is known.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeBracket<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Scalar> VolumeBracket<T> {
    pub fn exact(v: T) -> Self {
        VolumeBracket { lower: v.clone(), upper: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}
