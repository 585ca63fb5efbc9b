use super::{
    metrics, ConvexPolytope, GridSandwich, GridSet, IntervalUnion, Length, Measured, PointSet, VolumeBracket,
};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;

/// Default cell budget before grid results are coarsened into sandwiches.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 26;

/// Any of the supported compact-set representations.
#[derive(Clone, Debug)]
pub enum CompactSet<T> {
    Intervals(IntervalUnion<T>),
    Grid(GridSet<T>),
    Sandwich(GridSandwich<T>),
    Points(PointSet<T>),
    Polytope(ConvexPolytope<T>),
}

impl<T: Scalar> CompactSet<T> {
    pub fn dim(&self) -> usize {
        match self {
            CompactSet::Intervals(_) => 1,
            CompactSet::Grid(g) => g.dim(),
            CompactSet::Sandwich(s) => s.dim(),
            CompactSet::Points(p) => p.dim(),
            CompactSet::Polytope(p) => p.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CompactSet::Intervals(_) => "intervals",
            CompactSet::Grid(_) => "grid",
            CompactSet::Sandwich(_) => "grid",
            CompactSet::Points(_) => "points",
            CompactSet::Polytope(_) => "polytope",
        }
    }

    pub fn volume(&self) -> VolumeBracket<T> {
        match self {
            CompactSet::Intervals(k) => VolumeBracket::exact(k.volume()),
            CompactSet::Grid(g) => VolumeBracket::exact(g.volume()),
            CompactSet::Sandwich(s) => s.volume(),
            CompactSet::Points(_) => VolumeBracket::exact(T::zero()),
            CompactSet::Polytope(p) => VolumeBracket::exact(p.volume()),
        }
    }

    pub fn has_positive_measure(&self) -> bool {
        self.volume().upper > T::zero()
    }

    /// Diameter; for sandwiches the outer diameter with slack `2 h √d`.
    pub fn diameter(&self) -> Measured<T> {
        match self {
            CompactSet::Intervals(k) => Measured::exact(Length::from_value(k.diameter())),
            CompactSet::Grid(g) => Measured::exact(g.diameter()),
            CompactSet::Sandwich(s) => {
                let err = if s.is_exact() { 0.0 } else { 2.0 * s.h().lossy_f64() * (s.dim() as f64).sqrt() };
                Measured { length: s.outer().diameter(), error: err }
            }
            CompactSet::Points(p) => Measured::exact(p.diameter()),
            CompactSet::Polytope(p) => Measured::exact(p.diameter()),
        }
    }

    pub fn distance_to(&self, x: &Point<T>) -> Result<Measured<T>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(match self {
            CompactSet::Intervals(k) => Measured::exact(Length::from_value(k.distance_to(&x.0[0]))),
            CompactSet::Grid(g) => Measured::exact(g.distance_to(x)),
            CompactSet::Sandwich(s) => {
                let outer = s.outer().distance_to(x);
                let err = if s.inner().is_empty() {
                    f64::INFINITY
                } else {
                    s.inner().distance_to(x).value() - outer.value()
                };
                Measured { length: outer, error: err }
            }
            CompactSet::Points(p) => Measured::exact(p.distance_to(x)),
            CompactSet::Polytope(p) => Measured::exact(p.distance_to(x)),
        })
    }

    pub fn hausdorff(&self, other: &Self) -> Result<Measured<T>> {
        metrics::hausdorff(self, other)
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            CompactSet::Intervals(k) => k.is_symmetric(),
            CompactSet::Grid(g) => g.is_symmetric(),
            CompactSet::Sandwich(s) => s.inner().is_symmetric() && s.outer().is_symmetric(),
            CompactSet::Points(p) => p.is_symmetric(),
            CompactSet::Polytope(p) => p.is_symmetric(),
        }
    }

    /// `S(K) = ½(K - K)`. Grid images that exceed `budget` cells are
    /// coarsened into sandwiches.
    pub fn steinhaus(&self, budget: u64) -> Result<Self> {
        Ok(match self {
            CompactSet::Intervals(k) => CompactSet::Intervals(k.steinhaus()),
            CompactSet::Points(p) => CompactSet::Points(p.steinhaus()),
            CompactSet::Polytope(p) => CompactSet::Polytope(p.steinhaus()),
            CompactSet::Grid(g) => {
                let s = g.steinhaus();
                if s.cell_count() <= budget {
                    CompactSet::Grid(s)
                } else {
                    fit_budget(GridSandwich::exact(s), budget)?
                }
            }
            CompactSet::Sandwich(s) => fit_budget(s.steinhaus(), budget)?,
        })
    }

    pub fn cast<U: Scalar>(&self) -> CompactSet<U> {
        match self {
            CompactSet::Intervals(k) => CompactSet::Intervals(k.cast()),
            CompactSet::Grid(g) => CompactSet::Grid(g.cast()),
            CompactSet::Sandwich(s) => CompactSet::Sandwich(
                GridSandwich::new(s.inner().cast(), s.outer().cast()).expect("valid sandwich"),
            ),
            CompactSet::Points(p) => CompactSet::Points(p.cast()),
            CompactSet::Polytope(p) => CompactSet::Polytope(p.cast()),
        }
    }

    /// Outer grid of a grid-backed set.
    pub fn outer_grid(&self) -> Option<&GridSet<T>> {
        match self {
            CompactSet::Grid(g) => Some(g),
            CompactSet::Sandwich(s) => Some(s.outer()),
            _ => None,
        }
    }

    /// Inner grid of a grid-backed set.
    pub fn inner_grid(&self) -> Option<&GridSet<T>> {
        match self {
            CompactSet::Grid(g) => Some(g),
            CompactSet::Sandwich(s) => Some(s.inner()),
            _ => None,
        }
    }

    /// Convex hull of the set as an exact polytope.
    pub fn convex_hull(&self) -> ConvexPolytope<T> {
        match self {
            CompactSet::Intervals(k) => {
                ConvexPolytope::hull(&[Point(vec![k.min().clone()]), Point(vec![k.max().clone()])]).expect("nonempty")
            }
            CompactSet::Grid(g) => g.convex_hull(),
            CompactSet::Sandwich(s) => s.outer().convex_hull(),
            CompactSet::Points(p) => ConvexPolytope::hull(p.points()).expect("nonempty"),
            CompactSet::Polytope(p) => p.clone(),
        }
    }
}

impl<T: Scalar> PartialEq for CompactSet<T> {
    fn eq(&self, other: &Self) -> bool {
        use CompactSet::*;
        match (self, other) {
            (Intervals(a), Intervals(b)) => a == b,
            (Grid(a), Grid(b)) => a == b,
            (Sandwich(a), Sandwich(b)) => a == b,
            (Points(a), Points(b)) => a == b,
            (Polytope(a), Polytope(b)) => a == b,
            _ => false,
        }
    }
}

fn fit_budget<T: Scalar>(mut s: GridSandwich<T>, budget: u64) -> Result<CompactSet<T>> {
    let mut rounds = 0;
    while s.outer().cell_count() > budget {
        if rounds > 40 {
            return Err(Error::BudgetExceeded {
                needed: s.outer().cell_count() as u128,
                cap: budget as u128,
                suggested_h: None,
            });
        }
        s = s.coarsen();
        rounds += 1;
    }
    Ok(if s.is_exact() { CompactSet::Grid(s.outer().clone()) } else { CompactSet::Sandwich(s) })
}

impl<T> From<IntervalUnion<T>> for CompactSet<T> {
    fn from(k: IntervalUnion<T>) -> Self {
        CompactSet::Intervals(k)
    }
}

impl<T> From<GridSet<T>> for CompactSet<T> {
    fn from(g: GridSet<T>) -> Self {
        CompactSet::Grid(g)
    }
}

impl<T> From<PointSet<T>> for CompactSet<T> {
    fn from(p: PointSet<T>) -> Self {
        CompactSet::Points(p)
    }
}

impl<T> From<ConvexPolytope<T>> for CompactSet<T> {
    fn from(p: ConvexPolytope<T>) -> Self {
        CompactSet::Polytope(p)
    }
}
