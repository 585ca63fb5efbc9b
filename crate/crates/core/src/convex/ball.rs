//! Radius of the largest closed ball about the origin inside a set.

use crate::error::{Error, Result};
use crate::set_model::runs::RunSet;
use crate::set_model::{CompactSet, Length};
use crate::scalar::Scalar;

/// `lower ≤ ρ ≤ upper`; the two agree for exact representations.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusBracket<T> {
    pub lower: Length<T>,
    pub upper: Length<T>,
}

impl<T: Scalar> RadiusBracket<T> {
    pub fn exact(r: Length<T>) -> Self {
        RadiusBracket { lower: r.clone(), upper: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn midpoint(&self) -> f64 {
        (self.lower.value() + self.upper.value()) / 2.0
    }
}

/// Largest `ρ` with `B̄(0, ρ) ⊆ K` for a symmetric set `K`.
pub fn origin_ball_radius<T: Scalar>(k: &CompactSet<T>) -> Result<RadiusBracket<T>> {
    if !k.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(match k {
        CompactSet::Intervals(x) => RadiusBracket::exact(Length::from_value(x.origin_ball_radius())),
        CompactSet::Points(_) => RadiusBracket::exact(Length::zero()),
        CompactSet::Polytope(p) => RadiusBracket::exact(p.origin_ball_radius()),
        CompactSet::Grid(g) => {
            let hh = g.h().clone() * g.h().clone();
            RadiusBracket::exact(Length::from_squared(T::from_int(grid_ball_gap2(g.cells()) as i64) * hh))
        }
        CompactSet::Sandwich(s) => {
            let hh = s.h().clone() * s.h().clone();
            let lo = if s.inner().is_empty() { 0 } else { grid_ball_gap2(s.inner().cells()) };
            RadiusBracket {
                lower: Length::from_squared(T::from_int(lo as i64) * hh.clone()),
                upper: Length::from_squared(T::from_int(grid_ball_gap2(s.outer().cells()) as i64) * hh),
            }
        }
    })
}

/// Squared distance (in cell units) from the lattice origin to the nearest
/// closed cell not in the set.
pub(crate) fn grid_ball_gap2(cells: &RunSet) -> u64 {
    let d = cells.dim();
    if cells.is_empty() {
        return 0;
    }
    // Distance from 0 to the closed cell [z, z + 1] along one axis.
    let g = |z: i64| -> u64 {
        if z >= 0 {
            z as u64
        } else {
            (-z - 1) as u64
        }
    };
    let (lo, hi) = cells.bbox().expect("nonempty");
    let ys: Vec<i64> = if d >= 2 { (lo[1] - 1..=hi[1] + 1).collect() } else { vec![0] };
    let zs: Vec<i64> = if d >= 3 { (lo[2] - 1..=hi[2] + 1).collect() } else { vec![0] };
    let mut best = u64::MAX;
    for &z in &zs {
        let bz = g(z).pow(2) * (d >= 3) as u64;
        if bz >= best {
            continue;
        }
        for &y in &ys {
            let base = bz + g(y).pow(2) * (d >= 2) as u64;
            if base >= best {
                continue;
            }
            // Absent x-ranges of this row: the gaps between runs and the two
            // unbounded ends.
            let runs = cells.row(&[y, z]);
            let mut gx = u64::MAX;
            let mut absent = |s: i64, e: i64| {
                if s > e {
                    return;
                }
                let m = if s <= 0 && e >= -1 {
                    0
                } else if s > 0 {
                    g(s)
                } else {
                    g(e)
                };
                gx = gx.min(m);
            };
            let mut start = i64::MIN;
            for &(a, b) in runs {
                if a > start {
                    absent(start, a - 1);
                }
                start = b + 1;
            }
            absent(start, i64::MAX);
            best = best.min(base + gx.saturating_mul(gx));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::scalar::{q, Rational};
    use crate::set_model::{ConvexPolytope, GridSet, IntervalUnion};

    #[test]
    fn rectangle_difference_body() {
        let p = ConvexPolytope::cuboid(&[q(-2, 1), q(-1, 1)], &[q(2, 1), q(1, 1)]).unwrap();
        let r = origin_ball_radius(&CompactSet::Polytope(p)).unwrap();
        assert_eq!(r.lower.squared, q(1, 1));
        let g = GridSet::block(2, q(1, 4), [-8, -4, 0], [7, 3, 0]).unwrap();
        let r = origin_ball_radius(&CompactSet::Grid(g)).unwrap();
        assert_eq!(r.upper.squared, q(1, 1));
    }

    #[test]
    fn boundary_origin_and_intervals() {
        let k = IntervalUnion::canonicalize(vec![(q(-2, 1), q(-1, 1)), (q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))]).unwrap();
        assert_eq!(origin_ball_radius(&CompactSet::Intervals(k)).unwrap().lower.squared, q(0, 1));
        let k = IntervalUnion::interval(q(-3, 2), q(3, 2)).unwrap();
        assert_eq!(origin_ball_radius(&CompactSet::Intervals(k)).unwrap().lower.squared, q(9, 4));
        let p: CompactSet<Rational> = crate::set_model::PointSet::new(1, vec![Point::from_ints(&[0])]).unwrap().into();
        assert_eq!(origin_ball_radius(&p).unwrap().upper.squared, q(0, 1));
    }

    #[test]
    fn rejects_asymmetric_sets() {
        let k = IntervalUnion::interval(q(0, 1), q(1, 1)).unwrap();
        assert_eq!(origin_ball_radius(&CompactSet::Intervals(k)), Err(Error::NotSymmetric));
    }
}
