//! Finite point sets.

use std::collections::BTreeMap;

use super::{IntervalUnion, Length};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;

/// A nonempty finite set of points in ℝ^d, deduplicated and kept in
/// canonical (key) order.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    points: Vec<Point<T>>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(dim: usize, points: Vec<Point<T>>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        Ok(Self::from_unchecked(dim, points))
    }

    fn from_unchecked(dim: usize, points: Vec<Point<T>>) -> Self {
        let map: BTreeMap<Vec<T::Key>, Point<T>> = points.into_iter().map(|p| (p.key(), p)).collect();
        PointSet { dim, points: map.into_values().collect() }
    }

    pub fn from_coords(dim: usize, coords: &[&[T]]) -> Result<Self> {
        Self::new(dim, coords.iter().map(|c| Point::new(c.to_vec())).collect())
    }

    pub fn singleton(p: Point<T>) -> Self {
        PointSet { dim: p.dim(), points: vec![p] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        let key = p.key();
        self.points.binary_search_by(|q| q.key().cmp(&key)).is_ok()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn diameter(&self) -> Length<T> {
        let mut best = T::zero();
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                best = best.max_of(p.dist_sq(q));
            }
        }
        Length::from_squared(best)
    }

    pub fn neg(&self) -> Self {
        Self::from_unchecked(self.dim, self.points.iter().map(Point::neg).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_unchecked(self.dim, self.points.iter().map(|p| p.scale(c)).collect())
    }

    pub fn translate(&self, t: &Point<T>) -> Self {
        Self::from_unchecked(self.dim, self.points.iter().map(|p| p.add(t)).collect())
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Self::from_unchecked(self.dim, pts)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let mut pts = Vec::with_capacity(self.len() * other.len());
        for p in &self.points {
            for q in &other.points {
                pts.push(p.add(q));
            }
        }
        Self::from_unchecked(self.dim, pts)
    }

    /// `S(K) = ½(K - K)` by direct enumeration of pairs.
    pub fn steinhaus(&self) -> Self {
        let mut pts = Vec::with_capacity(self.len() * self.len());
        for p in &self.points {
            for q in &self.points {
                pts.push(p.sub(q).half());
            }
        }
        Self::from_unchecked(self.dim, pts)
    }

    pub fn is_symmetric(&self) -> bool {
        self.contains(&Point::origin(self.dim)) && self.points.iter().all(|p| self.contains(&p.neg()))
    }

    pub fn distance_to(&self, x: &Point<T>) -> Length<T> {
        let best = self
            .points
            .iter()
            .map(|p| p.dist_sq(x))
            .reduce(Scalar::min_of)
            .expect("nonempty");
        Length::from_squared(best)
    }

    pub fn directed_hausdorff(&self, other: &Self) -> Length<T> {
        let mut best = T::zero();
        for p in &self.points {
            let d = other.distance_to(p).squared;
            if d > best {
                best = d;
            }
        }
        Length::from_squared(best)
    }

    pub fn hausdorff(&self, other: &Self) -> Length<T> {
        self.directed_hausdorff(other).max(other.directed_hausdorff(self))
    }

    /// The `m`-fold sumset by binary doubling; each step may form at most
    /// `cap` pairwise sums before deduplication.
    pub fn sumset_power(&self, m: u64, cap: u128) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("sumset power must be >= 1".into()));
        }
        let guarded = |a: &Self, b: &Self| -> Result<Self> {
            let needed = a.len() as u128 * b.len() as u128;
            if needed > cap {
                return Err(Error::BudgetExceeded { needed, cap, suggested_h: None });
            }
            Ok(a.minkowski_sum(b))
        };
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = m;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    Some(r) => guarded(&r, &base)?,
                    None => base.clone(),
                });
            }
            k >>= 1;
            if k > 0 {
                base = guarded(&base, &base)?;
            }
        }
        Ok(result.expect("m >= 1"))
    }

    /// The same points viewed as degenerate intervals (1D only).
    pub fn to_intervals(&self) -> Result<IntervalUnion<T>> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: self.dim });
        }
        IntervalUnion::from_points(self.points.iter().map(|p| p.0[0].clone()))
    }

    pub fn cast<U: Scalar>(&self) -> PointSet<U> {
        PointSet::from_unchecked(self.dim, self.points.iter().map(Point::cast).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn pts1(xs: &[i64]) -> PointSet<Rational> {
        PointSet::new(1, xs.iter().map(|&x| Point::from_ints(&[x])).collect()).unwrap()
    }

    #[test]
    fn two_point_seed_maps_to_three_points() {
        let k0 = pts1(&[0, 4]);
        assert_eq!(k0.steinhaus(), pts1(&[-2, 0, 2]));
        assert_eq!(k0.diameter().squared, q(16, 1));
    }

    #[test]
    fn duplicates_removed() {
        let k = pts1(&[3, 1, 3, 1]);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn sumset_of_binary_set() {
        let k = pts1(&[0, 1]);
        assert_eq!(k.sumset_power(3, 1_000_000).unwrap(), pts1(&[0, 1, 2, 3]));
        assert_eq!(k.sumset_power(1, 1_000_000).unwrap(), k);
        assert!(k.sumset_power(1 << 20, 4).is_err());
    }

    #[test]
    fn planar_hausdorff() {
        let a = PointSet::new(2, vec![Point::from_ints(&[0, 0])]).unwrap();
        let b = PointSet::new(2, vec![Point::from_ints(&[3, 4])]).unwrap();
        assert_eq!(a.hausdorff(&b).exact(), Some(q(5, 1)));
    }
}
