//! Convex polytopes given by their vertices.

use super::Length;
use crate::convex::hull::{convex_hull, is_positive, is_zero};
use crate::error::{Error, Result};
use crate::geom::{cross3, orient2, orient3, point_segment_dist_sq, point_triangle_dist_sq, Point};
use crate::scalar::Scalar;

/// A convex polytope in ℝ^d (d ≤ 3). Lower-dimensional hulls (points,
/// segments, planar polygons in space) are allowed and flagged through
/// [`ConvexPolytope::affine_dim`].
///
/// Planar polygons keep their vertices in counter-clockwise order (for
/// polygons embedded in ℝ³ the order is counter-clockwise in the
/// coordinate projection used to build them).
#[derive(Clone, Debug)]
pub struct ConvexPolytope<T> {
    dim: usize,
    affine_dim: usize,
    vertices: Vec<Point<T>>,
    triangles: Vec<[usize; 3]>,
}

impl<T: Scalar> PartialEq for ConvexPolytope<T> {
    /// Equality of the underlying point sets.
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim || self.vertices.len() != other.vertices.len() {
            return false;
        }
        let mut a: Vec<_> = self.vertices.iter().map(Point::key).collect();
        let mut b: Vec<_> = other.vertices.iter().map(Point::key).collect();
        a.sort();
        b.sort();
        a == b
    }
}

impl<T: Scalar> ConvexPolytope<T> {
    /// Convex hull of arbitrary points.
    pub fn hull(points: &[Point<T>]) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptySet)?.dim();
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        let h = convex_hull(points);
        Ok(ConvexPolytope { dim, affine_dim: h.affine_dim, vertices: h.vertices, triangles: h.triangles })
    }

    /// Builds from a vertex list, rejecting points that are not extreme.
    pub fn from_vertices(points: &[Point<T>]) -> Result<Self> {
        let p = Self::hull(points)?;
        let mut keys: Vec<_> = points.iter().map(Point::key).collect();
        keys.sort();
        keys.dedup();
        if keys.len() != p.vertices.len() {
            return Err(Error::Degenerate(format!(
                "{} of the {} listed points are not extreme",
                keys.len() - p.vertices.len(),
                keys.len()
            )));
        }
        Ok(p)
    }

    /// Axis-aligned box `∏ [lo_i, hi_i]`.
    pub fn cuboid(lo: &[T], hi: &[T]) -> Result<Self> {
        let d = lo.len();
        let mut pts = Vec::new();
        for mask in 0..(1usize << d) {
            pts.push(Point((0..d).map(|i| if mask >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() }).collect()));
        }
        Self::hull(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    /// Outward-oriented boundary triangles (full-dimensional 3D only).
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Facet halfspaces `n·x ≤ c` of a full-dimensional polytope.
    pub fn halfspaces(&self) -> Vec<(Point<T>, T)> {
        match (self.dim, self.affine_dim) {
            (1, 1) => vec![
                (Point(vec![-T::one()]), -self.vertices[0].0[0].clone()),
                (Point(vec![T::one()]), self.vertices[1].0[0].clone()),
            ],
            (2, 2) => {
                let n = self.vertices.len();
                (0..n)
                    .map(|i| {
                        let a = &self.vertices[i];
                        let b = &self.vertices[(i + 1) % n];
                        let normal = Point(vec![b.0[1].clone() - a.0[1].clone(), a.0[0].clone() - b.0[0].clone()]);
                        let c = normal.dot(a);
                        (normal, c)
                    })
                    .collect()
            }
            (3, 3) => self
                .triangles
                .iter()
                .map(|t| {
                    let (a, b, c) = (&self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]]);
                    let normal = cross3(&b.sub(a), &c.sub(a));
                    let off = normal.dot(a);
                    (normal, off)
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn volume(&self) -> T {
        if !self.is_full_dimensional() {
            return T::zero();
        }
        match self.dim {
            1 => self.vertices[1].0[0].clone() - self.vertices[0].0[0].clone(),
            2 => {
                let n = self.vertices.len();
                let o = &self.vertices[0];
                let twice = (1..n - 1).fold(T::zero(), |acc, i| {
                    acc + orient2(o, &self.vertices[i], &self.vertices[i + 1])
                });
                twice.half()
            }
            _ => {
                let o = &self.vertices[0];
                let six = self.triangles.iter().fold(T::zero(), |acc, t| {
                    acc + orient3(o, &self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]])
                });
                six / T::from_int(6)
            }
        }
    }

    /// Boundary measure: perimeter (d = 2) or surface area (d = 3), in f64.
    pub fn boundary_measure(&self) -> f64 {
        match (self.dim, self.affine_dim) {
            (2, 2) => {
                let n = self.vertices.len();
                (0..n).map(|i| self.vertices[i].dist_sq(&self.vertices[(i + 1) % n]).lossy_f64().sqrt()).sum()
            }
            (3, 3) => self
                .triangles
                .iter()
                .map(|t| {
                    let (a, b, c) = (&self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]]);
                    cross3(&b.sub(a), &c.sub(a)).norm() / 2.0
                })
                .sum(),
            (_, 0) => 0.0,
            (1, 1) | (2, 1) => 2.0,
            _ => 0.0,
        }
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        if self.is_full_dimensional() {
            return self.halfspaces().iter().all(|(n, c)| !is_positive(&(n.dot(x) - c.clone())));
        }
        self.distance_to(x).squared.is_zero() || is_zero(&self.distance_to(x).squared)
    }

    /// Exact squared distance from `x` to the polytope.
    pub fn distance_to(&self, x: &Point<T>) -> Length<T> {
        let v = &self.vertices;
        let sq = match (self.dim, self.affine_dim) {
            (_, 0) => x.dist_sq(&v[0]),
            (_, 1) => point_segment_dist_sq(x, &v[0], &v[1]),
            (2, 2) => {
                if self.contains(x) {
                    T::zero()
                } else {
                    let n = v.len();
                    (0..n)
                        .map(|i| point_segment_dist_sq(x, &v[i], &v[(i + 1) % n]))
                        .reduce(Scalar::min_of)
                        .expect("polygon has edges")
                }
            }
            (3, 2) => (1..v.len() - 1)
                .map(|i| point_triangle_dist_sq(x, &v[0], &v[i], &v[i + 1]))
                .reduce(Scalar::min_of)
                .expect("polygon has triangles"),
            _ => {
                if self.contains(x) {
                    T::zero()
                } else {
                    self.triangles
                        .iter()
                        .map(|t| point_triangle_dist_sq(x, &v[t[0]], &v[t[1]], &v[t[2]]))
                        .reduce(Scalar::min_of)
                        .expect("polytope has facets")
                }
            }
        };
        Length::from_squared(sq)
    }

    pub fn diameter(&self) -> Length<T> {
        let mut best = T::zero();
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                best = best.max_of(p.dist_sq(q));
            }
        }
        Length::from_squared(best)
    }

    /// Support function `h(u) = max_v ⟨v, u⟩`.
    pub fn support(&self, u: &Point<T>) -> T {
        self.vertices.iter().map(|v| v.dot(u)).reduce(Scalar::max_of).expect("nonempty")
    }

    pub fn neg(&self) -> Self {
        let pts: Vec<Point<T>> = self.vertices.iter().map(Point::neg).collect();
        Self::hull(&pts).expect("nonempty")
    }

    pub fn scale(&self, c: &T) -> Self {
        let pts: Vec<Point<T>> = self.vertices.iter().map(|p| p.scale(c)).collect();
        Self::hull(&pts).expect("nonempty")
    }

    pub fn translate(&self, t: &Point<T>) -> Self {
        let pts: Vec<Point<T>> = self.vertices.iter().map(|p| p.add(t)).collect();
        Self::hull(&pts).expect("nonempty")
    }

    /// `½(K - K)`: hull of the halved vertex differences.
    pub fn steinhaus(&self) -> Self {
        let mut pts = Vec::with_capacity(self.vertices.len() * self.vertices.len());
        for p in &self.vertices {
            for q in &self.vertices {
                pts.push(p.sub(q).half());
            }
        }
        Self::hull(&pts).expect("nonempty")
    }

    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let mut pts = Vec::new();
        for p in &self.vertices {
            for q in &other.vertices {
                pts.push(p.add(q));
            }
        }
        Self::hull(&pts).expect("nonempty")
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.neg()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// `sup_{a ∈ self} d(a, other)`, attained at a vertex by convexity.
    pub fn directed_hausdorff(&self, other: &Self) -> Length<T> {
        self.vertices
            .iter()
            .map(|v| other.distance_to(v))
            .reduce(Length::max)
            .expect("nonempty")
    }

    pub fn hausdorff(&self, other: &Self) -> Length<T> {
        self.directed_hausdorff(other).max(other.directed_hausdorff(self))
    }

    /// Squared radius of the largest origin-centred closed ball inside the
    /// polytope: the minimum squared facet distance when 0 is interior,
    /// zero otherwise.
    pub fn origin_ball_radius(&self) -> Length<T> {
        if !self.is_full_dimensional() {
            return Length::zero();
        }
        let mut best: Option<T> = None;
        for (n, c) in self.halfspaces() {
            if !is_positive(&c) {
                return Length::zero();
            }
            let d = c.clone() * c / n.norm_sq();
            best = Some(match best {
                Some(b) => b.min_of(d),
                None => d,
            });
        }
        Length::from_squared(best.expect("facets"))
    }

    pub fn cast<U: Scalar>(&self) -> ConvexPolytope<U> {
        ConvexPolytope {
            dim: self.dim,
            affine_dim: self.affine_dim,
            vertices: self.vertices.iter().map(Point::cast).collect(),
            triangles: self.triangles.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn p(c: &[i64]) -> Point<Rational> {
        Point::from_ints(c)
    }

    #[test]
    fn rectangle_area_and_diameter() {
        let r = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(2, 1), q(1, 1)]).unwrap();
        assert_eq!(r.volume(), q(2, 1));
        assert_eq!(r.diameter().squared, q(5, 1));
        let unit = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(unit.diameter().squared, q(2, 1));
    }

    #[test]
    fn distance_to_unit_square() {
        let unit = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(unit.distance_to(&p(&[2, 2])).squared, q(2, 1));
        assert_eq!(unit.distance_to(&Point(vec![q(1, 2), q(1, 3)])).squared, q(0, 1));
    }

    #[test]
    fn cube_volume_and_symmetry() {
        let c = ConvexPolytope::cuboid(&vec![q(-1, 1); 3], &vec![q(1, 1); 3]).unwrap();
        assert_eq!(c.volume(), q(8, 1));
        assert!(c.is_symmetric());
        assert_eq!(c.steinhaus(), c);
        assert_eq!(c.origin_ball_radius().squared, q(1, 1));
    }

    #[test]
    fn steinhaus_of_triangle_is_hexagon() {
        let t = ConvexPolytope::hull(&[p(&[0, 0]), p(&[2, 0]), p(&[0, 2])]).unwrap();
        let s = t.steinhaus();
        assert_eq!(s.vertices().len(), 6);
        assert!(s.is_symmetric());
        assert!(!t.is_symmetric());
    }

    #[test]
    fn non_extreme_vertex_rejected() {
        assert!(ConvexPolytope::from_vertices(&[p(&[0, 0]), p(&[2, 0]), p(&[1, 0]), p(&[0, 1])]).is_err());
    }
}
