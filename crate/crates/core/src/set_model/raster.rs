//! Conversion of exact shapes to grid sets.
//!
//! `Outer` keeps every cell whose interior meets the shape (plus one
//! covering cell for pieces of measure zero), `Inner` keeps the cells that
//! lie entirely inside it, so `inner ⊆ K ⊆ outer` holds for every input.

use std::collections::HashMap;

use super::runs::{Cell, RowKey, Run, RunSet};
use super::{ConvexPolytope, GridSandwich, GridSet, IntervalUnion, PointSet};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RasterMode {
    Inner,
    Outer,
}

/// Closed axis-aligned ellipsoid `Σ ((x_i - c_i)/a_i)² ≤ 1` (a ball when
/// all semi-axes agree).
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid<T> {
    pub center: Point<T>,
    pub semi_axes: Vec<T>,
}

impl<T: Scalar> Ellipsoid<T> {
    pub fn ball(center: Point<T>, radius: T) -> Self {
        let d = center.dim();
        Ellipsoid { center, semi_axes: vec![radius; d] }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Normalised squared offset along one axis.
    fn term(&self, i: usize, x: &T) -> T {
        let t = (x.clone() - self.center.0[i].clone()) / self.semi_axes[i].clone();
        t.clone() * t
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.term(i, &x.0[i])) <= T::one()
    }

    /// Volume in f64 (`π a b` or `4π/3 a b c`).
    pub fn volume(&self) -> f64 {
        let prod: f64 = self.semi_axes.iter().map(Scalar::lossy_f64).product();
        match self.dim() {
            1 => 2.0 * prod,
            2 => std::f64::consts::PI * prod,
            _ => 4.0 / 3.0 * std::f64::consts::PI * prod,
        }
    }
}

pub trait Rasterize<T: Scalar> {
    fn rasterize(&self, h: &T, mode: RasterMode) -> Result<GridSet<T>>;
}

pub fn rasterize<T: Scalar, S: Rasterize<T> + ?Sized>(k: &S, h: &T, mode: RasterMode) -> Result<GridSet<T>> {
    if *h <= T::zero() {
        return Err(Error::InvalidParameter("cell size must be positive".into()));
    }
    k.rasterize(h, mode)
}

/// Inner and outer rasterizations together; the inner side may be empty.
pub fn rasterize_sandwich<T: Scalar, S: Rasterize<T> + ?Sized>(k: &S, h: &T) -> Result<GridSandwich<T>> {
    let outer = rasterize(k, h, RasterMode::Outer)?;
    let inner = match rasterize(k, h, RasterMode::Inner) {
        Ok(g) => g,
        Err(Error::EmptyInner { .. }) => GridSet::possibly_empty(h.clone(), RunSet::empty(outer.dim()))?,
        Err(e) => return Err(e),
    };
    GridSandwich::new(inner, outer)
}

fn finish<T: Scalar>(h: &T, dim: usize, runs: Vec<(RowKey, Run)>) -> Result<GridSet<T>> {
    let cells = RunSet::from_runs(dim, runs);
    if cells.is_empty() {
        return Err(Error::EmptyInner { h: h.lossy_f64() });
    }
    GridSet::new(h.clone(), cells)
}

/// Cells `k` with `[k h, (k+1) h] ⊆ [a, b]`.
fn inner_range<T: Scalar>(a: &T, b: &T, h: &T) -> (i64, i64) {
    ((a.clone() / h.clone()).ceil_i64(), (b.clone() / h.clone()).floor_i64() - 1)
}

/// Cells `k` whose open interval `(k h, (k+1) h)` meets `[a, b]`
/// (a single covering cell when `a = b`).
fn outer_range<T: Scalar>(a: &T, b: &T, h: &T) -> (i64, i64) {
    let lo = (a.clone() / h.clone()).floor_i64();
    if a == b {
        return (lo, lo);
    }
    (lo, (b.clone() / h.clone()).ceil_i64() - 1)
}

/// Cells `k` whose closed interval meets `[a, b]`.
fn closed_range<T: Scalar>(a: &T, b: &T, h: &T) -> (i64, i64) {
    ((a.clone() / h.clone()).ceil_i64() - 1, (b.clone() / h.clone()).floor_i64())
}

impl<T: Scalar> Rasterize<T> for IntervalUnion<T> {
    fn rasterize(&self, h: &T, mode: RasterMode) -> Result<GridSet<T>> {
        let runs = self
            .components()
            .iter()
            .map(|(a, b)| match mode {
                RasterMode::Inner => ([0, 0], inner_range(a, b, h)),
                RasterMode::Outer => ([0, 0], outer_range(a, b, h)),
            })
            .collect();
        finish(h, 1, runs)
    }
}

impl<T: Scalar> Rasterize<T> for PointSet<T> {
    fn rasterize(&self, h: &T, mode: RasterMode) -> Result<GridSet<T>> {
        if mode == RasterMode::Inner {
            return Err(Error::EmptyInner { h: h.lossy_f64() });
        }
        let cells: Vec<Cell> = self
            .points()
            .iter()
            .map(|p| {
                let mut c = [0i64; 3];
                for (i, v) in p.0.iter().enumerate() {
                    c[i] = (v.clone() / h.clone()).floor_i64();
                }
                c
            })
            .collect();
        GridSet::new(h.clone(), RunSet::from_cells(self.dim(), cells))
    }
}

/// Clips a counter-clockwise convex polygon to `lo ≤ coordinate(axis) ≤ hi`.
fn clip_slab<T: Scalar>(poly: &[Point<T>], axis: usize, lo: &T, hi: &T) -> Vec<Point<T>> {
    let keep_ge = |pts: Vec<Point<T>>, bound: &T, ge: bool| -> Vec<Point<T>> {
        let inside = |p: &Point<T>| if ge { p.0[axis] >= *bound } else { p.0[axis] <= *bound };
        let n = pts.len();
        let mut out = Vec::new();
        for i in 0..n {
            let (a, b) = (&pts[i], &pts[(i + 1) % n]);
            let (ia, ib) = (inside(a), inside(b));
            if ia {
                out.push(a.clone());
            }
            if ia != ib {
                let t = (bound.clone() - a.0[axis].clone()) / (b.0[axis].clone() - a.0[axis].clone());
                out.push(a.add(&b.sub(a).scale(&t)));
            }
        }
        out
    };
    let first = keep_ge(poly.to_vec(), lo, true);
    if first.is_empty() {
        return first;
    }
    keep_ge(first, hi, false)
}

fn shoelace<T: Scalar>(poly: &[Point<T>]) -> T {
    let n = poly.len();
    (0..n).fold(T::zero(), |acc, i| {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        acc + a.0[0].clone() * b.0[1].clone() - a.0[1].clone() * b.0[0].clone()
    })
}

fn coord_range<T: Scalar>(pts: &[Point<T>], axis: usize) -> (T, T) {
    let lo = pts.iter().map(|p| p.0[axis].clone()).reduce(Scalar::min_of).expect("nonempty");
    let hi = pts.iter().map(|p| p.0[axis].clone()).reduce(Scalar::max_of).expect("nonempty");
    (lo, hi)
}

/// `[min x, max x]` of a convex polygon on the horizontal line `y = c`.
fn chord<T: Scalar>(poly: &[Point<T>], c: &T) -> Option<(T, T)> {
    let n = poly.len();
    let mut xs: Vec<T> = Vec::new();
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n.max(1)]);
        let (ya, yb) = (&a.0[1], &b.0[1]);
        if ya == c {
            xs.push(a.0[0].clone());
        }
        if (ya < c && yb > c) || (ya > c && yb < c) {
            let t = (c.clone() - ya.clone()) / (yb.clone() - ya.clone());
            xs.push(a.0[0].clone() + t * (b.0[0].clone() - a.0[0].clone()));
        }
    }
    if xs.is_empty() {
        return None;
    }
    let lo = xs.iter().cloned().reduce(Scalar::min_of)?;
    let hi = xs.iter().cloned().reduce(Scalar::max_of)?;
    Some((lo, hi))
}

/// Planar rasterization of a convex polygon given by its vertex ring
/// (counter-clockwise when it has positive area).
fn polygon_rows<T: Scalar>(ring: &[Point<T>], full: bool, h: &T, mode: RasterMode) -> Vec<(i64, Run)> {
    let (ylo, yhi) = coord_range(ring, 1);
    let mut rows = Vec::new();
    match mode {
        RasterMode::Outer if full => {
            let (r0, r1) = outer_range(&ylo, &yhi, h);
            for y in r0..=r1 {
                let y0 = T::from_int(y) * h.clone();
                let y1 = y0.clone() + h.clone();
                let piece = clip_slab(ring, 1, &y0, &y1);
                if piece.len() < 3 || shoelace(&piece).is_zero() {
                    continue;
                }
                let (xa, xb) = coord_range(&piece, 0);
                rows.push((y, outer_range(&xa, &xb, h)));
            }
        }
        RasterMode::Outer => {
            let (r0, r1) = closed_range(&ylo, &yhi, h);
            for y in r0..=r1 {
                let y0 = T::from_int(y) * h.clone();
                let y1 = y0.clone() + h.clone();
                let piece: Vec<Point<T>> = if ring.len() == 1 {
                    ring.to_vec()
                } else {
                    clip_slab(ring, 1, &y0, &y1)
                };
                if piece.is_empty() {
                    continue;
                }
                let (xa, xb) = coord_range(&piece, 0);
                rows.push((y, closed_range(&xa, &xb, h)));
            }
        }
        RasterMode::Inner => {
            if !full {
                return rows;
            }
            let (r0, r1) = inner_range(&ylo, &yhi, h);
            for y in r0..=r1 {
                let y0 = T::from_int(y) * h.clone();
                let y1 = y0.clone() + h.clone();
                if let (Some((a0, b0)), Some((a1, b1))) = (chord(ring, &y0), chord(ring, &y1)) {
                    rows.push((y, inner_range(&a0.max_of(a1), &b0.min_of(b1), h)));
                }
            }
        }
    }
    rows
}

/// Planar convex hull ring of a point cloud (helper for slices of 3D
/// polytopes).
fn ring_of<T: Scalar>(pts: Vec<Point<T>>) -> Option<(Vec<Point<T>>, bool)> {
    if pts.is_empty() {
        return None;
    }
    let poly = ConvexPolytope::hull(&pts).ok()?;
    Some((poly.vertices().to_vec(), poly.is_full_dimensional()))
}

/// Points of `K ∩ {lo ≤ z ≤ hi}` whose hull is that slice, projected to
/// the first two coordinates.
fn slab_points<T: Scalar>(verts: &[Point<T>], lo: &T, hi: &T) -> Vec<Point<T>> {
    let mut out = Vec::new();
    let proj = |p: &Point<T>| Point(vec![p.0[0].clone(), p.0[1].clone()]);
    for v in verts {
        if v.0[2] >= *lo && v.0[2] <= *hi {
            out.push(proj(v));
        }
    }
    for (i, a) in verts.iter().enumerate() {
        for b in &verts[i + 1..] {
            for plane in [lo, hi] {
                let (za, zb) = (&a.0[2], &b.0[2]);
                if (za < plane && zb > plane) || (za > plane && zb < plane) {
                    let t = (plane.clone() - za.clone()) / (zb.clone() - za.clone());
                    out.push(proj(&a.add(&b.sub(a).scale(&t))));
                }
            }
        }
    }
    out
}

impl<T: Scalar> Rasterize<T> for ConvexPolytope<T> {
    fn rasterize(&self, h: &T, mode: RasterMode) -> Result<GridSet<T>> {
        let verts = self.vertices();
        match self.dim() {
            1 => {
                let (a, b) = coord_range(verts, 0);
                IntervalUnion::interval(a, b)?.rasterize(h, mode)
            }
            2 => {
                let rows = polygon_rows(verts, self.is_full_dimensional(), h, mode);
                finish(h, 2, rows.into_iter().map(|(y, r)| ([y, 0], r)).collect())
            }
            _ => {
                if mode == RasterMode::Inner && !self.is_full_dimensional() {
                    return Err(Error::EmptyInner { h: h.lossy_f64() });
                }
                let (zlo, zhi) = coord_range(verts, 2);
                let mut runs = Vec::new();
                let (z0, z1) = match mode {
                    RasterMode::Inner => inner_range(&zlo, &zhi, h),
                    RasterMode::Outer => closed_range(&zlo, &zhi, h),
                };
                for z in z0..=z1 {
                    let lo = T::from_int(z) * h.clone();
                    let hi = lo.clone() + h.clone();
                    match mode {
                        RasterMode::Outer => {
                            if let Some((ring, _)) = ring_of(slab_points(verts, &lo, &hi)) {
                                for (y, r) in polygon_rows(&ring, false, h, RasterMode::Outer) {
                                    runs.push(([y, z], r));
                                }
                            }
                        }
                        RasterMode::Inner => {
                            let bottom = ring_of(slab_points(verts, &lo, &lo));
                            let top = ring_of(slab_points(verts, &hi, &hi));
                            if let (Some((rb, fb)), Some((rt, ft))) = (bottom, top) {
                                let a = polygon_rows(&rb, fb, h, RasterMode::Inner);
                                let b: HashMap<i64, Run> = polygon_rows(&rt, ft, h, RasterMode::Inner).into_iter().collect();
                                for (y, (x0, x1)) in a {
                                    if let Some(&(u0, u1)) = b.get(&y) {
                                        runs.push(([y, z], (x0.max(u0), x1.min(u1))));
                                    }
                                }
                            }
                        }
                    }
                }
                finish(h, 3, runs)
            }
        }
    }
}

impl<T: Scalar> Rasterize<T> for Ellipsoid<T> {
    fn rasterize(&self, h: &T, mode: RasterMode) -> Result<GridSet<T>> {
        let d = self.dim();
        let lo: Vec<i64> = (0..d)
            .map(|i| ((self.center.0[i].clone() - self.semi_axes[i].clone()) / h.clone()).floor_i64() - 1)
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|i| ((self.center.0[i].clone() + self.semi_axes[i].clone()) / h.clone()).ceil_i64())
            .collect();
        let cf: Vec<f64> = self.center.0.iter().map(Scalar::lossy_f64).collect();
        let af: Vec<f64> = self.semi_axes.iter().map(Scalar::lossy_f64).collect();
        let hf = h.lossy_f64();
        // Per-axis contribution for cell index k: the extreme corner term
        // (inner) or the clamped nearest-point term (outer).
        let term_f = |i: usize, k: i64| -> f64 {
            let (a, b) = (k as f64 * hf, (k + 1) as f64 * hf);
            let t = match mode {
                RasterMode::Inner => (a - cf[i]).abs().max((b - cf[i]).abs()),
                RasterMode::Outer => (cf[i] - cf[i].clamp(a, b)).abs(),
            };
            (t / af[i]).powi(2)
        };
        let term_exact = |i: usize, k: i64| -> T {
            let a = T::from_int(k) * h.clone();
            let b = a.clone() + h.clone();
            let c = &self.center.0[i];
            let x = match mode {
                RasterMode::Inner => {
                    if (a.clone() - c.clone()).abs() >= (b.clone() - c.clone()).abs() {
                        a
                    } else {
                        b
                    }
                }
                RasterMode::Outer => {
                    if *c < a {
                        a
                    } else if *c > b {
                        b
                    } else {
                        c.clone()
                    }
                }
            };
            self.term(i, &x)
        };
        let accept = |s: &T| match mode {
            RasterMode::Inner => *s <= T::one(),
            RasterMode::Outer => *s < T::one(),
        };
        let mut cells = Vec::new();
        let (ylo, yhi) = if d >= 2 { (lo[1], hi[1]) } else { (0, 0) };
        let (zlo, zhi) = if d >= 3 { (lo[2], hi[2]) } else { (0, 0) };
        for z in zlo..=zhi {
            for y in ylo..=yhi {
                let base_f = if d >= 2 { term_f(1, y) } else { 0.0 } + if d >= 3 { term_f(2, z) } else { 0.0 };
                if base_f > 1.0 + 1e-6 {
                    continue;
                }
                for x in lo[0]..=hi[0] {
                    let s = base_f + term_f(0, x);
                    let decided = if (s - 1.0).abs() > 1e-9 { Some(s < 1.0) } else { None };
                    let inside = match decided {
                        Some(v) => v,
                        None => {
                            let mut e = term_exact(0, x);
                            if d >= 2 {
                                e = e + term_exact(1, y);
                            }
                            if d >= 3 {
                                e = e + term_exact(2, z);
                            }
                            accept(&e)
                        }
                    };
                    if inside {
                        cells.push([x, y, z]);
                    }
                }
            }
        }
        let set = RunSet::from_cells(d, cells);
        if set.is_empty() {
            return Err(Error::EmptyInner { h: hf });
        }
        GridSet::new(h.clone(), set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn unit_interval_outer_has_four_cells() {
        let k = IntervalUnion::interval(q(0, 1), q(1, 1)).unwrap();
        let g = rasterize(&k, &q(1, 4), RasterMode::Outer).unwrap();
        assert_eq!(g.cell_count(), 4);
    }

    #[test]
    fn inner_cells_of_shrunk_interval() {
        let k = IntervalUnion::interval(q(1, 10), q(9, 10)).unwrap();
        let g = rasterize(&k, &q(1, 4), RasterMode::Inner).unwrap();
        let cells: Vec<Cell> = g.cells().cells().collect();
        assert_eq!(cells, vec![[1, 0, 0], [2, 0, 0]]);
    }

    #[test]
    fn unit_disk_bracket() {
        let disk = Ellipsoid::ball(Point::from_ints(&[0, 0]), q(1, 1));
        let h = q(1, 64);
        let inner = rasterize(&disk, &h, RasterMode::Inner).unwrap().volume().lossy_f64();
        let outer = rasterize(&disk, &h, RasterMode::Outer).unwrap().volume().lossy_f64();
        let pi = std::f64::consts::PI;
        assert!(inner <= pi && pi <= outer);
        assert!(outer - inner < 0.15);
    }

    #[test]
    fn triangle_bracket_and_alignment() {
        let t = ConvexPolytope::hull(&[Point::from_ints(&[0, 0]), Point::from_ints(&[2, 0]), Point::from_ints(&[0, 2])])
            .unwrap();
        let h: Rational = q(1, 8);
        let inner = rasterize(&t, &h, RasterMode::Inner).unwrap();
        let outer = rasterize(&t, &h, RasterMode::Outer).unwrap();
        assert!(inner.volume() <= q(2, 1) && q(2, 1) <= outer.volume());
        assert!(inner.is_subset_of(&outer));
        let sq = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        let a = rasterize(&sq, &h, RasterMode::Inner).unwrap();
        let b = rasterize(&sq, &h, RasterMode::Outer).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cell_count(), 64);
    }

    #[test]
    fn cube_rasterizes_exactly() {
        let c = ConvexPolytope::cuboid(&vec![q(0, 1); 3], &vec![q(1, 1); 3]).unwrap();
        let a = rasterize(&c, &q(1, 4), RasterMode::Inner).unwrap();
        assert_eq!(a.cell_count(), 64);
        let b = rasterize(&c, &q(1, 4), RasterMode::Outer).unwrap();
        assert!(a.is_subset_of(&b));
    }
}
