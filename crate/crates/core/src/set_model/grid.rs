//! Unions of closed axis-aligned cells at a fixed resolution.

use super::runs::{Cell, RunSet};
use super::{ConvexPolytope, Length, VolumeBracket};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;

/// `⋃_z ∏_i [h z_i, h (z_i + 1)]` over a finite set of integer cells `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSet<T> {
    h: T,
    cells: RunSet,
}

impl<T: Scalar> GridSet<T> {
    pub fn new(h: T, cells: RunSet) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptySet);
        }
        Self::possibly_empty(h, cells)
    }

    /// Like [`GridSet::new`] but accepts an empty cell set (used for the
    /// inner side of sandwiches).
    pub fn possibly_empty(h: T, cells: RunSet) -> Result<Self> {
        if !(1..=3).contains(&cells.dim()) {
            return Err(Error::UnsupportedDimension(cells.dim()));
        }
        if h <= T::zero() {
            return Err(Error::InvalidParameter("cell size must be positive".into()));
        }
        Ok(GridSet { h, cells })
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(dim: usize, h: T, cells: I) -> Result<Self> {
        Self::new(h, RunSet::from_cells(dim, cells))
    }

    /// The axis-aligned block of cells `lo ≤ z ≤ hi` (inclusive).
    pub fn block(dim: usize, h: T, lo: Cell, hi: Cell) -> Result<Self> {
        let mut runs = Vec::new();
        let (ylo, yhi) = if dim >= 2 { (lo[1], hi[1]) } else { (0, 0) };
        let (zlo, zhi) = if dim >= 3 { (lo[2], hi[2]) } else { (0, 0) };
        for y in ylo..=yhi {
            for z in zlo..=zhi {
                runs.push(([y, z], (lo[0], hi[0])));
            }
        }
        Self::new(h, RunSet::from_runs(dim, runs))
    }

    pub fn dim(&self) -> usize {
        self.cells.dim()
    }

    pub fn h(&self) -> &T {
        &self.h
    }

    pub fn cells(&self) -> &RunSet {
        &self.cells
    }

    pub fn cell_count(&self) -> u64 {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn cell_volume(&self) -> T {
        (0..self.dim()).fold(T::one(), |acc, _| acc * self.h.clone())
    }

    pub fn volume(&self) -> T {
        T::from_int(self.cell_count() as i64) * self.cell_volume()
    }

    fn with_cells(&self, cells: RunSet) -> Self {
        GridSet { h: self.h.clone(), cells }
    }

    /// The grid of the same cells at another cell size.
    pub fn rescaled(&self, h: T) -> Self {
        GridSet { h, cells: self.cells.clone() }
    }

    /// Maximum distance between cell corners.
    pub fn diameter(&self) -> Length<T> {
        let corners = extreme_corners(&self.cells);
        let mut best: i128 = 0;
        for (i, a) in corners.iter().enumerate() {
            for b in &corners[i + 1..] {
                let d: i128 = (0..3).map(|k| ((a[k] - b[k]) as i128).pow(2)).sum();
                best = best.max(d);
            }
        }
        Length::from_squared(T::from_int(best as i64) * self.h.clone() * self.h.clone())
    }

    /// Exact squared distance from `x` to the cell union.
    pub fn distance_to(&self, x: &Point<T>) -> Length<T> {
        let d = self.dim();
        let gap = |v: &T, lo: i64, hi_excl: i64| -> T {
            let a = T::from_int(lo) * self.h.clone();
            let b = T::from_int(hi_excl) * self.h.clone();
            if *v < a {
                a - v.clone()
            } else if *v > b {
                v.clone() - b
            } else {
                T::zero()
            }
        };
        let mut best: Option<T> = None;
        for (k, runs) in self.cells.rows() {
            let mut base = T::zero();
            for axis in 1..d {
                let g = gap(&x.0[axis], k[axis - 1], k[axis - 1] + 1);
                base = base + g.clone() * g;
            }
            if let Some(b) = &best {
                if base >= *b {
                    continue;
                }
            }
            for &(a, b) in runs {
                let g = gap(&x.0[0], a, b + 1);
                let total = base.clone() + g.clone() * g;
                best = Some(match best {
                    Some(cur) => cur.min_of(total),
                    None => total,
                });
            }
        }
        Length::from_squared(best.expect("nonempty grid"))
    }

    pub fn contains_point(&self, x: &Point<T>) -> bool {
        self.distance_to(x).squared.is_zero()
    }

    /// `½(K - K)`, exact at resolution `h/2`.
    pub fn steinhaus(&self) -> Self {
        GridSet { h: self.h.half(), cells: self.cells.difference(&self.cells).dilate_down() }
    }

    /// The difference set `K - K`, exact at resolution `h`.
    pub fn difference_set(&self) -> Self {
        self.with_cells(self.cells.difference(&self.cells).dilate_down())
    }

    pub fn neg(&self) -> Self {
        self.with_cells(self.cells.reflect_cells())
    }

    pub fn is_symmetric(&self) -> bool {
        self.cells == self.cells.reflect_cells()
    }

    /// Translation by the lattice vector `h z`.
    pub fn translate_cells(&self, z: &Cell) -> Self {
        self.with_cells(self.cells.translate(z))
    }

    /// Integer cell offsets of a shift vector, if it lies on the lattice.
    pub fn lattice_shift(&self, x: &Point<T>) -> Result<Cell> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        let mut z = [0i64; 3];
        for (i, c) in x.0.iter().enumerate() {
            let r = c.clone() / self.h.clone();
            let k = r.lossy_f64().round();
            if !(T::from_lossy_f64(k)).approx_eq(&r) {
                return Err(Error::NonLatticeShift { h: self.h.lossy_f64() });
            }
            z[i] = k as i64;
        }
        Ok(z)
    }

    /// `|U ∩ (U - x)|` for a lattice shift `x`.
    pub fn correlation(&self, x: &Point<T>) -> Result<T> {
        let z = self.lattice_shift(x)?;
        Ok(self.correlation_cells(&z))
    }

    pub fn correlation_cells(&self, z: &Cell) -> T {
        T::from_int(self.cells.overlap_count(&self.cells, z) as i64) * self.cell_volume()
    }

    /// `M_U(x) = |(U - x) Δ U|` for a lattice shift `x`.
    pub fn shift_symmdiff(&self, x: &Point<T>) -> Result<T> {
        let z = self.lattice_shift(x)?;
        Ok(self.shift_symmdiff_cells(&z))
    }

    pub fn shift_symmdiff_cells(&self, z: &Cell) -> T {
        let overlap = self.cells.overlap_count(&self.cells, z);
        T::from_int(2 * (self.cell_count() - overlap) as i64) * self.cell_volume()
    }

    /// Total measure of exposed cell faces normal to each axis.
    pub fn face_measures(&self) -> Vec<T> {
        let d = self.dim();
        let face = (1..d).fold(T::one(), |acc, _| acc * self.h.clone());
        let counts = self.cells.face_counts();
        (0..d).map(|i| T::from_int(counts[i] as i64) * face.clone()).collect()
    }

    /// Same set at resolution `h / 2^k`.
    pub fn refine(&self, k: u32) -> Self {
        GridSet { h: self.h.clone() / T::pow2(k as i32), cells: self.cells.refine(k) }
    }

    /// Halved resolution, rounding inward or outward.
    pub fn coarsen(&self, outer: bool) -> Self {
        GridSet { h: self.h.clone() * T::two(), cells: self.cells.coarsen(outer) }
    }

    /// Number of halvings that take `self.h` to `target`, if `target` is
    /// `h / 2^k` for some `k ≥ 0`.
    pub fn halvings_to(&self, target: &T) -> Option<u32> {
        let mut h = self.h.clone();
        for k in 0..64 {
            if h.approx_eq(target) {
                return Some(k);
            }
            if h < *target {
                return None;
            }
            h = h.half();
        }
        None
    }

    /// Brings both grids to the finer of their dyadically related
    /// resolutions.
    pub fn common_refinement(&self, other: &Self) -> Result<(Self, Self)> {
        if let Some(k) = self.halvings_to(&other.h) {
            Ok((self.refine(k), other.clone()))
        } else if let Some(k) = other.halvings_to(&self.h) {
            Ok((self.clone(), other.refine(k)))
        } else {
            Err(Error::InvalidParameter("grid resolutions are not dyadically related".into()))
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        match self.common_refinement(other) {
            Ok((a, b)) => a.cells.is_subset_of(&b.cells),
            Err(_) => false,
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common_refinement(other)?;
        Ok(a.with_cells(a.cells.union(&b.cells)))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common_refinement(other)?;
        Ok(a.with_cells(a.cells.intersection(&b.cells)))
    }

    /// Exact convex hull of the cell union.
    pub fn convex_hull(&self) -> ConvexPolytope<T> {
        let pts: Vec<Point<T>> = extreme_corners(&self.cells)
            .into_iter()
            .map(|c| Point((0..self.dim()).map(|i| T::from_int(c[i]) * self.h.clone()).collect()))
            .collect();
        ConvexPolytope::hull(&pts).expect("nonempty grid")
    }

    /// Cell index containing the point (the lower one on shared faces).
    pub fn cell_of(&self, x: &Point<T>) -> Cell {
        let mut c = [0i64; 3];
        for (i, v) in x.0.iter().enumerate() {
            c[i] = (v.clone() / self.h.clone()).floor_i64();
        }
        c
    }

    pub fn cast<U: Scalar>(&self) -> GridSet<U> {
        GridSet { h: U::from_rational(&self.h.to_rational()), cells: self.cells.clone() }
    }
}

/// Corner points (integer lattice units) of the extreme cells of every
/// row; the hull of the union is the hull of these.
fn extreme_corners(cells: &RunSet) -> Vec<Cell> {
    let d = cells.dim();
    let mut pts = Vec::new();
    for (k, runs) in cells.rows() {
        let xs = [runs[0].0, runs[runs.len() - 1].1 + 1];
        let ys: Vec<i64> = if d >= 2 { vec![k[0], k[0] + 1] } else { vec![0] };
        let zs: Vec<i64> = if d >= 3 { vec![k[1], k[1] + 1] } else { vec![0] };
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    pts.push([x, y, z]);
                }
            }
        }
    }
    pts.sort_unstable();
    pts.dedup();
    match d {
        1 => vec![pts[0], pts[pts.len() - 1]],
        2 => hull2_i64(&pts),
        _ => {
            // Keep the planar hull of each z-layer; the spatial hull's
            // vertices are among them.
            let mut out = Vec::new();
            let mut layer: Vec<Cell> = Vec::new();
            pts.sort_unstable_by_key(|p| (p[2], p[0], p[1]));
            for p in pts.iter().chain(std::iter::once(&[i64::MAX; 3])) {
                if !layer.is_empty() && layer[0][2] != p[2] {
                    out.extend(hull2_i64(&layer));
                    layer.clear();
                }
                if p[2] != i64::MAX {
                    layer.push(*p);
                }
            }
            out
        }
    }
}

/// Monotone chain on the first two coordinates; keeps the third as is.
fn hull2_i64(pts: &[Cell]) -> Vec<Cell> {
    let mut p: Vec<Cell> = pts.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: &Cell, a: &Cell, b: &Cell| -> i128 {
        (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
    };
    let mut hull: Vec<Cell> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Cell>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for q in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], q) <= 0 {
                hull.pop();
            }
            hull.push(*q);
        }
        hull.pop();
    }
    hull
}

/// A pair of grids at one resolution with `inner ⊆ K ⊆ outer` for the
/// represented compact set `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSandwich<T> {
    inner: GridSet<T>,
    outer: GridSet<T>,
}

impl<T: Scalar> GridSandwich<T> {
    pub fn new(inner: GridSet<T>, outer: GridSet<T>) -> Result<Self> {
        if inner.h != outer.h || inner.dim() != outer.dim() {
            return Err(Error::InvalidParameter("sandwich sides must share h and dimension".into()));
        }
        if !inner.cells.is_subset_of(&outer.cells) {
            return Err(Error::InvalidParameter("inner cells must be a subset of outer cells".into()));
        }
        if outer.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(GridSandwich { inner, outer })
    }

    pub fn exact(g: GridSet<T>) -> Self {
        GridSandwich { inner: g.clone(), outer: g }
    }

    pub fn inner(&self) -> &GridSet<T> {
        &self.inner
    }

    pub fn outer(&self) -> &GridSet<T> {
        &self.outer
    }

    pub fn dim(&self) -> usize {
        self.outer.dim()
    }

    pub fn h(&self) -> &T {
        self.outer.h()
    }

    pub fn is_exact(&self) -> bool {
        self.inner.cells == self.outer.cells
    }

    pub fn volume(&self) -> VolumeBracket<T> {
        VolumeBracket { lower: self.inner.volume(), upper: self.outer.volume() }
    }

    /// `S(inner) ⊆ S(K) ⊆ S(outer)` by monotonicity of the map.
    pub fn steinhaus(&self) -> Self {
        let outer = self.outer.steinhaus();
        let inner = if self.inner.is_empty() {
            GridSet { h: outer.h.clone(), cells: RunSet::empty(self.dim()) }
        } else {
            self.inner.steinhaus()
        };
        GridSandwich { inner, outer }
    }

    pub fn coarsen(&self) -> Self {
        GridSandwich { inner: self.inner.coarsen(false), outer: self.outer.coarsen(true) }
    }

    pub fn cell_count(&self) -> u64 {
        self.inner.cell_count() + self.outer.cell_count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn rect(h: Rational, nx: i64, ny: i64) -> GridSet<Rational> {
        GridSet::block(2, h, [0, 0, 0], [nx - 1, ny - 1, 0]).unwrap()
    }

    #[test]
    fn eight_cells_volume() {
        let g = GridSet::block(2, q(1, 4), [0, 0, 0], [3, 1, 0]).unwrap();
        assert_eq!(g.volume(), q(1, 2));
    }

    #[test]
    fn rectangle_shift_symmdiff_matches_closed_form() {
        let g = rect(q(1, 4), 8, 4);
        let m = g.shift_symmdiff(&Point(vec![q(1, 2), q(0, 1)])).unwrap();
        assert_eq!(m, q(1, 1));
        let m = g.shift_symmdiff(&Point(vec![q(1, 2), q(1, 2)])).unwrap();
        assert_eq!(m, q(5, 2));
        assert_eq!(g.correlation(&Point(vec![q(1, 2), q(0, 1)])).unwrap(), q(3, 2));
        assert!(g.shift_symmdiff(&Point(vec![q(1, 3), q(0, 1)])).is_err());
    }

    #[test]
    fn steinhaus_of_rectangle_is_centered_rectangle() {
        let g = rect(q(1, 2), 4, 2);
        let s = g.steinhaus();
        assert_eq!(*s.h(), q(1, 4));
        assert_eq!(s.volume(), q(2, 1));
        assert!(s.is_symmetric());
        let expected = GridSet::block(2, q(1, 4), [-4, -2, 0], [3, 1, 0]).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn grid_distance_and_diameter() {
        let g = rect(q(1, 1), 1, 1);
        assert_eq!(g.distance_to(&Point::from_ints(&[2, 2])).squared, q(2, 1));
        assert_eq!(g.diameter().squared, q(2, 1));
        let h = rect(q(1, 1), 2, 1);
        assert_eq!(h.diameter().squared, q(5, 1));
    }

    #[test]
    fn hull_of_l_shape() {
        let g = GridSet::<Rational>::from_cells(2, q(1, 1), [[0, 0, 0], [1, 0, 0], [0, 1, 0]]).unwrap();
        let hull = g.convex_hull();
        assert_eq!(hull.vertices().len(), 5);
        assert_eq!(hull.volume(), q(7, 2));
    }

    #[test]
    fn sandwich_coarsening_brackets() {
        let g = GridSet::<Rational>::from_cells(2, q(1, 4), [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [2, 0, 0]]).unwrap();
        let s = GridSandwich::exact(g.clone()).coarsen();
        assert_eq!(s.volume().lower, q(1, 4));
        assert_eq!(s.volume().upper, q(2, 4));
        assert!(g.is_subset_of(s.outer()));
        assert!(s.inner().is_subset_of(&g));
    }
}
