//! Hausdorff distances between set representations.
//!
//! Exact pairs (intervals, point sets, polytopes) are handled exactly.
//! Grids are compared on the half-cell lattice: distances from half-lattice
//! points to closed cell unions are exact there, and every point of a cell
//! is within `h √d / 4` of one, which bounds the sampling error.

use super::runs::RunSet;
use super::{raster, CompactSet, ConvexPolytope, GridSandwich, GridSet, Length, Measured, PointSet};
use crate::edt::{squared_edt, HalfLattice};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;

/// Largest half-lattice box a grid comparison may allocate.
pub const HALF_LATTICE_CAP: usize = 1 << 25;

/// Site counts above which the farthest-point enumeration is refused.
const ORACLE_SITE_CAP: [usize; 3] = [1 << 20, 160, 48];

pub fn hausdorff<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> Result<Measured<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    use CompactSet::*;
    Ok(match (a, b) {
        (Intervals(x), Intervals(y)) => Measured::exact(Length::from_value(x.hausdorff(y))),
        (Intervals(x), Points(p)) | (Points(p), Intervals(x)) => {
            Measured::exact(Length::from_value(x.hausdorff(&p.to_intervals()?)))
        }
        (Points(p), Points(q)) => Measured::exact(p.hausdorff(q)),
        (Polytope(p), Polytope(q)) => Measured::exact(p.hausdorff(q)),
        (Points(p), Polytope(q)) | (Polytope(q), Points(p)) => Measured::exact(points_polytope(p, q)?),
        (Intervals(x), Polytope(q)) | (Polytope(q), Intervals(x)) => {
            let v = q.vertices();
            let qi = super::IntervalUnion::interval(v[0].0[0].clone(), v[v.len() - 1].0[0].clone())?;
            Measured::exact(Length::from_value(x.hausdorff(&qi)))
        }
        _ => grid_like(a, b)?,
    })
}

/// Both sides brought onto a common grid.
fn grid_like<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> Result<Measured<T>> {
    let h = match (a.outer_grid(), b.outer_grid()) {
        (Some(g), Some(k)) => {
            if g.h() <= k.h() {
                g.h().clone()
            } else {
                k.h().clone()
            }
        }
        (Some(g), None) | (None, Some(g)) => g.h().clone(),
        (None, None) => unreachable!("exact pairs are handled directly"),
    };
    let sa = as_sandwich(a, &h)?;
    let sb = as_sandwich(b, &h)?;
    sandwich_hausdorff(&sa, &sb)
}

fn as_sandwich<T: Scalar>(k: &CompactSet<T>, h: &T) -> Result<(GridSandwich<T>, f64)> {
    let refine = |g: &GridSet<T>| -> Result<GridSet<T>> {
        match g.halvings_to(h) {
            Some(0) => Ok(g.clone()),
            Some(n) => Ok(g.refine(n)),
            None => Err(Error::InvalidParameter("grid resolutions are not dyadically related".into())),
        }
    };
    let diag = h.lossy_f64() * (k.dim() as f64).sqrt();
    Ok(match k {
        CompactSet::Grid(g) => (GridSandwich::exact(refine(g)?), 0.0),
        CompactSet::Sandwich(s) => (GridSandwich::new(refine(s.inner())?, refine(s.outer())?)?, 0.0),
        CompactSet::Intervals(x) => (raster::rasterize_sandwich(x, h)?, 0.0),
        CompactSet::Polytope(p) => (raster::rasterize_sandwich(p, h)?, 0.0),
        // A point set has no inner cells; its outer raster lies within one
        // cell diagonal of it.
        CompactSet::Points(p) => {
            let outer = raster::rasterize(p, h, raster::RasterMode::Outer)?;
            (GridSandwich::new(GridSet::possibly_empty(h.clone(), RunSet::empty(p.dim()))?, outer)?, diag)
        }
    })
}

/// `d_H` between the represented sets, with error covering the sandwich
/// slack and the half-lattice sampling.
fn sandwich_hausdorff<T: Scalar>(a: &(GridSandwich<T>, f64), b: &(GridSandwich<T>, f64)) -> Result<Measured<T>> {
    let (sa, ea) = a;
    let (sb, eb) = b;
    let h = sa.h().clone();
    let d = sa.dim();
    let quarter = h.lossy_f64() * (d as f64).sqrt() / 4.0;
    let slack = |s: &GridSandwich<T>, extra: f64| -> Result<f64> {
        if s.is_exact() {
            return Ok(extra);
        }
        if s.inner().is_empty() {
            return Ok(if extra > 0.0 { extra } else { f64::INFINITY });
        }
        let half2 = directed_half_lattice(s.outer().cells(), s.inner().cells())?;
        Ok(extra + (half2 as f64).sqrt() * h.lossy_f64() / 2.0 + quarter)
    };
    let core = grid_hausdorff_half2(sa.outer().cells(), sb.outer().cells())?;
    let hh = h.clone() * h.clone() / T::from_int(4);
    let length = Length::from_squared(T::from_int(core as i64) * hh);
    let sampling = if core == 0 { 0.0 } else { quarter };
    let err = slack(sa, *ea)?.max(slack(sb, *eb)?) + sampling;
    let exact_pair = sa.is_exact() && sb.is_exact() && *ea == 0.0 && *eb == 0.0;
    Ok(Measured { length, error: if exact_pair { sampling } else { err } })
}

/// Hausdorff distance between two grids at the same resolution, sampled on
/// the half lattice (error at most `h √d / 4`).
pub fn grid_hausdorff<T: Scalar>(a: &GridSet<T>, b: &GridSet<T>) -> Result<Measured<T>> {
    let (a, b) = a.common_refinement(b)?;
    sandwich_hausdorff(&(GridSandwich::exact(a), 0.0), &(GridSandwich::exact(b), 0.0))
}

/// Squared Hausdorff distance in half-cell units, over half-lattice points.
pub fn grid_hausdorff_half2(a: &RunSet, b: &RunSet) -> Result<u64> {
    Ok(directed_half_lattice(a, b)?.max(directed_half_lattice(b, a)?))
}

/// `max_{u ∈ A} dist(u, B)²` over half-lattice points `u` of the closed
/// cells of `A`, in half-cell units.
pub fn directed_half_lattice(a: &RunSet, b: &RunSet) -> Result<u64> {
    if a.is_empty() {
        return Ok(0);
    }
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.is_subset_of(b) {
        return Ok(0);
    }
    let (alo, ahi) = a.bbox().expect("nonempty");
    let (blo, bhi) = b.bbox().expect("nonempty");
    let d = a.dim();
    let mut lo = alo;
    let mut hi = ahi;
    for i in 0..d {
        lo[i] = lo[i].min(blo[i]);
        hi[i] = hi[i].max(bhi[i]);
    }
    let hl = HalfLattice::covering(d, lo, hi, 0);
    if hl.len() > HALF_LATTICE_CAP {
        return Err(Error::BudgetExceeded { needed: hl.len() as u128, cap: HALF_LATTICE_CAP as u128, suggested_h: None });
    }
    let mut fb = vec![false; hl.len()];
    hl.mark_cells(b, &mut fb);
    let dist = squared_edt(hl.dims, &fb);
    let mut fa = fb;
    fa.iter_mut().for_each(|x| *x = false);
    hl.mark_cells(a, &mut fa);
    let best = fa.iter().zip(&dist).filter(|(m, _)| **m).map(|(_, v)| *v).fold(0.0, f64::max);
    Ok(best as u64)
}

fn points_polytope<T: Scalar>(p: &PointSet<T>, q: &ConvexPolytope<T>) -> Result<Length<T>> {
    let out = p.points().iter().map(|x| q.distance_to(x)).fold(Length::zero(), Length::max);
    let inward = farthest_point(q, p.points())?;
    Ok(out.max(inward))
}

/// `max_{x ∈ Q} min_i |x - s_i|²` for a convex polytope `Q` and finite
/// sites, by enumerating the vertices of the Voronoi diagram clipped to
/// `Q`. Intended as an oracle for small inputs.
pub fn farthest_point<T: Scalar>(q: &ConvexPolytope<T>, sites: &[Point<T>]) -> Result<Length<T>> {
    let d = q.dim();
    if sites.is_empty() {
        return Err(Error::EmptySet);
    }
    if sites.len() > ORACLE_SITE_CAP[d - 1] {
        return Err(Error::Unsupported(format!(
            "farthest-point enumeration is limited to {} sites in dimension {d}",
            ORACLE_SITE_CAP[d - 1]
        )));
    }
    let nearest = |x: &Point<T>| sites.iter().map(|s| s.dist_sq(x)).reduce(T::min_of).expect("nonempty");
    let v = q.vertices();
    let mut best = v.iter().map(nearest).reduce(T::max_of).expect("nonempty");
    match q.affine_dim() {
        0 => {}
        1 => {
            // x(t) = a + t (b - a), t ∈ [0, 1]; bisector crossings of pairs.
            let (a, e) = (&v[0], v[1].sub(&v[0]));
            for (i, si) in sites.iter().enumerate() {
                for sj in &sites[i + 1..] {
                    let den = T::two() * sj.sub(si).dot(&e);
                    if den.is_zero() {
                        continue;
                    }
                    let num = sj.norm_sq() - si.norm_sq() - T::two() * sj.sub(si).dot(a);
                    let t = num / den;
                    if t >= T::zero() && t <= T::one() {
                        best = best.max_of(nearest(&a.add(&e.scale(&t))));
                    }
                }
            }
        }
        k if k == d => {
            let facets = q.halfspaces();
            let mut rows: Vec<(Point<T>, T)> = Vec::with_capacity(d);
            let mut visit = |x: Point<T>| {
                if q.contains(&x) {
                    best = best.clone().max_of(nearest(&x));
                }
            };
            for k in 1..=d + 1 {
                let m = d + 1 - k;
                for_each_subset(sites.len(), k, &mut |ss| {
                    let s0 = &sites[ss[0]];
                    rows.clear();
                    for &j in &ss[1..] {
                        let sj = &sites[j];
                        rows.push((sj.sub(s0).scale(&T::two()), sj.norm_sq() - s0.norm_sq()));
                    }
                    let base = rows.len();
                    for_each_subset(facets.len(), m, &mut |fs| {
                        rows.truncate(base);
                        rows.extend(fs.iter().map(|&f| facets[f].clone()));
                        if let Some(x) = solve(&rows, d) {
                            visit(x);
                        }
                    });
                });
            }
        }
        _ => return Err(Error::Unsupported("farthest point from a planar polygon in space".into())),
    }
    Ok(Length::from_squared(best))
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Solves the square system `rows[i].0 · x = rows[i].1`; `None` if singular.
pub(crate) fn solve<T: Scalar>(rows: &[(Point<T>, T)], d: usize) -> Option<Point<T>> {
    let mut m: Vec<Vec<T>> = rows
        .iter()
        .map(|(n, c)| {
            let mut r = n.0.clone();
            r.push(c.clone());
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if crate::convex::hull::is_zero(&m[piv][col]) {
            return None;
        }
        m.swap(col, piv);
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone() / m[col][col].clone();
                for c in col..=d {
                    let v = m[col][c].clone() * f.clone();
                    m[r][c] = m[r][c].clone() - v;
                }
            }
        }
    }
    Some(Point((0..d).map(|i| m[i][d].clone() / m[i][i].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn pt(x: i64, y: i64) -> Point<Rational> {
        Point::from_ints(&[x, y])
    }

    #[test]
    fn farthest_point_of_square_from_its_corners_is_the_center() {
        let sq = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(2, 1), q(2, 1)]).unwrap();
        let sites = [pt(0, 0), pt(2, 0), pt(0, 2), pt(2, 2)];
        assert_eq!(farthest_point(&sq, &sites).unwrap().squared, q(2, 1));
    }

    #[test]
    fn farthest_point_on_an_edge() {
        let sq = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(2, 1), q(2, 1)]).unwrap();
        // Sites on the bottom corners only: the top edge midpoint is farthest.
        let sites = [pt(0, 0), pt(2, 0)];
        assert_eq!(farthest_point(&sq, &sites).unwrap().squared, q(5, 1));
        let sites = [pt(0, 0), pt(2, 0), pt(0, 2), pt(2, 2), pt(1, 1)];
        // Edge midpoints are at distance 1.
        assert_eq!(farthest_point(&sq, &sites).unwrap().squared, q(1, 1));
    }

    #[test]
    fn farthest_point_on_a_segment() {
        let seg = ConvexPolytope::<Rational>::hull(&[Point::from_ints(&[0]), Point::from_ints(&[4])]).unwrap();
        let sites = [Point::from_ints(&[0]), Point::from_ints(&[1]), Point::from_ints(&[4])];
        assert_eq!(farthest_point(&seg, &sites).unwrap().squared, q(9, 4));
    }

    #[test]
    fn half_lattice_distance_between_offset_blocks() {
        let a = RunSet::from_cells(2, [[0, 0, 0]]);
        let b = RunSet::from_cells(2, [[3, 0, 0]]);
        // Closed cells [0,1] and [3,4]: gap 2 cells, farthest corners 3 apart.
        assert_eq!(grid_hausdorff_half2(&a, &b).unwrap(), 36);
    }

    #[test]
    fn grid_hausdorff_of_nested_squares() {
        let a = GridSet::block(2, 1.0f64, [0, 0, 0], [3, 3, 0]).unwrap();
        let b = GridSet::block(2, 1.0f64, [1, 1, 0], [2, 2, 0]).unwrap();
        let m = grid_hausdorff(&a, &b).unwrap();
        assert!((m.value() - 2f64.sqrt()).abs() < 1e-12);
    }
}
