//! Ray profiles `P_θ = { t ≥ 0 : tθ ∈ K }` of symmetric sets, the
//! quasi-support functions derived from them, and star-convex subsets.
//!
//! Quasi-support values use the diameter convention: `r(θ)` is twice the
//! first exit of the ray from `K`, `D(θ)` twice its last hit.

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::set_model::runs::{Cell, RunSet};
use crate::set_model::{rasterize, CompactSet, ConvexPolytope, GridSet, IntervalUnion, PointSet, RasterMode};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiSupportProfile {
    pub directions: Vec<Vec<f64>>,
    pub r_of_theta: Vec<f64>,
    pub d_of_theta: Vec<f64>,
    /// `min_θ r(θ)` over the sampled directions.
    pub r: f64,
    /// `max_θ D(θ)` over the sampled directions.
    pub d: f64,
    /// Additive error of every entry (`h √d` on grids, else 0).
    pub error: f64,
}

impl QuasiSupportProfile {
    /// CSV with one row per direction: `theta_0..theta_{d-1}, r_theta, D_theta`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let d = self.directions.first().map_or(0, Vec::len);
        let mut header: Vec<String> = (0..d).map(|i| format!("theta_{i}")).collect();
        header.push("r_theta".into());
        header.push("D_theta".into());
        let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
        w.write_record(&header).map_err(io)?;
        for ((u, r), dd) in self.directions.iter().zip(&self.r_of_theta).zip(&self.d_of_theta) {
            let mut rec: Vec<String> = u.iter().map(|x| x.to_string()).collect();
            rec.push(r.to_string());
            rec.push(dd.to_string());
            w.write_record(&rec).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

pub fn quasi_support<T: Scalar>(k: &CompactSet<T>, directions: &[Vec<f64>]) -> Result<QuasiSupportProfile> {
    if !k.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if let Some(u) = directions.iter().find(|u| u.len() != k.dim()) {
        return Err(Error::DimensionMismatch { expected: k.dim(), found: u.len() });
    }
    let mut r_of_theta = Vec::with_capacity(directions.len());
    let mut d_of_theta = Vec::with_capacity(directions.len());
    for u in directions {
        let (exit, last) = ray_profile(k, u);
        r_of_theta.push(2.0 * exit);
        d_of_theta.push(2.0 * last);
    }
    let error = match k.outer_grid() {
        Some(g) => g.h().lossy_f64() * (k.dim() as f64).sqrt(),
        None => 0.0,
    };
    Ok(QuasiSupportProfile {
        r: r_of_theta.iter().copied().fold(f64::INFINITY, f64::min),
        d: d_of_theta.iter().copied().fold(0.0, f64::max),
        directions: directions.to_vec(),
        r_of_theta,
        d_of_theta,
        error,
    })
}

/// `(sup{s : [0, s] ⊆ P_θ}, sup P_θ)` along the unit direction `u`.
pub fn ray_profile<T: Scalar>(k: &CompactSet<T>, u: &[f64]) -> (f64, f64) {
    match k {
        CompactSet::Intervals(x) => interval_ray(x, u[0]),
        CompactSet::Polytope(p) => polytope_ray(p, u),
        CompactSet::Points(p) => points_ray(p, u),
        CompactSet::Grid(g) => {
            let (a, b) = grid_ray(g.cells(), u);
            let h = g.h().lossy_f64();
            (a * h, b * h)
        }
        CompactSet::Sandwich(s) => {
            let h = s.h().lossy_f64();
            let exit = if s.inner().is_empty() { 0.0 } else { grid_ray(s.inner().cells(), u).0 };
            (exit * h, grid_ray(s.outer().cells(), u).1 * h)
        }
    }
}

fn interval_ray<T: Scalar>(x: &IntervalUnion<T>, dir: f64) -> (f64, f64) {
    let y = if dir >= 0.0 { x.clone() } else { x.neg() };
    let exit = match y.component_of(&T::zero()) {
        Some(i) => y.components()[i].1.lossy_f64(),
        None => 0.0,
    };
    (exit, y.max().lossy_f64().max(0.0))
}

fn polytope_ray<T: Scalar>(p: &ConvexPolytope<T>, u: &[f64]) -> (f64, f64) {
    let verts: Vec<Vec<f64>> = p.vertices().iter().map(Point::to_f64).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let scale = verts.iter().map(|v| dot(v, v).sqrt()).fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    let t = if p.is_full_dimensional() {
        let mut t = f64::INFINITY;
        for (n, c) in p.halfspaces() {
            let n = n.to_f64();
            let c = c.lossy_f64();
            let nu = dot(&n, u);
            if nu > 0.0 {
                t = t.min(c / nu);
            }
            if c < -tol {
                return (0.0, 0.0);
            }
        }
        t.max(0.0)
    } else {
        match p.affine_dim() {
            0 => 0.0,
            1 => {
                // A symmetric segment [-v, v]: the ray stays inside only
                // when it runs along v.
                let v = &verts[0];
                let vn = dot(v, v).sqrt();
                let along = dot(v, u).abs();
                if (along - vn).abs() <= tol.max(1e-12 * vn) {
                    vn
                } else {
                    0.0
                }
            }
            _ => {
                // A symmetric polygon in space: clip the ray by its edges
                // within the plane.
                let n = cross(&sub(&verts[1], &verts[0]), &sub(&verts[2], &verts[0]));
                let nn = dot(&n, &n).sqrt();
                if dot(&n, u).abs() > 1e-12 * nn {
                    0.0
                } else {
                    let m = verts.len();
                    let mut t = f64::INFINITY;
                    for i in 0..m {
                        let (a, b) = (&verts[i], &verts[(i + 1) % m]);
                        let mut out = cross(&sub(b, a), &n);
                        if dot(&out, &sub(&verts[(i + 2) % m], a)) > 0.0 {
                            out = out.iter().map(|x| -x).collect();
                        }
                        let ou = dot(&out, u);
                        if ou > 0.0 {
                            t = t.min(dot(&out, a) / ou);
                        }
                    }
                    t.max(0.0)
                }
            }
        }
    };
    (t, t)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn points_ray<T: Scalar>(p: &PointSet<T>, u: &[f64]) -> (f64, f64) {
    let mut last = 0.0f64;
    for x in p.points() {
        let x = x.to_f64();
        let t: f64 = x.iter().zip(u).map(|(a, b)| a * b).sum();
        let off: f64 = x.iter().zip(u).map(|(a, b)| (a - t * b).powi(2)).sum::<f64>().sqrt();
        let scale = x.iter().map(|a| a.abs()).fold(1.0, f64::max);
        if t > 0.0 && off <= 1e-12 * scale {
            last = last.max(t);
        }
    }
    (0.0, last)
}

/// Walks the ray `t u` through the closed cells (unit lattice) and returns
/// the first exit and the last hit parameter.
pub(crate) fn grid_ray(cells: &RunSet, u: &[f64]) -> (f64, f64) {
    let d = cells.dim();
    let Some((lo, hi)) = cells.bbox() else { return (0.0, 0.0) };
    let mut c: Cell = [0; 3];
    let mut t_max = [f64::INFINITY; 3];
    let mut t_delta = [f64::INFINITY; 3];
    let mut step = [0i64; 3];
    let mut t_end = f64::INFINITY;
    let mut flat = Vec::new();
    for i in 0..d {
        if u[i] > 0.0 {
            c[i] = 0;
            step[i] = 1;
            t_max[i] = 1.0 / u[i];
            t_delta[i] = 1.0 / u[i];
            t_end = t_end.min((hi[i] + 1) as f64 / u[i]);
        } else if u[i] < 0.0 {
            c[i] = -1;
            step[i] = -1;
            t_max[i] = 1.0 / -u[i];
            t_delta[i] = 1.0 / -u[i];
            t_end = t_end.min(lo[i] as f64 / u[i]);
        } else {
            // The ray runs inside the face x_i = 0 shared by cells -1 and 0.
            flat.push(i);
            if lo[i] > 0 || hi[i] < -1 {
                return (0.0, 0.0);
            }
        }
    }
    if !(t_end > 0.0) {
        return (0.0, 0.0);
    }
    let in_set = |c: &Cell| -> bool {
        (0..1usize << flat.len()).any(|mask| {
            let mut e = *c;
            for (j, &axis) in flat.iter().enumerate() {
                e[axis] = if mask >> j & 1 == 1 { -1 } else { 0 };
            }
            cells.contains(&e)
        })
    };
    let mut t = 0.0;
    let mut exit: Option<f64> = None;
    let mut last = 0.0;
    while t < t_end {
        let t_next = (0..d).map(|i| t_max[i]).fold(f64::INFINITY, f64::min).min(t_end);
        if in_set(&c) {
            last = t_next;
        } else if exit.is_none() {
            exit = Some(t);
        }
        let tie = 1e-12 * t_next.max(1.0);
        for i in 0..d {
            if step[i] != 0 && t_max[i] <= t_next + tie {
                c[i] += step[i];
                t_max[i] += t_delta[i];
            }
        }
        t = t_next;
    }
    (exit.unwrap_or(last).min(last), last)
}

/// Inner approximation of the largest star-convex (about 0) subset.
///
/// Exact for intervals, polytopes and point sets. On grids a cell is kept
/// when the cone `conv({0} ∪ cell)` lies in the set, which certifies every
/// point of the cell; cells are tested exactly on the unit lattice.
pub fn star_subset<T: Scalar>(k: &CompactSet<T>) -> Result<CompactSet<T>> {
    if !k.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let d = k.dim();
    let origin = || CompactSet::Points(PointSet::singleton(Point::origin(d)));
    Ok(match k {
        CompactSet::Intervals(x) => {
            let exit = match x.component_of(&T::zero()) {
                Some(i) => x.components()[i].1.clone(),
                None => T::zero(),
            };
            CompactSet::Intervals(IntervalUnion::interval(-exit.clone(), exit)?)
        }
        CompactSet::Polytope(p) => CompactSet::Polytope(p.clone()),
        CompactSet::Points(_) => origin(),
        CompactSet::Grid(_) | CompactSet::Sandwich(_) => {
            let g = k.inner_grid().expect("grid");
            if g.is_empty() {
                return Ok(origin());
            }
            let kept = grid_star_cells(g.cells())?;
            if kept.is_empty() {
                origin()
            } else {
                CompactSet::Grid(GridSet::new(g.h().clone(), kept)?)
            }
        }
    })
}

fn grid_star_cells(cells: &RunSet) -> Result<RunSet> {
    let d = cells.dim();
    let mut kept = Vec::new();
    for c in cells.cells() {
        if cone_cells(d, &c)?.is_subset_of(cells) {
            kept.push(c);
        }
    }
    Ok(RunSet::from_cells(d, kept))
}

/// Cells (unit lattice) whose interior meets `conv({0} ∪ cell)`. Floating
/// rounding can only add cells, which keeps the star test sound.
fn cone_cells(d: usize, c: &Cell) -> Result<RunSet> {
    let mut pts: Vec<Point<f64>> = vec![Point::origin(d)];
    for mask in 0..1usize << d {
        pts.push(Point((0..d).map(|i| (c[i] + (mask >> i & 1) as i64) as f64).collect()));
    }
    if d <= 2 {
        let poly = ConvexPolytope::hull(&pts)?;
        return Ok(rasterize(&poly, &1.0, RasterMode::Outer)?.cells().clone());
    }
    // Slab by slab: the cells of slab k meeting the cone are those whose
    // square meets the projection of the cone's part in k < z < k + 1.
    let zmin = c[2].min(0);
    let zmax = (c[2] + 1).max(0);
    let mut runs = Vec::new();
    for k in zmin..zmax {
        let (z0, z1) = (k as f64, (k + 1) as f64);
        let mut sec: Vec<Point<f64>> = Vec::new();
        for (i, a) in pts.iter().enumerate() {
            if a.0[2] >= z0 && a.0[2] <= z1 {
                sec.push(Point(vec![a.0[0], a.0[1]]));
            }
            for b in &pts[i + 1..] {
                for z in [z0, z1] {
                    let (za, zb) = (a.0[2], b.0[2]);
                    if (za - z) * (zb - z) < 0.0 {
                        let s = (z - za) / (zb - za);
                        sec.push(Point(vec![a.0[0] + s * (b.0[0] - a.0[0]), a.0[1] + s * (b.0[1] - a.0[1])]));
                    }
                }
            }
        }
        let poly = ConvexPolytope::hull(&sec)?;
        let slab = rasterize(&poly, &1.0, RasterMode::Outer)?;
        for (key, rs) in slab.cells().rows() {
            for &r in rs {
                runs.push(([key[0], k], r));
            }
        }
    }
    Ok(RunSet::from_runs(3, runs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::direction_plan;
    use crate::scalar::{q, Rational};

    fn k1_example() -> CompactSet<Rational> {
        IntervalUnion::canonicalize(vec![(q(-2, 1), q(-3, 2)), (q(-1, 2), q(1, 2)), (q(3, 2), q(2, 1))])
            .unwrap()
            .into()
    }

    #[test]
    fn one_dimensional_profiles() {
        let p = quasi_support(&k1_example(), &direction_plan(1, None).unwrap()).unwrap();
        assert_eq!((p.r, p.d), (1.0, 4.0));
        let annulus: CompactSet<Rational> =
            IntervalUnion::canonicalize(vec![(q(-2, 1), q(-1, 1)), (q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))])
                .unwrap()
                .into();
        let p = quasi_support(&annulus, &[vec![1.0]]).unwrap();
        assert_eq!((p.r, p.d), (0.0, 4.0));
        assert_eq!(
            star_subset(&annulus).unwrap(),
            CompactSet::Intervals(IntervalUnion::point(q(0, 1)))
        );
    }

    #[test]
    fn square_profile_and_grid_agree() {
        let sq = ConvexPolytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let dirs = direction_plan(2, Some(16)).unwrap();
        let exact = quasi_support(&CompactSet::Polytope(sq.clone()), &dirs).unwrap();
        assert!((exact.r - 2.0).abs() < 1e-12);
        assert!((exact.d - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        let g = CompactSet::Grid(rasterize(&sq, &(1.0 / 8.0), RasterMode::Outer).unwrap());
        let approx = quasi_support(&g, &dirs).unwrap();
        for (a, b) in exact.r_of_theta.iter().zip(&approx.r_of_theta) {
            assert!((a - b).abs() <= approx.error, "{a} vs {b}");
        }
    }

    #[test]
    fn plus_sign_is_its_own_star() {
        let h = bar(-6, 5, -1, 0).union(&bar(-1, 0, -6, 5));
        let g: CompactSet<f64> = GridSet::new(1.0, h.clone()).unwrap().into();
        let s = star_subset(&g).unwrap();
        assert_eq!(s.outer_grid().unwrap().cells(), &h);
        // An annular square loses everything.
        let ring = bar(-4, 3, -4, 3);
        let hole = bar(-1, 0, -1, 0);
        let ring: RunSet = RunSet::from_cells(2, ring.cells().filter(|c| !hole.contains(c)));
        let s = star_subset(&CompactSet::Grid(GridSet::new(1.0, ring).unwrap())).unwrap();
        assert!(matches!(s, CompactSet::Points(_)));
    }

    #[test]
    fn cube_star_is_the_cube() {
        let cube = RunSet::from_cells(
            3,
            (-2..2).flat_map(|x| (-2..2).flat_map(move |y| (-2..2).map(move |z| [x, y, z]))),
        );
        let s = star_subset(&CompactSet::Grid(GridSet::new(1.0, cube.clone()).unwrap())).unwrap();
        assert_eq!(s.outer_grid().unwrap().cells(), &cube);
    }

    fn bar(x0: i64, x1: i64, y0: i64, y1: i64) -> RunSet {
        RunSet::from_cells(2, (x0..=x1).flat_map(|x| (y0..=y1).map(move |y| [x, y, 0])))
    }
}
