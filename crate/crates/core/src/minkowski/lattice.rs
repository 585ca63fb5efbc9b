//! Exact iteration of the Steinhaus map on finite rational point sets.
//!
//! With `q` the common denominator of `K₀` and `P = q K₀ ⊂ ℤ^d`, every
//! iterate is `K_n = B Z_n / (2^n q)` where `B` is a basis of the lattice
//! spanned by `P - P` and `Z_1 = P - P`, `Z_{n+1} = Z_n - Z_n` in
//! coefficient space. The coefficient sets are dense, so they are stored
//! as runs.
//!
//! Hausdorff distances to `Conv(K₁) = 2^{n-1} conv(P - P) / (2^n q)` are
//! exact: in the plane the farthest point of the hull from the sites is a
//! Voronoi vertex inside the hull, a crossing of a Voronoi edge with the
//! hull boundary, or a hull vertex.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use spade::handles::FixedVertexHandle;
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Rational;
use crate::set_model::runs::{Cell, RunSet};
use crate::set_model::{farthest_point, ConvexPolytope, Length, PointSet};

/// Largest coordinate magnitude (in scaled integer units) the engine
/// accepts; keeps every predicate exact in `f64` and `i128`.
const COORD_LIMIT: i64 = 1 << 40;

/// Largest coefficient set the engine will materialise.
pub const LATTICE_POINT_CAP: u64 = 1 << 26;

#[derive(Clone, Debug)]
pub struct LatticeProcess {
    dim: usize,
    q: i64,
    /// Echelon basis of the difference lattice (ambient integer vectors).
    basis: Vec<Cell>,
    /// Vertices of `conv(P - P)`, ambient integer coordinates.
    hull: Vec<Cell>,
    z: RunSet,
    n: u32,
}

impl LatticeProcess {
    /// Starts at `K₁ = S(K₀)`.
    pub fn new(k0: &PointSet<Rational>) -> Result<Self> {
        let dim = k0.dim();
        let mut q = BigInt::from(1);
        for p in k0.points() {
            for c in &p.0 {
                q = q.lcm(c.denom());
            }
        }
        let q = q.to_i64().filter(|&q| q < COORD_LIMIT).ok_or_else(too_large)?;
        let mut pts: Vec<Cell> = Vec::with_capacity(k0.len());
        for p in k0.points() {
            let mut c: Cell = [0; 3];
            for (i, x) in p.0.iter().enumerate() {
                let v = (x * Rational::from_integer(BigInt::from(q))).to_integer();
                c[i] = v.to_i64().filter(|v| v.abs() < COORD_LIMIT / 4).ok_or_else(too_large)?;
            }
            pts.push(c);
        }
        let mut diffs: Vec<Cell> = Vec::with_capacity(pts.len() * pts.len());
        for a in &pts {
            for b in &pts {
                diffs.push([a[0] - b[0], a[1] - b[1], a[2] - b[2]]);
            }
        }
        diffs.sort_unstable();
        diffs.dedup();
        let mut basis: Vec<Cell> = Vec::new();
        for v in &diffs {
            insert_echelon(&mut basis, *v, dim);
        }
        size_reduce(&mut basis);
        let rank = basis.len();
        let z = if rank == 0 {
            RunSet::from_cells(1, [[0, 0, 0]])
        } else {
            RunSet::from_cells(rank, diffs.iter().map(|v| coefficients(&basis, v)))
        };
        let hull_pts: Vec<Point<Rational>> = diffs.iter().map(|v| int_point(v, dim)).collect();
        let hull = ConvexPolytope::hull(&hull_pts)?
            .vertices()
            .iter()
            .map(|p| {
                let mut c: Cell = [0; 3];
                for (i, x) in p.0.iter().enumerate() {
                    c[i] = x.to_integer().to_i64().expect("integer hull vertex");
                }
                c
            })
            .collect();
        Ok(LatticeProcess { dim, q, basis, hull, z, n: 1 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rank of the difference lattice.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> u64 {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coefficients(&self) -> &RunSet {
        &self.z
    }

    /// Advances to `K_{n+1}`.
    pub fn step(&mut self, cap: u64) -> Result<()> {
        let (lo, hi) = self.z.bbox().expect("nonempty");
        // |Z - Z| is at most the product of the doubled extents.
        let bound: u128 = (0..self.z.dim()).map(|i| (2 * (hi[i] - lo[i]) + 1) as u128).product();
        let reach = (0..self.z.dim()).map(|i| 2 * hi[i].abs().max(lo[i].abs())).max().unwrap_or(0);
        if self.ambient_reach(reach) >= COORD_LIMIT {
            return Err(too_large());
        }
        if bound > cap as u128 * 16 {
            return Err(Error::BudgetExceeded { needed: bound, cap: cap as u128, suggested_h: None });
        }
        let next = self.z.difference(&self.z);
        if next.len() > cap {
            return Err(Error::BudgetExceeded { needed: next.len() as u128, cap: cap as u128, suggested_h: None });
        }
        self.z = next;
        self.n += 1;
        Ok(())
    }

    fn ambient_reach(&self, coeff: i64) -> i64 {
        let m = self.basis.iter().flat_map(|b| b.iter()).map(|x| x.abs()).max().unwrap_or(0);
        coeff.saturating_mul(m).saturating_mul(self.basis.len().max(1) as i64)
    }

    /// Scaled ambient integer coordinates `2^n q x` of the points of `K_n`.
    pub fn sites(&self) -> Vec<Cell> {
        self.z.cells().map(|c| self.ambient(&c)).collect()
    }

    fn ambient(&self, c: &Cell) -> Cell {
        let mut x: Cell = [0; 3];
        for (i, b) in self.basis.iter().enumerate() {
            for k in 0..3 {
                x[k] += c[i] * b[k];
            }
        }
        x
    }

    /// Denominator `2^n q` of the scaled coordinates.
    pub fn denominator(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.q) << self.n as usize)
    }

    pub fn to_point_set(&self) -> Result<PointSet<Rational>> {
        let den = self.denominator();
        let pts = self
            .sites()
            .iter()
            .map(|c| Point((0..self.dim).map(|i| Rational::from_integer(BigInt::from(c[i])) / den.clone()).collect()))
            .collect();
        PointSet::new(self.dim, pts)
    }

    /// Vertices of `Conv(K₁)` scaled to the current units, `2^{n-1}(P - P)`.
    fn scaled_hull(&self) -> Vec<Cell> {
        let f = 1i64 << (self.n - 1);
        self.hull.iter().map(|v| [v[0] * f, v[1] * f, v[2] * f]).collect()
    }

    /// `Conv(K₁)` in real coordinates.
    pub fn hull_polytope(&self) -> Result<ConvexPolytope<Rational>> {
        let den = Rational::from_integer(BigInt::from(2 * self.q));
        let pts: Vec<Point<Rational>> = self
            .hull
            .iter()
            .map(|v| Point((0..self.dim).map(|i| Rational::from_integer(BigInt::from(v[i])) / den.clone()).collect()))
            .collect();
        ConvexPolytope::hull(&pts)
    }

    /// `K_n ⊆ Conv(K₁)`, exactly.
    pub fn within_hull(&self) -> Result<bool> {
        let q = ConvexPolytope::hull(&self.scaled_hull().iter().map(|v| int_point(v, self.dim)).collect::<Vec<_>>())?;
        if !q.is_full_dimensional() {
            return Ok(self.sites().iter().all(|s| q.contains(&int_point(s, self.dim))));
        }
        // Integer vertices give integer facet equations.
        let to_i128 = |x: &Rational| x.to_integer().to_i128().ok_or_else(too_large);
        let mut planes: Vec<([i128; 3], i128)> = Vec::new();
        for (n, c) in q.halfspaces() {
            let mut ni = [0i128; 3];
            for (i, x) in n.0.iter().enumerate() {
                ni[i] = to_i128(x)?;
            }
            planes.push((ni, to_i128(&c)?));
        }
        Ok(self.z.cells().all(|c| {
            let x = self.ambient(&c);
            planes.iter().all(|(n, c)| n[0] * x[0] as i128 + n[1] * x[1] as i128 + n[2] * x[2] as i128 <= *c)
        }))
    }

    /// `K_{n-1} ⊆ K_n`, given the previous coefficient set.
    pub fn contains_previous(&self, prev: &RunSet) -> bool {
        prev.cells().all(|c| self.z.contains(&[2 * c[0], 2 * c[1], 2 * c[2]]))
    }

    /// Diameter of `K_n`.
    pub fn diameter(&self) -> Result<Length<Rational>> {
        // Row extremes carry the hull.
        let mut ext: Vec<Point<Rational>> = Vec::new();
        for (k, runs) in self.z.rows() {
            for x in [runs[0].0, runs[runs.len() - 1].1] {
                ext.push(int_point(&self.ambient(&[x, k[0], k[1]]), self.dim));
            }
        }
        let d = ConvexPolytope::hull(&ext)?.diameter().squared;
        let den = self.denominator();
        Ok(Length::from_squared(d / (den.clone() * den)))
    }

    /// Exact `d_H(K_n, Conv(K₁))`.
    pub fn hausdorff_to_hull(&self) -> Result<Length<Rational>> {
        self.hausdorff_to_hull_within(None)
    }

    /// Exact `d_H(K_n, Conv(K₁))` given an upper bound on it, such as the
    /// distance at an earlier step (the iterates are nested from `K₁` on).
    /// The bound only affects speed.
    pub fn hausdorff_to_hull_within(&self, upper: Option<&Length<Rational>>) -> Result<Length<Rational>> {
        let den = self.denominator();
        let scaled = match (self.rank(), self.dim) {
            (0, _) => Rational::zero(),
            (1, _) => self.hausdorff_rank1(),
            (2, 2) => {
                let banded = match upper {
                    Some(u) => self.hausdorff_planar_banded(&(u.squared.clone() * den.clone() * den.clone()))?,
                    None => None,
                };
                match banded {
                    Some(v) => v,
                    None => self.hausdorff_planar()?,
                }
            }
            _ => {
                let q = ConvexPolytope::hull(
                    &self.scaled_hull().iter().map(|v| int_point(v, self.dim)).collect::<Vec<_>>(),
                )?;
                let sites: Vec<Point<Rational>> = self.sites().iter().map(|s| int_point(s, self.dim)).collect();
                farthest_point(&q, &sites)?.squared
            }
        };
        Ok(Length::from_squared(scaled / (den.clone() * den)))
    }

    /// Collinear case: half the largest gap, or the end overhang.
    fn hausdorff_rank1(&self) -> Rational {
        let b = self.basis[0];
        let norm2: i64 = b.iter().map(|x| x * x).sum();
        let f = 1i64 << (self.n - 1);
        let hull_c: Vec<i64> = self.hull.iter().map(|v| coefficients(&self.basis, v)[0] * f).collect();
        let (qlo, qhi) = (*hull_c.iter().min().unwrap(), *hull_c.iter().max().unwrap());
        let runs = self.z.row(&[0, 0]);
        // Work in half units to keep midpoints integral.
        let mut best2 = 0i128.max(2 * (runs[0].0 - qlo) as i128).max(2 * (qhi - runs[runs.len() - 1].1) as i128);
        if runs.iter().any(|&(a, b)| b > a) {
            best2 = best2.max(1);
        }
        for w in runs.windows(2) {
            best2 = best2.max((w[1].0 - w[0].1) as i128);
        }
        let v = Rational::from_integer(BigInt::from(best2)) / Rational::from_integer(BigInt::from(2));
        v.clone() * v * Rational::from_integer(BigInt::from(norm2))
    }

    /// Planar case, using every site.
    fn hausdorff_planar(&self) -> Result<Rational> {
        let mut best = Best::default();
        planar_candidates(&self.sites(), &self.scaled_hull(), &mut best)?;
        Ok(best.value())
    }

    /// Planar case given `upper ≥ d_H` in scaled units (squared). Returns
    /// `None` when the shortcut cannot certify its answer.
    ///
    /// If `d_H` exceeds the covering radius `μ` of the lattice, the empty
    /// disk at the farthest point contains a lattice point missing from
    /// `K_n`, so every site on its boundary lies within `2·upper` of a
    /// missing point. Only those sites are triangulated, and candidates are
    /// accepted in decreasing order once their disks are checked against
    /// the sites left out.
    fn hausdorff_planar_banded(&self, upper2: &Rational) -> Result<Option<Rational>> {
        let (b1, b2) = (self.basis[0], self.basis[1]);
        let det = (b1[0] as i128 * b2[1] as i128 - b1[1] as i128 * b2[0] as i128).abs() as f64;
        let (n1, n2) = (norm(&b1), norm(&b2));
        let upper = upper2.to_f64().unwrap_or(f64::INFINITY).sqrt() * (1.0 + 1e-9);
        // Coefficient offsets of a vector of length ≤ 2·upper.
        let (w1, w2) = ((2.0 * upper * n2 / det).ceil() + 1.0, (2.0 * upper * n1 / det).ceil() + 1.0);
        if !(w1.max(w2) < 1e6) {
            return Ok(None);
        }
        let interior = self.z.erode_box_2d(w1 as i64, w2 as i64);
        if interior.len() < self.z.len() / 4 {
            return Ok(None);
        }
        let band: Vec<Cell> = self.z.cells().filter(|c| !interior.contains(c)).map(|c| self.ambient(&c)).collect();
        let mu2 = covering_radius2(&b1, &b2);
        let mu2f = mu2.to_f64().unwrap_or(0.0);
        let mut sink = Collect { lo: mu2f * (1.0 - 1e-9), hi: upper * upper, cands: Vec::new() };
        if planar_candidates(&band, &self.scaled_hull(), &mut sink).is_err() {
            return Ok(None);
        }
        let mut cands = sink.cands;
        cands.sort_by(|a, b| b.0.total_cmp(&a.0));
        for (_, c) in cands {
            if self.disk_is_empty(&interior, &c, det, n1, n2) {
                let v = Rational::new(BigInt::from(c.f2), BigInt::from(c.cd) * BigInt::from(c.cd));
                return Ok((v > mu2).then_some(v));
            }
        }
        Ok(None)
    }

    /// No point of `interior` strictly inside the candidate's disk.
    fn disk_is_empty(&self, interior: &RunSet, c: &Cand, det: f64, n1: f64, n2: f64) -> bool {
        let (b1, b2) = (self.basis[0], self.basis[1]);
        let (x, y) = (c.cx as f64 / c.cd as f64, c.cy as f64 / c.cd as f64);
        let sdet = (b1[0] as i128 * b2[1] as i128 - b1[1] as i128 * b2[0] as i128) as f64;
        let c1 = (x * b2[1] as f64 - y * b2[0] as f64) / sdet;
        let c2 = (b1[0] as f64 * y - b1[1] as f64 * x) / sdet;
        let r = (c.f2 as f64).sqrt() / c.cd as f64;
        let (r1, r2) = (r * n2 / det + 1.0, r * n1 / det + 1.0);
        let inside = |k: &Cell| -> bool {
            if !interior.contains(k) {
                return false;
            }
            let p = self.ambient(k);
            let dx = c.cd * p[0] as i128 - c.cx;
            let dy = c.cd * p[1] as i128 - c.cy;
            match dx.checked_mul(dx).zip(dy.checked_mul(dy)).and_then(|(a, b)| a.checked_add(b)) {
                Some(d2) => d2 < c.f2,
                None => true,
            }
        };
        // The lattice points nearest the centre reject most candidates.
        let (f1, f2) = (c1.floor() as i64, c2.floor() as i64);
        if [[f1, f2, 0], [f1 + 1, f2, 0], [f1, f2 + 1, 0], [f1 + 1, f2 + 1, 0]].iter().any(inside) {
            return false;
        }
        let (lo1, hi1) = ((c1 - r1).floor() as i64, (c1 + r1).ceil() as i64);
        let (lo2, hi2) = ((c2 - r2).floor() as i64, (c2 + r2).ceil() as i64);
        !(lo2..=hi2).any(|k2| (lo1..=hi1).any(|k1| inside(&[k1, k2, 0])))
    }
}

fn norm(b: &Cell) -> f64 {
    ((b[0] as f64).powi(2) + (b[1] as f64).powi(2)).sqrt()
}

/// Squared covering radius of the planar lattice spanned by `b1, b2`: the
/// circumradius of the non-obtuse triangle of a reduced basis.
fn covering_radius2(b1: &Cell, b2: &Cell) -> Rational {
    let dot = |a: [i128; 2], b: [i128; 2]| a[0] * b[0] + a[1] * b[1];
    let (mut u, mut v) = ([b1[0] as i128, b1[1] as i128], [b2[0] as i128, b2[1] as i128]);
    loop {
        if dot(u, u) > dot(v, v) {
            std::mem::swap(&mut u, &mut v);
        }
        let m = Rational::new(BigInt::from(dot(u, v)), BigInt::from(dot(u, u))).round().to_integer();
        let m = m.to_i128().expect("reduction step fits");
        let w = [v[0] - m * u[0], v[1] - m * u[1]];
        // Ties |2u·v| = |u|² would cycle.
        if m == 0 || dot(w, w) >= dot(v, v) {
            break;
        }
        v = w;
    }
    if dot(u, v) < 0 {
        v = [-v[0], -v[1]];
    }
    let w = [u[0] - v[0], u[1] - v[1]];
    let cross = u[0] * v[1] - u[1] * v[0];
    let num = BigInt::from(dot(u, u)) * BigInt::from(dot(v, v)) * BigInt::from(dot(w, w));
    Rational::new(num, BigInt::from(4) * BigInt::from(cross) * BigInt::from(cross))
}

/// A point `(cx, cy) / cd` of the hull with squared distance `f2 / cd²` to
/// its nearest triangulated site; `cd > 0`.
#[derive(Clone, Copy, Debug)]
struct Cand {
    cx: i128,
    cy: i128,
    cd: i128,
    f2: i128,
}

trait Sink {
    /// Whether a candidate with this approximate squared distance matters.
    fn wants(&self, approx: f64) -> bool;
    fn take(&mut self, approx: f64, c: Cand);
}

/// Candidates in a window of squared distances.
struct Collect {
    lo: f64,
    hi: f64,
    cands: Vec<(f64, Cand)>,
}

impl Sink for Collect {
    fn wants(&self, approx: f64) -> bool {
        approx >= self.lo && approx <= self.hi
    }

    fn take(&mut self, approx: f64, c: Cand) {
        self.cands.push((approx, c));
    }
}

fn sq(x: i128) -> Option<i128> {
    x.checked_mul(x)
}

fn cand(cx: i128, cy: i128, cd: i128, fx: i128, fy: i128) -> Result<(f64, Cand)> {
    let f2 = sq(fx).zip(sq(fy)).and_then(|(a, b)| a.checked_add(b)).ok_or_else(too_large)?;
    sq(cd).ok_or_else(too_large)?;
    let approx = ((fx as f64).powi(2) + (fy as f64).powi(2)) / (cd as f64).powi(2);
    Ok((approx, Cand { cx, cy, cd, f2 }))
}

/// Feeds every point where the distance to `sites` can peak over the hull:
/// Voronoi vertices inside it, crossings of Voronoi edges with its
/// boundary, and its vertices.
fn planar_candidates(sites: &[Cell], hull: &[Cell], sink: &mut dyn Sink) -> Result<()> {
    let pts: Vec<Point2<f64>> = sites.iter().map(|s| Point2::new(s[0] as f64, s[1] as f64)).collect();
    let tri: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::bulk_load_stable(pts)
        .map_err(|e| Error::Degenerate(format!("triangulation failed: {e:?}")))?;
    let m = hull.len();
    // Outward edge normals n·x ≤ c of the CCW hull.
    let edges: Vec<([i128; 2], i128)> = (0..m)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % m]);
            let n = [(b[1] - a[1]) as i128, (a[0] - b[0]) as i128];
            (n, n[0] * a[0] as i128 + n[1] * a[1] as i128)
        })
        .collect();
    for face in tri.inner_faces() {
        let [p0, p1, p2] = face.vertices().map(|v| sites[v.fix().index()]);
        let (bx, by) = ((p1[0] - p0[0]) as i128, (p1[1] - p0[1]) as i128);
        let (cx, cy) = ((p2[0] - p0[0]) as i128, (p2[1] - p0[1]) as i128);
        let mut d = 2 * (bx * cy - by * cx);
        if d == 0 {
            continue;
        }
        let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
        let (mut ux, mut uy) = (cy * b2 - by * c2, bx * c2 - cx * b2);
        let approx = ((ux as f64).powi(2) + (uy as f64).powi(2)) / (d as f64).powi(2);
        if !sink.wants(approx) {
            continue;
        }
        if d < 0 {
            (d, ux, uy) = (-d, -ux, -uy);
        }
        let (ax, ay) = (p0[0] as i128 * d + ux, p0[1] as i128 * d + uy);
        if edges.iter().all(|(n, c)| n[0] * ax + n[1] * ay <= c * d) {
            let (a, c) = cand(ax, ay, d, ux, uy)?;
            sink.take(a, c);
        }
    }
    let nearest = |x: f64, y: f64| -> usize { tri.nearest_neighbor(Point2::new(x, y)).expect("nonempty").fix().index() };
    for v in hull {
        let s = sites[nearest(v[0] as f64, v[1] as f64)];
        let (a, c) = cand(v[0] as i128, v[1] as i128, 1, (v[0] - s[0]) as i128, (v[1] - s[1]) as i128)?;
        if sink.wants(a) {
            sink.take(a, c);
        }
    }
    // Walk each hull edge through the Voronoi cells it crosses.
    for i in 0..m {
        let (a, b) = (hull[i], hull[(i + 1) % m]);
        let e = [(b[0] - a[0]) as i128, (b[1] - a[1]) as i128];
        let mut cur = nearest(a[0] as f64, a[1] as f64);
        let (mut tn, mut td) = (0i128, 1i128);
        loop {
            let c = sites[cur];
            let mut next: Option<(usize, i128, i128, i128)> = None;
            for edge in tri.vertex(FixedVertexHandle::from_index(cur)).out_edges() {
                let j = edge.to().fix().index();
                let s = sites[j];
                let ds = [(s[0] - c[0]) as i128, (s[1] - c[1]) as i128];
                let den = 2 * (e[0] * ds[0] + e[1] * ds[1]);
                if den <= 0 {
                    continue;
                }
                let s2 = (s[0] as i128).pow(2) + (s[1] as i128).pow(2);
                let c2 = (c[0] as i128).pow(2) + (c[1] as i128).pow(2);
                let num = s2 - c2 - 2 * (a[0] as i128 * ds[0] + a[1] as i128 * ds[1]);
                // Only crossings at or after the current position.
                if num * td < tn * den {
                    continue;
                }
                let es = e[0] * s[0] as i128 + e[1] * s[1] as i128;
                let better = match next {
                    None => true,
                    Some((_, bn, bd, bes)) => {
                        let (l, r) = (num * bd, bn * den);
                        l < r || (l == r && es > bes)
                    }
                };
                if better {
                    next = Some((j, num, den, es));
                }
            }
            let Some((j, num, den, _)) = next else { break };
            if num > den {
                break;
            }
            // x(t) - c = (a - c) + t e with t = num / den.
            let px = (a[0] - c[0]) as i128 * den + num * e[0];
            let py = (a[1] - c[1]) as i128 * den + num * e[1];
            let (ap, cp) = cand(a[0] as i128 * den + num * e[0], a[1] as i128 * den + num * e[1], den, px, py)?;
            if sink.wants(ap) {
                sink.take(ap, cp);
            }
            cur = j;
            tn = num;
            td = den;
        }
    }
    Ok(())
}

impl Sink for Best {
    fn wants(&self, approx: f64) -> bool {
        approx >= self.approx * (1.0 - 1e-9)
    }

    fn take(&mut self, _: f64, c: Cand) {
        self.offer(BigInt::from(c.f2), BigInt::from(c.cd) * BigInt::from(c.cd));
    }
}

/// Running maximum of fractions `num / den` with `den > 0`.
#[derive(Default)]
struct Best {
    num: BigInt,
    den: BigInt,
    approx: f64,
}

impl Best {
    fn offer(&mut self, num: BigInt, den: BigInt) {
        if self.den.is_zero() || &num * &self.den > &self.num * &den {
            self.approx = num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY);
            self.num = num;
            self.den = den;
        }
    }


    fn value(&self) -> Rational {
        if self.den.is_zero() {
            Rational::zero()
        } else {
            Rational::new(self.num.clone(), self.den.clone())
        }
    }
}

fn too_large() -> Error {
    Error::Unsupported("coordinates exceed the exact lattice engine's range".into())
}

fn int_point(c: &Cell, dim: usize) -> Point<Rational> {
    Point((0..dim).map(|i| Rational::from_integer(BigInt::from(c[i]))).collect())
}

/// Adds `v` to a row-echelon lattice basis (pivots strictly increasing),
/// keeping it a basis of the lattice generated so far.
fn insert_echelon(basis: &mut Vec<Cell>, mut v: Cell, dim: usize) {
    for col in 0..dim {
        if v[col] == 0 {
            continue;
        }
        match basis.iter().position(|b| pivot(b) == Some(col)) {
            Some(i) => {
                let b = basis[i];
                let e = b[col].extended_gcd(&v[col]);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let (bf, vf) = (b[col] / g, v[col] / g);
                let mut nb: Cell = [0; 3];
                let mut nv: Cell = [0; 3];
                for k in 0..3 {
                    nb[k] = x * b[k] + y * v[k];
                    nv[k] = bf * v[k] - vf * b[k];
                }
                basis[i] = nb;
                v = nv;
            }
            None => {
                let at = basis.iter().position(|b| pivot(b).is_some_and(|p| p > col)).unwrap_or(basis.len());
                basis.insert(at, v);
                return;
            }
        }
    }
}

/// Reduces each row against the later rows at their pivot columns into
/// `[-p/2, p/2)`, keeping the echelon form and the lattice.
fn size_reduce(basis: &mut [Cell]) {
    for j in (0..basis.len()).rev() {
        let b = basis[j];
        let col = pivot(&b).expect("nonzero basis row");
        let p = b[col].abs();
        for i in 0..j {
            let m = (2 * basis[i][col] + p).div_euclid(2 * p);
            for k in 0..3 {
                basis[i][k] -= m * b[k] * b[col].signum();
            }
        }
    }
}

fn pivot(b: &Cell) -> Option<usize> {
    b.iter().position(|&x| x != 0)
}

/// Integer coordinates of a lattice vector in the echelon basis.
fn coefficients(basis: &[Cell], v: &Cell) -> Cell {
    let mut v = *v;
    let mut c: Cell = [0; 3];
    for (i, b) in basis.iter().enumerate() {
        let p = pivot(b).expect("nonzero basis row");
        debug_assert_eq!(v[p] % b[p], 0);
        c[i] = v[p] / b[p];
        for k in 0..3 {
            v[k] -= c[i] * b[k];
        }
    }
    debug_assert_eq!(v, [0; 3]);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn seed(pts: &[&[i64]]) -> PointSet<Rational> {
        PointSet::new(pts[0].len(), pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap()
    }

    #[test]
    fn two_point_seed_distances() {
        let mut lp = LatticeProcess::new(&seed(&[&[0], &[4]])).unwrap();
        for n in 1..=8u32 {
            assert_eq!(lp.n(), n);
            let d = lp.hausdorff_to_hull().unwrap();
            assert_eq!(d.exact(), Some(q(4, 1 << (n + 1))));
            lp.step(LATTICE_POINT_CAP).unwrap();
        }
    }

    #[test]
    fn banded_distance_agrees_with_the_full_triangulation() {
        let seeds: [&[&[i64]]; 6] = [
            &[&[0, 0], &[3, 1], &[1, 3], &[2, 2], &[3, 0]],
            &[&[0, 0], &[3, 2], &[1, 3]],
            &[&[0, 0], &[1, 0], &[0, 1]],
            &[&[0, 0], &[2, 0], &[0, 3], &[3, 3]],
            &[&[0, 0], &[5, 1], &[2, 7]],
            &[&[1, 0], &[2, 1], &[0, 2]],
        ];
        let mut certified = 0;
        for pts in seeds {
            let mut lp = LatticeProcess::new(&seed(pts)).unwrap();
            let mut prev = lp.hausdorff_to_hull().unwrap();
            for _ in 0..6 {
                lp.step(LATTICE_POINT_CAP).unwrap();
                let full = lp.hausdorff_to_hull().unwrap();
                let den = lp.denominator();
                let upper = prev.squared.clone() * den.clone() * den.clone();
                if let Some(v) = lp.hausdorff_planar_banded(&upper).unwrap() {
                    certified += 1;
                    assert_eq!(v / (den.clone() * den), full.squared);
                }
                assert_eq!(lp.hausdorff_to_hull_within(Some(&prev)).unwrap(), full);
                prev = full;
            }
        }
        assert!(certified >= 8, "only {certified} steps certified");
    }

    #[test]
    fn matches_naive_iteration_on_a_sublattice() {
        let k0 = seed(&[&[0, 0], &[2, 1], &[1, 2]]);
        let mut lp = LatticeProcess::new(&k0).unwrap();
        let mut naive = k0.steinhaus();
        for _ in 0..3 {
            assert_eq!(lp.to_point_set().unwrap(), naive);
            let hull = lp.hull_polytope().unwrap();
            let brute = crate::set_model::farthest_point(&hull, naive.points());
            if let Ok(b) = brute {
                assert_eq!(lp.hausdorff_to_hull().unwrap().squared, b.squared);
            }
            assert!(lp.within_hull().unwrap());
            let prev = lp.coefficients().clone();
            lp.step(LATTICE_POINT_CAP).unwrap();
            assert!(lp.contains_previous(&prev));
            naive = naive.steinhaus();
        }
    }

    #[test]
    fn echelon_basis_spans_the_difference_lattice() {
        let mut basis = Vec::new();
        for v in [[2, 1, 0], [1, 2, 0], [3, 3, 0]] {
            insert_echelon(&mut basis, v, 2);
        }
        // Index |det| = 3.
        let det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
        assert_eq!(det.abs(), 3);
        assert_eq!(coefficients(&basis, &[1, 2, 0]).len(), 3);
    }
}
