//! Exact convex hulls in dimensions 1 to 3.
//!
//! Planar hulls use Andrew's monotone chain; spatial hulls are built
//! incrementally with a horizon sweep. All predicates go through the
//! scalar type, so rational inputs get exact hulls.

use std::collections::HashSet;

use crate::geom::{cross3, orient2, orient3, Point};
use crate::scalar::Scalar;

/// Raw hull data: vertex list plus, for full-dimensional 3D hulls, an
/// outward-oriented boundary triangulation indexing into `vertices`.
#[derive(Clone, Debug)]
pub struct Hull<T> {
    pub affine_dim: usize,
    pub vertices: Vec<Point<T>>,
    pub triangles: Vec<[usize; 3]>,
}

/// Sign test with the scalar's comparison tolerance.
pub(crate) fn is_positive<T: Scalar>(x: &T) -> bool {
    if T::EXACT {
        *x > T::zero()
    } else {
        x.lossy_f64() > T::tolerance()
    }
}

pub(crate) fn is_zero<T: Scalar>(x: &T) -> bool {
    if T::EXACT {
        x.is_zero()
    } else {
        x.lossy_f64().abs() <= T::tolerance()
    }
}

fn dedup<T: Scalar>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts: Vec<Point<T>> = points.to_vec();
    pts.sort_by(|a, b| a.key().cmp(&b.key()));
    pts.dedup_by(|a, b| a.key() == b.key());
    pts
}

/// Rank of the difference vectors `p - p0` together with a maximal
/// independent index set (into `pts`).
fn affine_basis<T: Scalar>(pts: &[Point<T>]) -> Vec<usize> {
    let p0 = &pts[0];
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Point<T>> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        let v = p.sub(p0);
        let independent = match basis.len() {
            0 => !v.0.iter().all(is_zero),
            1 => {
                let u = &basis[0];
                if v.dim() == 2 {
                    !is_zero(&orient2(&Point::origin(2), u, &v))
                } else {
                    let c = cross3(&pad3(u), &pad3(&v));
                    !c.0.iter().all(is_zero)
                }
            }
            2 => {
                if v.dim() < 3 {
                    false
                } else {
                    !is_zero(&cross3(&basis[0], &basis[1]).dot(&v))
                }
            }
            _ => false,
        };
        if independent {
            chosen.push(i);
            basis.push(v);
            if basis.len() == p0.dim() {
                break;
            }
        }
    }
    chosen
}

fn pad3<T: Scalar>(p: &Point<T>) -> Point<T> {
    let mut c = p.0.clone();
    c.resize(3, T::zero());
    Point(c)
}

/// Strictly convex counter-clockwise hull of planar points (no
/// collinear vertices). Input must be deduplicated.
pub fn monotone_chain<T: Scalar>(pts: &[Point<T>]) -> Vec<Point<T>> {
    let mut sorted = pts.to_vec();
    sorted.sort_by(|a, b| a.lex_cmp(b));
    if sorted.len() < 3 {
        return sorted;
    }
    let mut lower: Vec<Point<T>> = Vec::new();
    for p in &sorted {
        while lower.len() >= 2 && !is_positive(&orient2(&lower[lower.len() - 2], &lower[lower.len() - 1], p)) {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point<T>> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2 && !is_positive(&orient2(&upper[upper.len() - 2], &upper[upper.len() - 1], p)) {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Extreme points of a collinear set.
fn segment_ends<T: Scalar>(pts: &[Point<T>], dir: &Point<T>) -> Vec<Point<T>> {
    let p0 = &pts[0];
    let param = |p: &Point<T>| p.sub(p0).dot(dir);
    let lo = pts.iter().min_by(|a, b| param(a).total_cmp(&param(b))).expect("nonempty");
    let hi = pts.iter().max_by(|a, b| param(a).total_cmp(&param(b))).expect("nonempty");
    vec![lo.clone(), hi.clone()]
}

/// Planar hull of coplanar points in ℝ³, via projection onto the
/// coordinate plane on which the supporting plane is a graph.
fn coplanar_hull<T: Scalar>(pts: &[Point<T>], normal: &Point<T>) -> Vec<Point<T>> {
    let drop = (0..3).find(|&i| !is_zero(&normal.0[i])).expect("nonzero normal");
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let projected: Vec<Point<T>> = pts.iter().map(|p| Point(keep.iter().map(|&i| p.0[i].clone()).collect())).collect();
    let ring = monotone_chain(&projected);
    ring.iter()
        .map(|r| {
            pts.iter()
                .find(|p| keep.iter().enumerate().all(|(j, &i)| p.0[i] == r.0[j]))
                .expect("projection is injective")
                .clone()
        })
        .collect()
}

pub fn convex_hull<T: Scalar>(points: &[Point<T>]) -> Hull<T> {
    let pts = dedup(points);
    let d = pts[0].dim();
    let basis = affine_basis(&pts);
    let rank = basis.len();
    match rank {
        0 => Hull { affine_dim: 0, vertices: vec![pts[0].clone()], triangles: vec![] },
        1 => {
            let dir = pts[basis[0]].sub(&pts[0]);
            Hull { affine_dim: 1, vertices: segment_ends(&pts, &dir), triangles: vec![] }
        }
        2 if d == 2 => Hull { affine_dim: 2, vertices: monotone_chain(&pts), triangles: vec![] },
        2 => {
            let n = cross3(&pts[basis[0]].sub(&pts[0]), &pts[basis[1]].sub(&pts[0]));
            Hull { affine_dim: 2, vertices: coplanar_hull(&pts, &n), triangles: vec![] }
        }
        _ => hull3(&pts, &basis),
    }
}

fn hull3<T: Scalar>(pts: &[Point<T>], basis: &[usize]) -> Hull<T> {
    let mut current: Vec<Point<T>> = pts.to_vec();
    let mut seed = [0, basis[0], basis[1], basis[2]];
    loop {
        let (tris, used) = incremental(&current, seed);
        // Drop vertices that lie on an edge or inside a facet.
        let extreme: Vec<usize> = used
            .iter()
            .copied()
            .filter(|&v| {
                let normals: Vec<Point<T>> = tris
                    .iter()
                    .filter(|t| t.contains(&v))
                    .map(|t| cross3(&current[t[1]].sub(&current[t[0]]), &current[t[2]].sub(&current[t[0]])))
                    .collect();
                normal_rank(&normals) == 3
            })
            .collect();
        if extreme.len() == used.len() {
            let mut index = vec![usize::MAX; current.len()];
            let mut vertices = Vec::with_capacity(used.len());
            for &u in &used {
                index[u] = vertices.len();
                vertices.push(current[u].clone());
            }
            let triangles = tris.iter().map(|t| [index[t[0]], index[t[1]], index[t[2]]]).collect();
            return Hull { affine_dim: 3, vertices, triangles };
        }
        current = extreme.iter().map(|&i| current[i].clone()).collect();
        let b = affine_basis(&current);
        seed = [0, b[0], b[1], b[2]];
    }
}

fn normal_rank<T: Scalar>(normals: &[Point<T>]) -> usize {
    if normals.is_empty() {
        return 0;
    }
    let mut all = vec![Point::origin(3)];
    all.extend(normals.iter().cloned());
    affine_basis(&all).len()
}

/// Incremental hull from a non-degenerate seed tetrahedron. Returns the
/// outward triangles and the sorted indices of vertices in use.
fn incremental<T: Scalar>(pts: &[Point<T>], seed: [usize; 4]) -> (Vec<[usize; 3]>, Vec<usize>) {
    let [a, b, c, d] = seed;
    let mut faces: Vec<[usize; 3]> = if is_positive(&orient3(&pts[a], &pts[b], &pts[c], &pts[d])) {
        vec![[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    } else {
        vec![[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    };
    for (i, p) in pts.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| is_positive(&orient3(&pts[f[0]], &pts[f[1]], &pts[f[2]], p)))
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            edges.insert((f[0], f[1]));
            edges.insert((f[1], f[2]));
            edges.insert((f[2], f[0]));
        }
        let mut next: Vec<[usize; 3]> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        for &(u, v) in &edges {
            if !edges.contains(&(v, u)) {
                next.push([u, v, i]);
            }
        }
        faces = next;
    }
    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    (faces, used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p(c: &[i64]) -> Point<Rational> {
        Point::from_ints(c)
    }

    #[test]
    fn square_with_center_and_edge_points() {
        let pts = vec![p(&[0, 0]), p(&[2, 0]), p(&[2, 2]), p(&[0, 2]), p(&[1, 1]), p(&[1, 0])];
        let h = convex_hull(&pts);
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices.len(), 4);
    }

    #[test]
    fn collinear_points_give_segment() {
        let pts = vec![p(&[1, 1, 1]), p(&[3, 3, 3]), p(&[2, 2, 2]), p(&[-1, -1, -1])];
        let h = convex_hull(&pts);
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertices, vec![p(&[-1, -1, -1]), p(&[3, 3, 3])]);
    }

    #[test]
    fn cube_hull_drops_face_and_edge_points() {
        let mut pts = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    pts.push(p(&[x, y, z]));
                }
            }
        }
        let h = convex_hull(&pts);
        assert_eq!(h.affine_dim, 3);
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.triangles.len(), 12);
    }

    #[test]
    fn coplanar_points_in_space() {
        let pts = vec![p(&[0, 0, 1]), p(&[1, 0, 1]), p(&[0, 1, 1]), p(&[1, 1, 1]), p(&[0, 0, 1])];
        let h = convex_hull(&pts);
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices.len(), 4);
    }
}
