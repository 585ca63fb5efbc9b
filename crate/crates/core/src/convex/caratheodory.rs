//! Carathéodory decompositions and their dyadic rounding.

use crate::error::{Error, Result};
use crate::geom::{orient2, Point};
use crate::set_model::metrics::solve;
use crate::set_model::{ConvexPolytope, Length, PointSet};
use crate::scalar::Scalar;

use super::hull::is_zero;

/// `y = Σ t_i x_i` with `t_i > 0`, `Σ t_i = 1`, at most `d + 1` terms,
/// sorted by decreasing weight.
#[derive(Clone, Debug, PartialEq)]
pub struct CaratheodoryDecomposition<T> {
    pub points: Vec<Point<T>>,
    pub weights: Vec<T>,
}

impl<T: Scalar> CaratheodoryDecomposition<T> {
    pub fn recombine(&self) -> Point<T> {
        let d = self.points[0].dim();
        self.points
            .iter()
            .zip(&self.weights)
            .fold(Point::origin(d), |acc, (x, t)| acc.add(&x.scale(t)))
    }
}

/// Decomposes `y` over the vertices of `Conv(K₁)`.
pub fn caratheodory_decompose<T: Scalar>(y: &Point<T>, k1: &[Point<T>]) -> Result<CaratheodoryDecomposition<T>> {
    let q = ConvexPolytope::hull(k1)?;
    if y.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: y.dim() });
    }
    if !q.contains(y) {
        return Err(Error::PointOutsideHull);
    }
    let v = q.vertices();
    // Candidate simplices: a fan from the first vertex.
    let simplices: Vec<Vec<usize>> = match q.affine_dim() {
        0 => vec![vec![0]],
        1 => vec![vec![0, 1]],
        2 => (1..v.len() - 1).map(|i| vec![0, i, i + 1]).collect(),
        _ => q
            .triangles()
            .iter()
            .filter(|t| !t.contains(&0))
            .map(|t| vec![0, t[0], t[1], t[2]])
            .collect(),
    };
    for s in &simplices {
        let pts: Vec<Point<T>> = s.iter().map(|&i| v[i].clone()).collect();
        if let Some(w) = barycentric(y, &pts) {
            if w.iter().all(|t| *t >= T::zero() || is_zero(t)) {
                let mut terms: Vec<(T, Point<T>)> =
                    w.into_iter().zip(pts).filter(|(t, _)| !is_zero(t)).collect();
                terms.sort_by(|a, b| b.0.total_cmp(&a.0));
                let (weights, points) = terms.into_iter().unzip();
                return Ok(CaratheodoryDecomposition { points, weights });
            }
        }
    }
    Err(Error::PointOutsideHull)
}

/// Barycentric coordinates of `y` in the simplex `pts` (which spans an
/// affine space containing `y`), or `None` when `y` is off that space.
fn barycentric<T: Scalar>(y: &Point<T>, pts: &[Point<T>]) -> Option<Vec<T>> {
    let k = pts.len() - 1;
    if k == 0 {
        return (y.dist_sq(&pts[0]).is_zero() || is_zero(&y.dist_sq(&pts[0]))).then(|| vec![T::one()]);
    }
    let d = y.dim();
    let edges: Vec<Point<T>> = pts[1..].iter().map(|p| p.sub(&pts[0])).collect();
    let rhs = y.sub(&pts[0]);
    let lam = if k == d && d == 2 {
        // Cramer's rule in the plane.
        let o = Point::origin(2);
        let det = orient2(&o, &edges[0], &edges[1]);
        if is_zero(&det) {
            return None;
        }
        vec![orient2(&o, &rhs, &edges[1]) / det.clone(), orient2(&o, &edges[0], &rhs) / det]
    } else {
        // Normal equations E^T E λ = E^T r, then check the residual.
        let rows: Vec<(Point<T>, T)> = (0..k)
            .map(|i| (Point((0..k).map(|j| edges[i].dot(&edges[j])).collect()), edges[i].dot(&rhs)))
            .collect();
        let lam = solve(&rows, k)?.0;
        let back = edges.iter().zip(&lam).fold(Point::origin(d), |acc, (e, l)| acc.add(&e.scale(l)));
        if !back.sub(&rhs).0.iter().all(is_zero) {
            return None;
        }
        lam
    };
    let t0 = lam.iter().fold(T::one(), |acc, l| acc - l.clone());
    Some(std::iter::once(t0).chain(lam).collect())
}

/// Smallest `n` with `2^n ≥ d(d+1)`.
pub fn dyadic_threshold(d: usize) -> u32 {
    let target = (d * (d + 1)) as u64;
    (0..64).find(|&n| (1u64 << n) >= target).unwrap_or(64)
}

/// Result of rounding Carathéodory weights to the dyadic mesh `2^{-(n-1)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicRounding<T> {
    pub weights: Vec<T>,
    pub point: Point<T>,
    /// `|point - y|`.
    pub distance: Length<T>,
    /// `D d / 2^n` with `D` the diameter of the decomposition's base set.
    pub bound: f64,
    /// Every weight is a nonnegative multiple of `2^{-(n-1)}` and they sum
    /// to one, so `point` is a weighted combination of `K₁` of order `n`.
    pub certified: bool,
}

/// Rounds `t_i` (i ≥ 1) to the nearest multiple of `2^{-(n-1)}` and sets
/// `q_0 = 1 - Σ q_i`. `diameter` is the diameter of `K₁`.
pub fn dyadic_round<T: Scalar>(
    dec: &CaratheodoryDecomposition<T>,
    n: u32,
    diameter: f64,
) -> Result<DyadicRounding<T>> {
    let d = dec.points[0].dim();
    let threshold = dyadic_threshold(d);
    if n < threshold || n == 0 {
        return Err(Error::QThresholdNotMet { n, threshold });
    }
    let mesh = T::pow2(-(n as i32 - 1));
    let mut q: Vec<T> = dec
        .weights
        .iter()
        .skip(1)
        .map(|t| {
            // Nearest integer, halves rounded down.
            let x = t.clone() / mesh.clone();
            let f = x.floor_i64();
            let frac = x - T::from_int(f);
            let k = if frac > T::one().half() { f + 1 } else { f };
            T::from_int(k) * mesh.clone()
        })
        .collect();
    let q0 = q.iter().fold(T::one(), |acc, x| acc - x.clone());
    q.insert(0, q0);
    let point = dec.points.iter().zip(&q).fold(Point::origin(d), |acc, (x, w)| acc.add(&x.scale(w)));
    let y = dec.recombine();
    let certified = q.iter().all(|w| {
        let k = w.clone() / mesh.clone();
        *w >= T::zero() && T::from_int(k.floor_i64()) == k
    });
    Ok(DyadicRounding {
        distance: Length::from_squared(point.dist_sq(&y)),
        weights: q,
        point,
        bound: diameter * d as f64 / 2f64.powi(n as i32),
        certified,
    })
}

/// `{ Σ (α_i / 2^{n-1}) x_i : α_i ≥ 0, Σ α_i = 2^{n-1}, x_i ∈ K₁ }`, built
/// as the `2^{n-1}`-fold sumset scaled down. `cap` bounds the pairwise sums
/// of each doubling step.
pub fn weighted_combination_set<T: Scalar>(k1: &PointSet<T>, n: u32, cap: u128) -> Result<PointSet<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > 40 {
        return Err(Error::BudgetExceeded { needed: u128::MAX, cap, suggested_h: None });
    }
    let m = 1u64 << (n - 1);
    Ok(k1.sumset_power(m, cap)?.scale(&T::pow2(-(n as i32 - 1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn p2(x: Rational, y: Rational) -> Point<Rational> {
        Point(vec![x, y])
    }

    #[test]
    fn vertex_and_centroid() {
        let tri = [Point::<Rational>::from_ints(&[0, 0]), Point::from_ints(&[3, 0]), Point::from_ints(&[0, 3])];
        let dec = caratheodory_decompose(&Point::from_ints(&[3, 0]), &tri).unwrap();
        assert_eq!(dec.weights, vec![q(1, 1)]);
        let dec = caratheodory_decompose(&Point::from_ints(&[1, 1]), &tri).unwrap();
        assert_eq!(dec.weights, vec![q(1, 3); 3]);
        assert_eq!(dec.recombine(), Point::from_ints(&[1, 1]));
        assert_eq!(
            caratheodory_decompose(&Point::from_ints(&[3, 3]), &tri),
            Err(Error::PointOutsideHull)
        );
    }

    #[test]
    fn decomposes_in_space_and_on_segments() {
        let cube: Vec<Point<Rational>> = (0..8)
            .map(|m| Point::from_ints(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]))
            .collect();
        let y = Point(vec![q(1, 3), q(1, 5), q(6, 7)]);
        let dec = caratheodory_decompose(&y, &cube).unwrap();
        assert!(dec.points.len() <= 4);
        assert_eq!(dec.recombine(), y);
        let seg = [Point::from_ints(&[0, 0]), Point::from_ints(&[4, 2])];
        let dec = caratheodory_decompose(&p2(q(1, 1), q(1, 2)), &seg).unwrap();
        assert_eq!(dec.weights, vec![q(3, 4), q(1, 4)]);
        assert!(caratheodory_decompose(&p2(q(1, 1), q(1, 1)), &seg).is_err());
    }

    #[test]
    fn dyadic_weights_are_kept() {
        let tri = [Point::<Rational>::from_ints(&[0, 0]), Point::from_ints(&[4, 0]), Point::from_ints(&[0, 4])];
        let dec = caratheodory_decompose(&Point::from_ints(&[1, 1]), &tri).unwrap();
        let r = dyadic_round(&dec, 3, 32f64.sqrt()).unwrap();
        assert_eq!(r.distance.squared, q(0, 1));
        assert!(r.certified);
        assert_eq!(dyadic_round(&dec, 2, 1.0), Err(Error::QThresholdNotMet { n: 2, threshold: 3 }));
        assert_eq!(dyadic_threshold(2), 3);
        assert_eq!(dyadic_threshold(3), 4);
    }

    #[test]
    fn two_point_seed_combinations() {
        let k1 = PointSet::new(1, vec![Point(vec![q(-1, 2)]), Point(vec![q(0, 1)]), Point(vec![q(1, 2)])]).unwrap();
        let w = weighted_combination_set(&k1, 3, 1 << 20).unwrap();
        let expect: Vec<Rational> = (-4..=4).map(|k| q(k, 8)).collect();
        let got: Vec<Rational> = w.points().iter().map(|p| p.0[0].clone()).collect();
        assert_eq!(got, expect);
        assert_eq!(weighted_combination_set(&k1, 1, 1 << 20).unwrap(), k1);
    }
}
