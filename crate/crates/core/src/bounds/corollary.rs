//! Ranges of continuous functions over the star-shaped part of `K_n`.

use crate::convex::star_subset;
use crate::error::{Error, Result};
use crate::minkowski::ProcessTrace;
use crate::scalar::Scalar;
use crate::set_model::{CompactSet, ConvexPolytope};

/// Built-in functions `f: ℝ^d → ℝ`.
#[derive(Clone, Debug, PartialEq)]
pub enum RangeFunction {
    Coordinate(usize),
    Norm,
    /// `x ↦ a·x + b`.
    Affine(Vec<f64>, f64),
}

impl RangeFunction {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            RangeFunction::Coordinate(i) => x[*i],
            RangeFunction::Norm => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
            RangeFunction::Affine(a, b) => a.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() + b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeStep {
    pub n: u32,
    /// `f(Star(K_n))`.
    pub range: (f64, f64),
    pub covers: bool,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeVerdict {
    /// `f(Conv(K₁)) = [m, M]`.
    pub m: f64,
    pub big_m: f64,
    pub steps: Vec<RangeStep>,
    /// First `n` from which every later step covers `[m+ε, M-ε]` and
    /// stays inside `[m, M]`.
    pub threshold: Option<u32>,
}

/// Checks `[m+ε, M-ε] ⊆ f(Star_n) ⊆ [m, M]` along a trace with snapshots.
pub fn corollary_range_check<T: Scalar>(trace: &ProcessTrace<T>, f: &RangeFunction, eps: f64) -> Result<RangeVerdict> {
    let first = trace.records.first().ok_or(Error::EmptySet)?;
    let k1 = first.snapshot.as_ref().ok_or_else(|| Error::InvalidParameter("trace has no snapshots".into()))?;
    if !k1.has_positive_measure() {
        return Err(Error::NullMeasure);
    }
    if let RangeFunction::Coordinate(i) = f {
        if *i >= k1.dim() {
            return Err(Error::InvalidParameter(format!("coordinate {i} out of range")));
        }
    }
    let hull = k1.convex_hull();
    let (m, big_m) = hull_range(&hull, f);
    let tol = 1e-9 * (1.0 + big_m.abs().max(m.abs()));
    let mut steps = Vec::new();
    for r in &trace.records {
        let k = r.snapshot.as_ref().ok_or_else(|| Error::InvalidParameter("trace has no snapshots".into()))?;
        let star = match k {
            CompactSet::Sandwich(s) => star_subset(&CompactSet::Grid(s.inner().clone()))?,
            _ => star_subset(k)?,
        };
        let range = set_range(&star, f);
        steps.push(RangeStep {
            n: r.n,
            covers: range.0 <= m + eps + tol && range.1 >= big_m - eps - tol,
            within: range.0 >= m - tol && range.1 <= big_m + tol,
            range,
        });
    }
    let mut threshold = None;
    for s in steps.iter().rev() {
        if s.covers && s.within {
            threshold = Some(s.n);
        } else {
            break;
        }
    }
    Ok(RangeVerdict { m, big_m, steps, threshold })
}

/// Extremes over a convex polytope: at vertices, except the minimum of the
/// norm, which is the distance to the origin.
fn hull_range<T: Scalar>(hull: &ConvexPolytope<T>, f: &RangeFunction) -> (f64, f64) {
    let vals: Vec<f64> = hull.vertices().iter().map(|v| f.eval(&v.to_f64())).collect();
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = match f {
        RangeFunction::Norm => hull.distance_to(&crate::geom::Point::origin(hull.dim())).value(),
        _ => vals.iter().cloned().fold(f64::INFINITY, f64::min),
    };
    (lo, hi)
}

/// `f` over a star-shaped set is an interval; its ends are attained at
/// extreme points (cell corners for grids), and the norm's minimum is 0.
fn set_range<T: Scalar>(k: &CompactSet<T>, f: &RangeFunction) -> (f64, f64) {
    let mut pts: Vec<Vec<f64>> = Vec::new();
    match k {
        CompactSet::Grid(g) => {
            let h = g.h().lossy_f64();
            let d = g.dim();
            for c in g.cells().cells() {
                for corner in 0..(1 << d) {
                    pts.push((0..d).map(|i| (c[i] + ((corner >> i) & 1)) as f64 * h).collect());
                }
            }
        }
        CompactSet::Sandwich(s) => return set_range(&CompactSet::Grid(s.inner().clone()), f),
        CompactSet::Intervals(x) => {
            for (a, b) in x.components() {
                pts.push(vec![a.lossy_f64()]);
                pts.push(vec![b.lossy_f64()]);
            }
        }
        CompactSet::Points(p) => pts.extend(p.points().iter().map(|x| x.to_f64())),
        CompactSet::Polytope(p) => pts.extend(p.vertices().iter().map(|x| x.to_f64())),
    }
    let vals: Vec<f64> = pts.iter().map(|x| f.eval(x)).collect();
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = match f {
        RangeFunction::Norm => 0.0,
        _ => vals.iter().cloned().fold(f64::INFINITY, f64::min),
    };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::{iterate_process, ProcessOptions};
    use crate::scalar::{q, Rational};
    use crate::set_model::{GridSet, IntervalUnion, PointSet};

    #[test]
    fn first_coordinate_on_a_square_seed() {
        let g = GridSet::block(2, q(1, 2), [0, 0, 0], [1, 1, 0]).unwrap();
        let opts = ProcessOptions { snapshots: true, ..ProcessOptions::default() };
        let trace = iterate_process(&CompactSet::Grid(g), 3, &opts).unwrap();
        let v = corollary_range_check(&trace, &RangeFunction::Coordinate(0), 0.05).unwrap();
        assert_eq!((v.m, v.big_m), (-0.5, 0.5));
        assert_eq!(v.threshold, Some(1));
        let c = corollary_range_check(&trace, &RangeFunction::Affine(vec![0.0, 0.0], 3.0), 0.0).unwrap();
        assert_eq!(c.threshold, Some(1));
    }

    #[test]
    fn interval_seed_with_a_gap() {
        let k0 = IntervalUnion::canonicalize(vec![(q(0, 1), q(1, 1)), (q(3, 1), q(4, 1))]).unwrap();
        let opts = ProcessOptions { snapshots: true, ..ProcessOptions::default() };
        let trace = iterate_process(&CompactSet::Intervals(k0), 6, &opts).unwrap();
        let v = corollary_range_check(&trace, &RangeFunction::Norm, 0.25).unwrap();
        assert_eq!((v.m, v.big_m), (0.0, 2.0));
        assert!(v.threshold.is_some_and(|n| n > 1));
    }

    #[test]
    fn null_seed_is_rejected() {
        let p: CompactSet<Rational> =
            PointSet::new(1, vec![crate::geom::Point::from_ints(&[0]), crate::geom::Point::from_ints(&[4])])
                .unwrap()
                .into();
        let opts = ProcessOptions { snapshots: true, ..ProcessOptions::default() };
        let trace = iterate_process(&p, 2, &opts).unwrap();
        assert_eq!(corollary_range_check(&trace, &RangeFunction::Norm, 0.1), Err(Error::NullMeasure));
    }
}
