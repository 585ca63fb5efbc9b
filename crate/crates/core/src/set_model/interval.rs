//! Finite unions of closed intervals on the real line.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A nonempty compact subset of ℝ given as sorted, strictly separated
/// closed intervals `[a_i, b_i]` (degenerate `a_i = b_i` allowed).
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion<T> {
    intervals: Vec<(T, T)>,
}

impl<T: Scalar> IntervalUnion<T> {
    /// Sorts and merges raw closed intervals. Overlapping or touching
    /// intervals coalesce.
    pub fn canonicalize(raw: Vec<(T, T)>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySet);
        }
        if raw.iter().any(|(a, b)| a > b) {
            return Err(Error::InvalidParameter("interval with a > b".into()));
        }
        Ok(Self::merge_sorted(raw))
    }

    fn merge_sorted(mut raw: Vec<(T, T)>) -> Self {
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(T, T)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn interval(a: T, b: T) -> Result<Self> {
        Self::canonicalize(vec![(a, b)])
    }

    pub fn point(x: T) -> Self {
        IntervalUnion { intervals: vec![(x.clone(), x)] }
    }

    pub fn from_points<I: IntoIterator<Item = T>>(xs: I) -> Result<Self> {
        Self::canonicalize(xs.into_iter().map(|x| (x.clone(), x)).collect())
    }

    pub fn components(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> &T {
        &self.intervals[0].0
    }

    pub fn max(&self) -> &T {
        &self.intervals[self.intervals.len() - 1].1
    }

    pub fn volume(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |acc, (a, b)| acc + b.clone() - a.clone())
    }

    pub fn diameter(&self) -> T {
        self.max().clone() - self.min().clone()
    }

    /// Index of the component containing `x`, if any.
    pub fn component_of(&self, x: &T) -> Option<usize> {
        let idx = self.intervals.partition_point(|(a, _)| a <= x);
        if idx == 0 {
            return None;
        }
        let (_, b) = &self.intervals[idx - 1];
        (x <= b).then_some(idx - 1)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.component_of(x).is_some()
    }

    pub fn contains_interval(&self, a: &T, b: &T) -> bool {
        match self.component_of(a) {
            Some(i) => b <= &self.intervals[i].1,
            None => false,
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.intervals.iter().all(|(a, b)| other.contains_interval(a, b))
    }

    pub fn neg(&self) -> Self {
        let intervals = self
            .intervals
            .iter()
            .rev()
            .map(|(a, b)| (-b.clone(), -a.clone()))
            .collect();
        IntervalUnion { intervals }
    }

    /// `c · K` for any scalar `c` (a zero factor collapses to `{0}`).
    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::point(T::zero());
        }
        let scaled: Vec<(T, T)> = self
            .intervals
            .iter()
            .map(|(a, b)| (a.clone() * c.clone(), b.clone() * c.clone()))
            .collect();
        if c.is_negative() {
            IntervalUnion {
                intervals: scaled.into_iter().rev().map(|(a, b)| (b, a)).collect(),
            }
        } else {
            IntervalUnion { intervals: scaled }
        }
    }

    pub fn translate(&self, t: &T) -> Self {
        IntervalUnion {
            intervals: self
                .intervals
                .iter()
                .map(|(a, b)| (a.clone() + t.clone(), b.clone() + t.clone()))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut raw = self.intervals.clone();
        raw.extend(other.intervals.iter().cloned());
        Self::merge_sorted(raw)
    }

    /// Minkowski sum `A + B`.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for (a, b) in &self.intervals {
            for (c, d) in &other.intervals {
                raw.push((a.clone() + c.clone(), b.clone() + d.clone()));
            }
        }
        Self::merge_sorted(raw)
    }

    /// Difference set `A - B`.
    pub fn minkowski_difference(&self, other: &Self) -> Self {
        self.minkowski_sum(&other.neg())
    }

    /// `S(K) = ½(K - K)`, assembled from the pairwise pieces
    /// `½(A_i - A_j)` of the component decomposition.
    pub fn steinhaus(&self) -> Self {
        let mut raw = Vec::with_capacity(self.len() * self.len());
        for (ai, bi) in &self.intervals {
            for (aj, bj) in &self.intervals {
                raw.push(((ai.clone() - bj.clone()).half(), (bi.clone() - aj.clone()).half()));
            }
        }
        Self::merge_sorted(raw)
    }

    /// `K = -K` and `0 ∈ K`.
    pub fn is_symmetric(&self) -> bool {
        self.contains(&T::zero()) && *self == self.neg()
    }

    pub fn distance_to(&self, x: &T) -> T {
        let idx = self.intervals.partition_point(|(a, _)| a <= x);
        let mut best: Option<T> = None;
        if idx > 0 {
            let (_, b) = &self.intervals[idx - 1];
            best = Some(if x <= b { T::zero() } else { x.clone() - b.clone() });
        }
        if idx < self.intervals.len() {
            let d = self.intervals[idx].0.clone() - x.clone();
            best = Some(match best {
                Some(b) => b.min_of(d),
                None => d,
            });
        }
        best.expect("nonempty")
    }

    /// `sup_{a ∈ self} d(a, other)`: the distance to `other` is piecewise
    /// linear, so the sup sits at a component endpoint or at the midpoint of
    /// a gap of `other`.
    pub fn directed_hausdorff(&self, other: &Self) -> T {
        let mut best = T::zero();
        for (a, b) in &self.intervals {
            best = best.max_of(other.distance_to(a)).max_of(other.distance_to(b));
        }
        for w in other.intervals.windows(2) {
            let (lo, hi) = (&w[0].1, &w[1].0);
            let mid = (lo.clone() + hi.clone()).half();
            if self.contains(&mid) {
                best = best.max_of((hi.clone() - lo.clone()).half());
            }
        }
        best
    }

    pub fn hausdorff(&self, other: &Self) -> T {
        self.directed_hausdorff(other).max_of(other.directed_hausdorff(self))
    }

    /// `|A ∩ B|` by a merge sweep.
    pub fn intersection_measure(&self, other: &Self) -> T {
        let (mut i, mut j) = (0, 0);
        let mut total = T::zero();
        let (a, b) = (&self.intervals, &other.intervals);
        while i < a.len() && j < b.len() {
            let lo = a[i].0.clone().max_of(b[j].0.clone());
            let hi = a[i].1.clone().min_of(b[j].1.clone());
            if hi > lo {
                total = total + (hi - lo);
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }

    /// The correlation `F(x) = |U ∩ (U - x)|`.
    pub fn correlation(&self, x: &T) -> T {
        self.intersection_measure(&self.translate(&-x.clone()))
    }

    /// `M_U(x) = |(U - x) Δ U|`.
    pub fn shift_symmdiff(&self, x: &T) -> T {
        T::two() * (self.volume() - self.correlation(x))
    }

    /// Radius of the largest closed interval `[-ρ, ρ]` inside the set
    /// (zero when the origin is not an interior point of its component).
    pub fn origin_ball_radius(&self) -> T {
        let zero = T::zero();
        match self.component_of(&zero) {
            Some(i) => {
                let (a, b) = &self.intervals[i];
                (-a.clone()).min_of(b.clone())
            }
            None => zero,
        }
    }

    /// The `m`-fold sumset `K + ... + K`, by binary doubling.
    pub fn sumset_power(&self, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("sumset power must be >= 1".into()));
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = m;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.minkowski_sum(&base),
                    None => base.clone(),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.minkowski_sum(&base);
            }
        }
        Ok(result.expect("m >= 1"))
    }

    /// The uncovered gaps `(b_i, a_{i+1})` between consecutive components.
    pub fn gaps(&self) -> Vec<(T, T)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].1.clone(), w[1].0.clone()))
            .collect()
    }

    pub fn cast<U: Scalar>(&self) -> IntervalUnion<U> {
        IntervalUnion {
            intervals: self
                .intervals
                .iter()
                .map(|(a, b)| (U::from_rational(&a.to_rational()), U::from_rational(&b.to_rational())))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn iu(raw: &[(Rational, Rational)]) -> IntervalUnion<Rational> {
        IntervalUnion::canonicalize(raw.to_vec()).unwrap()
    }

    #[test]
    fn touching_intervals_merge() {
        let k = iu(&[(q(0, 1), q(1, 1)), (q(1, 1), q(2, 1))]);
        assert_eq!(k.components(), &[(q(0, 1), q(2, 1))]);
    }

    #[test]
    fn disjoint_input_is_fixed_point() {
        let raw = vec![(q(-2, 1), q(-1, 1)), (q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))];
        let k = iu(&raw);
        assert_eq!(k.components(), raw.as_slice());
    }

    #[test]
    fn five_components_sorted() {
        let k = iu(&[
            (q(-1, 2), q(1, 2)),
            (q(3, 4), q(5, 4)),
            (q(-5, 4), q(-3, 4)),
            (q(2, 1), q(2, 1)),
            (q(-2, 1), q(-2, 1)),
        ]);
        assert_eq!(k.len(), 5);
        assert_eq!(k.components()[0], (q(-2, 1), q(-2, 1)));
        assert_eq!(k.components()[2], (q(-1, 2), q(1, 2)));
        assert_eq!(k.components()[4], (q(2, 1), q(2, 1)));
    }

    #[test]
    fn empty_and_reversed_inputs_rejected() {
        assert_eq!(IntervalUnion::<Rational>::canonicalize(vec![]), Err(Error::EmptySet));
        assert!(IntervalUnion::canonicalize(vec![(q(1, 1), q(0, 1))]).is_err());
    }

    #[test]
    fn distance_and_hausdorff() {
        let k = iu(&[(q(-2, 1), q(2, 1))]);
        assert_eq!(k.distance_to(&q(3, 1)), q(1, 1));
        assert_eq!(k.distance_to(&q(1, 1)), q(0, 1));
        let pts = IntervalUnion::from_points([q(-2, 1), q(0, 1), q(2, 1)]).unwrap();
        assert_eq!(pts.hausdorff(&k), q(1, 1));
        assert_eq!(k.hausdorff(&k), q(0, 1));
    }

    #[test]
    fn steinhaus_of_single_interval_is_centered() {
        let k = iu(&[(q(3, 1), q(7, 1))]);
        assert_eq!(k.steinhaus().components(), &[(q(-2, 1), q(2, 1))]);
    }

    #[test]
    fn shift_symmdiff_of_interval() {
        let k = iu(&[(q(0, 1), q(1, 1))]);
        assert_eq!(k.shift_symmdiff(&q(1, 4)), q(1, 2));
        assert_eq!(k.shift_symmdiff(&q(5, 1)), q(2, 1));
        assert_eq!(k.correlation(&q(0, 1)), q(1, 1));
    }

    #[test]
    fn float_mode_works() {
        let k = IntervalUnion::canonicalize(vec![(0.0f64, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(k.volume(), 2.0);
        assert!(k.steinhaus().is_symmetric());
    }
}
