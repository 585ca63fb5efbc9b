//! Minkowski-sum machinery: the Steinhaus map and its iteration, sumsets,
//! shifted symmetric differences, the `M*` bracket and tube volumes.

pub mod lattice;
mod mstar;
mod process;
mod tube;

pub use lattice::{LatticeProcess, LATTICE_POINT_CAP};
pub use mstar::{mstar_estimate, MstarPlan, MstarReport};
pub use process::{iterate_process, ProcessOptions, ProcessTrace, SeedInfo, TraceRecord};
pub use tube::{minkowski_content_estimate, parallel_volume, tube_volume, ContentEstimate, TubeMeasure};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;
use crate::set_model::CompactSet;

/// Pairwise sums allowed per doubling step of a point-set sumset.
pub const SUMSET_CAP: u128 = 1_000_000;

/// `S(K) = ½(K - K)`.
pub fn steinhaus_map<T: Scalar>(k: &CompactSet<T>, budget: u64) -> Result<CompactSet<T>> {
    k.steinhaus(budget)
}

/// The `m`-fold sumset `K + ... + K` of a point set or interval union.
pub fn sumset_power<T: Scalar>(k: &CompactSet<T>, m: u64) -> Result<CompactSet<T>> {
    match k {
        CompactSet::Points(p) => Ok(p.sumset_power(m, SUMSET_CAP)?.into()),
        CompactSet::Intervals(x) => Ok(x.sumset_power(m)?.into()),
        _ => Err(Error::Unsupported(format!("sumset power of a {} set", k.kind()))),
    }
}

/// Checks `S^n(K₀) = 2^{-n}(P - P)` with `P` the `2^{n-1}`-fold sumset of `K₀`.
pub fn identity_check_powers<T: Scalar>(k0: &CompactSet<T>, n: u32) -> Result<bool> {
    if n == 0 || n > 30 {
        return Err(Error::InvalidParameter(format!("n = {n} is outside 1..=30")));
    }
    let scale = T::pow2(-(n as i32));
    match k0 {
        CompactSet::Points(p) => {
            let mut lhs = p.clone();
            for _ in 0..n {
                let needed = lhs.len() as u128 * lhs.len() as u128;
                if needed > SUMSET_CAP {
                    return Err(Error::BudgetExceeded { needed, cap: SUMSET_CAP, suggested_h: None });
                }
                lhs = lhs.steinhaus();
            }
            let rhs = p.sumset_power(1 << (n - 1), SUMSET_CAP)?;
            let needed = rhs.len() as u128 * rhs.len() as u128;
            if needed > SUMSET_CAP {
                return Err(Error::BudgetExceeded { needed, cap: SUMSET_CAP, suggested_h: None });
            }
            Ok(lhs == rhs.minkowski_sum(&rhs.neg()).scale(&scale))
        }
        CompactSet::Intervals(x) => {
            let mut lhs = x.clone();
            for _ in 0..n {
                lhs = lhs.steinhaus();
            }
            let pw = x.sumset_power(1 << (n - 1))?;
            Ok(lhs == pw.minkowski_difference(&pw).scale(&scale))
        }
        _ => Err(Error::Unsupported(format!("power identity for a {} set", k0.kind()))),
    }
}

/// `M_U(x) = |(U - x) Δ U|`.
pub fn shift_symmdiff<T: Scalar>(u: &CompactSet<T>, x: &Point<T>) -> Result<T> {
    match u {
        CompactSet::Grid(g) => g.shift_symmdiff(x),
        CompactSet::Intervals(k) => {
            if x.dim() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, found: x.dim() });
            }
            Ok(k.shift_symmdiff(&x.0[0]))
        }
        _ => Err(Error::Unsupported(format!("shifted symmetric difference of a {} set", u.kind()))),
    }
}

/// `F(x) = |U ∩ (U - x)|`.
pub fn correlation<T: Scalar>(u: &CompactSet<T>, x: &Point<T>) -> Result<T> {
    match u {
        CompactSet::Grid(g) => g.correlation(x),
        CompactSet::Intervals(k) => {
            if x.dim() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, found: x.dim() });
            }
            Ok(k.correlation(&x.0[0]))
        }
        _ => Err(Error::Unsupported(format!("correlation of a {} set", u.kind()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};
    use crate::set_model::{GridSet, IntervalUnion, PointSet};

    fn k1_example() -> CompactSet<Rational> {
        IntervalUnion::canonicalize(vec![(q(-2, 1), q(-2, 1)), (q(-1, 2), q(1, 2)), (q(2, 1), q(2, 1))])
            .unwrap()
            .into()
    }

    #[test]
    fn interval_sumsets() {
        let k: CompactSet<Rational> =
            IntervalUnion::canonicalize(vec![(q(0, 1), q(1, 1)), (q(3, 1), q(3, 1))]).unwrap().into();
        let want =
            IntervalUnion::canonicalize(vec![(q(0, 1), q(2, 1)), (q(3, 1), q(4, 1)), (q(6, 1), q(6, 1))]).unwrap();
        assert_eq!(sumset_power(&k, 2).unwrap(), want.into());
        assert_eq!(sumset_power(&k, 1).unwrap(), k);
        let p: CompactSet<Rational> =
            PointSet::new(1, vec![Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap().into();
        let s = sumset_power(&p, 3).unwrap();
        let want = PointSet::new(1, (0..4).map(|i| Point::from_ints(&[i])).collect()).unwrap();
        assert_eq!(s, want.into());
    }

    #[test]
    fn steinhaus_of_k1_example() {
        let s = steinhaus_map(&k1_example(), 1 << 20).unwrap();
        let want = IntervalUnion::canonicalize(vec![
            (q(-2, 1), q(-2, 1)),
            (q(-5, 4), q(-3, 4)),
            (q(-1, 2), q(1, 2)),
            (q(3, 4), q(5, 4)),
            (q(2, 1), q(2, 1)),
        ])
        .unwrap();
        assert_eq!(s, want.into());
    }

    #[test]
    fn power_identity() {
        let p: CompactSet<Rational> =
            PointSet::new(1, vec![Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap().into();
        assert!(identity_check_powers(&p, 1).unwrap());
        assert!(identity_check_powers(&p, 2).unwrap());
        assert!(identity_check_powers(&k1_example(), 2).unwrap());
        assert!(identity_check_powers(&k1_example(), 3).unwrap());
    }

    #[test]
    fn rectangle_symmetric_difference_and_correlation() {
        let u: CompactSet<Rational> = GridSet::block(2, q(1, 4), [0, 0, 0], [7, 3, 0]).unwrap().into();
        let x = Point(vec![q(1, 2), q(0, 1)]);
        assert_eq!(shift_symmdiff(&u, &x).unwrap(), q(1, 1));
        assert_eq!(correlation(&u, &x).unwrap(), q(3, 2));
        let x = Point(vec![q(1, 2), q(1, 2)]);
        assert_eq!(shift_symmdiff(&u, &x).unwrap(), q(5, 2));
        assert_eq!(shift_symmdiff(&u, &Point(vec![q(0, 1), q(0, 1)])).unwrap(), q(0, 1));
        assert!(matches!(
            shift_symmdiff(&u, &Point(vec![q(1, 3), q(0, 1)])),
            Err(Error::NonLatticeShift { .. })
        ));
    }
}
