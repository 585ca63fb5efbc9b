//! The one-dimensional convergence theorem with explicit constants, the
//! `K₁(r, D, δ)` family and the higher-dimensional half-hull threshold.
//!
//! Here `r` is a diameter: `[-r/2, r/2] ⊆ K₁` is the largest symmetric
//! interval in `K₁`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set_model::IntervalUnion;

#[derive(Clone, Debug, PartialEq)]
pub struct OneDConstants<T> {
    pub r: T,
    pub d: T,
    pub eps: T,
    /// Smallest `n` with `2^n ≥ D/r`.
    pub n0: u32,
    /// `1 - 2^{-n₀}`.
    pub t0: T,
    /// Smallest `ℓ` with `t₀^ℓ ≤ 2ε/D`.
    pub l0: u32,
    /// `ℓ₀ n₀`; containment holds for every `n` above it.
    pub threshold: u32,
}

/// Either explicit constants, or `r ≥ D`, in which case
/// `K_n = [-D/2, D/2]` for every `n ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum OneDCertificate<T> {
    Constants(OneDConstants<T>),
    Degenerate { d: T },
}

impl<T: Scalar> OneDCertificate<T> {
    /// Every `n > threshold` satisfies the containment.
    pub fn threshold(&self) -> u32 {
        match self {
            OneDCertificate::Constants(c) => c.threshold,
            OneDCertificate::Degenerate { .. } => 0,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            OneDCertificate::Constants(c) => json!({
                "r_diameter": c.r.lossy_f64(),
                "D": c.d.lossy_f64(),
                "eps": c.eps.lossy_f64(),
                "n0": c.n0,
                "t0": c.t0.lossy_f64(),
                "l0": c.l0,
                "threshold": c.threshold,
            }),
            OneDCertificate::Degenerate { d } => json!({ "degenerate": true, "D": d.lossy_f64() }),
        }
    }
}

pub fn one_d_constants<T: Scalar>(r: &T, d: &T, eps: &T) -> Result<OneDCertificate<T>> {
    if *r <= T::zero() || *d <= T::zero() {
        return Err(Error::InvalidParameter("r and D must be positive".into()));
    }
    if r >= d {
        return Ok(OneDCertificate::Degenerate { d: d.clone() });
    }
    if *eps <= T::zero() || *eps >= d.half() {
        return Err(Error::InvalidParameter("eps must lie in (0, D/2)".into()));
    }
    let ratio = d.clone() / r.clone();
    let n0 = (0..64u32).find(|&n| T::pow2(n as i32) >= ratio).ok_or_else(|| {
        Error::InvalidParameter("D/r is too large".into())
    })?;
    let t0 = T::one() - T::pow2(-(n0 as i32));
    let target = T::two() * eps.clone() / d.clone();
    let mut power = T::one();
    let mut l0 = 0u32;
    while power > target {
        power = power * t0.clone();
        l0 += 1;
        if l0 > 1_000_000 {
            return Err(Error::InvalidParameter("eps is too small".into()));
        }
    }
    Ok(OneDCertificate::Constants(OneDConstants {
        r: r.clone(),
        d: d.clone(),
        eps: eps.clone(),
        n0,
        t0,
        l0,
        threshold: l0 * n0,
    }))
}

/// `[-D/2, -D/2+δ] ∪ [-r/2, r/2] ∪ [D/2-δ, D/2]`.
pub fn k1_family<T: Scalar>(r: &T, d: &T, delta: &T) -> Result<IntervalUnion<T>> {
    if !(*r > T::zero() && r < d && *delta >= T::zero() && delta <= r) {
        return Err(Error::InvalidParameter("need 0 <= delta <= r < D and r > 0".into()));
    }
    let half_d = d.half();
    let half_r = r.half();
    IntervalUnion::canonicalize(vec![
        (-half_d.clone(), delta.clone() - half_d.clone()),
        (-half_r.clone(), half_r),
        (half_d.clone() - delta.clone(), half_d),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneDVerdict<T> {
    pub certificate: OneDCertificate<T>,
    /// Last iterate examined (`threshold + 1`).
    pub n_checked: u32,
    /// Smallest `n*` such that the containment holds for all
    /// `n* ≤ n ≤ n_checked`.
    pub first_containing: Option<u32>,
    /// `[-D/2+ε, D/2-ε] ⊆ K_n ⊆ [-D/2, D/2]` at `n_checked`.
    pub holds: bool,
    /// `‖1_{K_n} - 1_{[-D/2,D/2]}‖₁ = D - |K_n|` at `n_checked`.
    pub l1_gap: T,
    pub l1_ok: bool,
}

/// Runs the exact process from `K₀` and checks the containment.
pub fn verify_one_d_containment<T: Scalar>(k0: &IntervalUnion<T>, eps: &T) -> Result<OneDVerdict<T>> {
    if k0.volume() <= T::zero() {
        return Err(Error::NullMeasure);
    }
    verify_from_k1(&k0.steinhaus(), eps)
}

/// As [`verify_one_d_containment`], treating `k1` as the first iterate.
pub fn verify_from_k1<T: Scalar>(k1: &IntervalUnion<T>, eps: &T) -> Result<OneDVerdict<T>> {
    if !k1.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if k1.volume() <= T::zero() {
        return Err(Error::NullMeasure);
    }
    let d = k1.diameter();
    let r = T::two() * k1.origin_ball_radius();
    let certificate = one_d_constants(&r, &d, eps)?;
    let n_checked = certificate.threshold() + 1;
    let half = d.half();
    let (lo, hi) = (eps.clone() - half.clone(), half.clone() - eps.clone());
    let mut k = k1.clone();
    let mut first = None;
    let mut holds = false;
    for n in 1..=n_checked {
        if n > 1 {
            k = k.steinhaus();
        }
        holds = k.contains_interval(&lo, &hi) && *k.min() >= -half.clone() && *k.max() <= half;
        match (holds, first) {
            (true, None) => first = Some(n),
            (false, _) => first = None,
            _ => {}
        }
    }
    let l1_gap = d - k.volume();
    let l1_ok = l1_gap <= T::two() * eps.clone();
    Ok(OneDVerdict { certificate, n_checked, first_containing: first, holds, l1_gap, l1_ok })
}

/// Smallest `n` with `2^n ≥ 2Dd/r` and `2^n ≥ d(d+1)`, where `r` is the
/// diameter of the largest centred ball in `K₁`. From there on
/// `½Conv(K₁) ⊆ K_{n+1} ⊆ Conv(K₁)`.
pub fn half_hull_threshold<T: Scalar>(d_big: &T, dim: usize, r: &T) -> Result<u32> {
    if *r <= T::zero() {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let target = T::two() * d_big.clone() * T::from_int(dim as i64) / r.clone();
    let dd = T::from_int((dim * (dim + 1)) as i64);
    (0..64u32)
        .find(|&n| {
            let p = T::pow2(n as i32);
            p >= target && p >= dd
        })
        .ok_or_else(|| Error::InvalidParameter("D/r is too large".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn constants(c: OneDCertificate<Rational>) -> OneDConstants<Rational> {
        match c {
            OneDCertificate::Constants(c) => c,
            _ => panic!("degenerate"),
        }
    }

    #[test]
    fn explicit_constants() {
        let c = constants(one_d_constants(&q(1, 1), &q(4, 1), &q(1, 2)).unwrap());
        assert_eq!((c.n0, c.t0.clone(), c.l0, c.threshold), (2, q(3, 4), 5, 10));
        let c = constants(one_d_constants(&q(2, 1), &q(4, 1), &q(1, 1)).unwrap());
        assert_eq!((c.n0, c.t0.clone(), c.l0, c.threshold), (1, q(1, 2), 1, 1));
        assert_eq!(
            one_d_constants(&q(4, 1), &q(4, 1), &q(1, 2)).unwrap(),
            OneDCertificate::Degenerate { d: q(4, 1) }
        );
    }

    #[test]
    fn l0_shrinks_as_eps_grows() {
        let mut last = u32::MAX;
        for k in 1..16 {
            let c = constants(one_d_constants(&q(1, 1), &q(4, 1), &q(k, 8)).unwrap());
            assert!(c.l0 <= last);
            last = c.l0;
        }
    }

    #[test]
    fn family_members() {
        let k = k1_family(&q(1, 1), &q(4, 1), &q(0, 1)).unwrap();
        let want =
            IntervalUnion::canonicalize(vec![(q(-2, 1), q(-2, 1)), (q(-1, 2), q(1, 2)), (q(2, 1), q(2, 1))]).unwrap();
        assert_eq!(k, want);
        assert_eq!(k1_family(&q(1, 1), &q(2, 1), &q(1, 2)).unwrap(), IntervalUnion::interval(q(-1, 1), q(1, 1)).unwrap());
        // δ₁ = (δ + r)/2 after one step.
        let next = k1_family(&q(1, 1), &q(5, 2), &q(1, 2)).unwrap();
        assert!(next.is_subset_of(&k.steinhaus()));
    }

    #[test]
    fn containment_from_the_example() {
        let k1 = k1_family(&q(1, 1), &q(4, 1), &q(0, 1)).unwrap();
        let v = verify_from_k1(&k1, &q(1, 2)).unwrap();
        assert_eq!(v.n_checked, 11);
        assert!(v.holds && v.l1_ok);
        assert!(v.first_containing.unwrap() <= 11);
        let sym = IntervalUnion::interval(q(-1, 1), q(1, 1)).unwrap();
        let v = verify_one_d_containment(&sym, &q(1, 2)).unwrap();
        assert_eq!(v.first_containing, Some(1));
        let null = IntervalUnion::from_points([q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(verify_one_d_containment(&null, &q(1, 2)), Err(Error::NullMeasure));
    }

    #[test]
    fn half_hull_thresholds() {
        assert_eq!(half_hull_threshold(&q(2, 1), 2, &q(1, 1)).unwrap(), 3);
        assert_eq!(half_hull_threshold(&q(4, 1), 2, &q(2, 1)).unwrap(), 3);
        assert_eq!(half_hull_threshold(&q(8, 1), 2, &q(1, 1)).unwrap(), 5);
        assert!(half_hull_threshold(&q(1, 1), 1, &q(1, 1)).is_err());
    }
}
