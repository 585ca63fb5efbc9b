//! Tube and parallel-body volumes of cell unions via distance transforms.
//!
//! Distances are taken from cell centres. Since the distance function is
//! 1-Lipschitz, a cell whose centre lies farther than `h√d/2` from the
//! level `r` is entirely inside or entirely outside the tube; the cells in
//! that band bound the error.

use crate::edt::{squared_edt, HalfLattice};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set_model::{GridSet, HALF_LATTICE_CAP};

#[derive(Clone, Debug, PartialEq)]
pub struct TubeMeasure {
    pub volume: f64,
    /// Rigorous bound on `|volume - true volume|` for the cell union.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContentEstimate {
    /// `x_k = 2^{-k}`, decreasing, down to `4h`.
    pub radii: Vec<f64>,
    pub tube_volumes: Vec<f64>,
    pub tube_errors: Vec<f64>,
    /// `tube(x_k) / (2 x_k)`.
    pub ratios: Vec<f64>,
    /// Richardson extrapolation `2 ρ(x₂) - ρ(x₁)` of the two largest radii,
    /// exact when the tube volume is quadratic in `x`.
    pub extrapolated: f64,
}

enum Feature {
    Boundary,
    Set,
}

struct Field {
    lattice: HalfLattice,
    dist2: Vec<f64>,
    lo: [i64; 3],
    hi: [i64; 3],
    dim: usize,
    h: f64,
}

impl Field {
    fn new<T: Scalar>(u: &GridSet<T>, reach: f64, feature: Feature) -> Result<Self> {
        let d = u.dim();
        let h = u.h().lossy_f64();
        let pad = (reach / h).ceil() as i64 + 2;
        let (mut lo, mut hi) = u.cells().bbox().ok_or(Error::EmptySet)?;
        for i in 0..d {
            lo[i] -= pad;
            hi[i] += pad;
        }
        let lattice = HalfLattice::covering(d, lo, hi, 0);
        if lattice.len() > HALF_LATTICE_CAP {
            return Err(Error::BudgetExceeded {
                needed: lattice.len() as u128,
                cap: HALF_LATTICE_CAP as u128,
                suggested_h: Some(2.0 * h),
            });
        }
        let mut marks = vec![false; lattice.len()];
        lattice.mark_cells(u.cells(), &mut marks);
        if let Feature::Boundary = feature {
            let mut outside = vec![false; lattice.len()];
            lattice.mark_cells(&lattice.absent_cells(u.cells()), &mut outside);
            marks.iter_mut().zip(&outside).for_each(|(m, o)| *m &= *o);
        }
        let dist2 = squared_edt(lattice.dims, &marks);
        Ok(Field { lattice, dist2, lo, hi, dim: d, h })
    }

    /// Cells whose centre is within `r`, and cells in the uncertainty band.
    fn measure(&self, r: f64) -> TubeMeasure {
        let half = self.h / 2.0;
        let band = self.h * (self.dim as f64).sqrt() / 2.0;
        let (inside, uncertain) = (r / half, band / half);
        let (mut count, mut unsure) = (0u64, 0u64);
        let ranges: Vec<(i64, i64)> =
            (0..3).map(|i| if i < self.dim { (self.lo[i], self.hi[i]) } else { (0, 0) }).collect();
        for z in ranges[2].0..=ranges[2].1 {
            for y in ranges[1].0..=ranges[1].1 {
                for x in ranges[0].0..=ranges[0].1 {
                    let c = [2 * x + 1, if self.dim >= 2 { 2 * y + 1 } else { 0 }, if self.dim >= 3 { 2 * z + 1 } else { 0 }];
                    let dist = match self.lattice.index(&c) {
                        Some(i) => self.dist2[i].sqrt(),
                        None => continue,
                    };
                    if dist <= inside {
                        count += 1;
                    }
                    if (dist - inside).abs() < uncertain {
                        unsure += 1;
                    }
                }
            }
        }
        let cell = self.h.powi(self.dim as i32);
        TubeMeasure { volume: count as f64 * cell, error: unsure as f64 * cell }
    }
}

/// `|{y : d(y, ∂U) ≤ r}|` for the cell union `U`.
pub fn tube_volume<T: Scalar>(u: &GridSet<T>, r: &T) -> Result<TubeMeasure> {
    let (rf, h) = (r.lossy_f64(), u.h().lossy_f64());
    if rf < h {
        return Err(Error::ResolutionTooCoarse { r: rf, h });
    }
    Ok(Field::new(u, rf, Feature::Boundary)?.measure(rf))
}

/// `|{y : d(y, U) ≤ r}|`, the volume of the outer parallel body.
pub fn parallel_volume<T: Scalar>(u: &GridSet<T>, r: &T) -> Result<TubeMeasure> {
    let (rf, h) = (r.lossy_f64(), u.h().lossy_f64());
    if rf < h {
        return Err(Error::ResolutionTooCoarse { r: rf, h });
    }
    Ok(Field::new(u, rf, Feature::Set)?.measure(rf))
}

/// Ratios `tube(x_k)/(2 x_k)` for `x_k = 2^{-k}`, `k ≥ 1`, down to `4h`.
pub fn minkowski_content_estimate<T: Scalar>(u: &GridSet<T>) -> Result<ContentEstimate> {
    if u.dim() < 2 {
        return Err(Error::UnsupportedDimension(u.dim()));
    }
    let h = u.h().lossy_f64();
    let radii: Vec<f64> = (1..64).map(|k| 0.5f64.powi(k)).take_while(|&x| x >= 4.0 * h).collect();
    if radii.len() < 2 {
        return Err(Error::ResolutionTooCoarse { r: 0.25, h: 4.0 * h });
    }
    let field = Field::new(u, radii[0], Feature::Boundary)?;
    let tubes: Vec<TubeMeasure> = radii.iter().map(|&x| field.measure(x)).collect();
    let ratios: Vec<f64> = tubes.iter().zip(&radii).map(|(t, x)| t.volume / (2.0 * x)).collect();
    Ok(ContentEstimate {
        extrapolated: 2.0 * ratios[1] - ratios[0],
        tube_volumes: tubes.iter().map(|t| t.volume).collect(),
        tube_errors: tubes.iter().map(|t| t.error).collect(),
        radii,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn unit_square(k: i64) -> GridSet<Rational> {
        GridSet::block(2, q(1, k), [0, 0, 0], [k - 1, k - 1, 0]).unwrap()
    }

    #[test]
    fn square_tube_and_parallel_body() {
        let u = unit_square(64);
        // Inner side 4r - 4r², outer side 4r + πr².
        let r = 0.25;
        let want = 8.0 * r + (std::f64::consts::PI - 4.0) * r * r;
        let t = tube_volume(&u, &q(1, 4)).unwrap();
        assert!((t.volume - want).abs() <= t.error, "{t:?} vs {want}");
        assert!((t.volume - want).abs() / want < 0.02);
        let p = parallel_volume(&u, &q(1, 4)).unwrap();
        let steiner = 1.0 + 4.0 * r + std::f64::consts::PI * r * r;
        assert!((p.volume - steiner).abs() <= p.error);
        assert!(matches!(tube_volume(&u, &q(1, 128)), Err(Error::ResolutionTooCoarse { .. })));
    }

    #[test]
    fn square_content_extrapolates_to_the_perimeter() {
        let c = minkowski_content_estimate(&unit_square(64)).unwrap();
        assert!(c.tube_volumes.windows(2).all(|w| w[1] <= w[0]));
        assert!((c.extrapolated - 4.0).abs() < 0.02, "{c:?}");
    }
}
