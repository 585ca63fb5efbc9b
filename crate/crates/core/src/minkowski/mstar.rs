//! Lower and upper bounds for `M*(U) = sup_{x≠0} M_U(x)/|x|` on grid sets.
//!
//! Along one axis, each line parallel to `e_i` meets `U` in finitely many
//! segments and `|A Δ (A - t)| ≤ t · #endpoints` on that line, so
//! `M_U(t e_i) ≤ F_i t` with `F_i` the total measure of exposed faces normal
//! to axis `i`. Subadditivity of `M_U` and Cauchy–Schwarz then give
//! `M_U(x) ≤ Σ F_i |x_i| ≤ |F| |x|`, i.e. `M*(U) ≤ |F|`.

use serde_json::{json, Value};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::set_model::runs::Cell;
use crate::set_model::{GridSet, Length};

#[derive(Clone, Debug, PartialEq)]
pub struct MstarPlan {
    /// Largest shift length scanned, in cells; defaults to the diameter.
    pub radius_cells: Option<i64>,
    /// Cap on the number of shifts; the scan radius shrinks to fit.
    pub max_shifts: u64,
}

impl Default for MstarPlan {
    fn default() -> Self {
        MstarPlan { radius_cells: None, max_shifts: 400_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MstarReport<T> {
    /// `max M_U(z)/|z|` over the scanned lattice shifts.
    pub lower_estimate: Length<T>,
    /// `|F|` with `F_i` the exposed face measure normal to axis `i`.
    pub upper_bound: Length<T>,
    /// Scanned shift (in cells) attaining the lower estimate.
    pub argmax_shift: Cell,
    /// `max_i F_i`.
    pub lipschitz_l: T,
    pub face_measures: Vec<T>,
    pub shifts_scanned: u64,
    pub sample_plan: String,
}

impl<T: Scalar> MstarReport<T> {
    pub fn to_json(&self) -> Value {
        let d = self.face_measures.len();
        json!({
            "schema_version": crate::set_model::SCHEMA_VERSION,
            "kind": "mstar_report",
            "lower_estimate": self.lower_estimate.value(),
            "upper_bound": self.upper_bound.value(),
            "lower_squared": self.lower_estimate.squared.encode(),
            "upper_squared": self.upper_bound.squared.encode(),
            "argmax_shift": &self.argmax_shift[..d],
            "lipschitz_l": self.lipschitz_l.encode(),
            "face_measures": self.face_measures.iter().map(Scalar::encode).collect::<Vec<_>>(),
            "shifts_scanned": self.shifts_scanned,
            "sample_plan": self.sample_plan,
        })
    }
}

pub fn mstar_estimate<T: Scalar>(u: &GridSet<T>, plan: &MstarPlan) -> Result<MstarReport<T>> {
    let d = u.dim();
    let h = u.h().clone();
    let faces = u.face_measures();
    let upper = faces.iter().fold(T::zero(), |acc, f| acc + f.clone() * f.clone());
    let lipschitz = faces.iter().cloned().fold(T::zero(), T::max_of);

    let diam_cells = (u.diameter().value() / h.lossy_f64()).ceil() as i64 + 1;
    let mut radius = plan.radius_cells.unwrap_or(diam_cells).max(1);
    while radius > 1 && half_ball_count(d, radius) > plan.max_shifts {
        radius = radius * 9 / 10;
    }
    let n = u.cell_count() as u128;
    // Maximise (N - overlap)² / |z|² exactly by cross-multiplication.
    let mut best: (u128, u128, Cell) = (0, 1, [0; 3]);
    let mut scanned = 0u64;
    let mut consider = |z: Cell| {
        let norm2 = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]) as u128;
        let miss = n - u.cells().overlap_count(u.cells(), &z) as u128;
        let num = miss * miss;
        if num * best.1 > best.0 * norm2 {
            best = (num, norm2, z);
        }
        scanned += 1;
    };
    let r2 = radius * radius;
    let (ry, rz) = (if d >= 2 { radius } else { 0 }, if d >= 3 { radius } else { 0 });
    for z in 0..=rz {
        for y in -ry..=ry {
            if z == 0 && y < 0 {
                continue;
            }
            for x in -radius..=radius {
                if (z, y) == (0, 0) && x <= 0 {
                    continue;
                }
                if x * x + y * y + z * z <= r2 {
                    consider([x, y, z]);
                }
            }
        }
    }
    // Axis rays out to the diameter.
    if radius < diam_cells {
        for axis in 0..d {
            for t in radius + 1..=diam_cells {
                let mut z = [0; 3];
                z[axis] = t;
                consider(z);
            }
        }
    }
    // M_U(z)/|z| = 2 (N - overlap) h^d / (h |z|).
    let hd1 = (1..d).fold(T::one(), |acc, _| acc * h.clone());
    let lower = T::from_int(4) * T::from_int(best.0 as i64) * hd1.clone() * hd1 / T::from_int(best.1 as i64);
    let sample_plan = if radius < diam_cells {
        format!(
            "all lattice shifts with |z| <= {radius} cells in a half space, plus axis rays to {diam_cells} cells ({scanned} shifts)"
        )
    } else {
        format!("all lattice shifts with |z| <= {radius} cells in a half space ({scanned} shifts)")
    };
    Ok(MstarReport {
        lower_estimate: Length::from_squared(lower),
        upper_bound: Length::from_squared(upper),
        argmax_shift: best.2,
        lipschitz_l: lipschitz,
        face_measures: faces,
        shifts_scanned: scanned,
        sample_plan,
    })
}

/// Rough count of lattice points in a half ball of radius `r`.
fn half_ball_count(d: usize, r: i64) -> u64 {
    let r = r as f64 + 1.0;
    (match d {
        1 => r,
        2 => std::f64::consts::PI * r * r / 2.0,
        _ => 2.0 * std::f64::consts::PI * r * r * r / 3.0,
    }) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn single_cell_in_one_dimension() {
        let u = GridSet::block(1, q(1, 1), [0, 0, 0], [0, 0, 0]).unwrap();
        let r = mstar_estimate(&u, &MstarPlan::default()).unwrap();
        assert_eq!(r.lower_estimate.squared, q(4, 1));
        assert_eq!(r.upper_bound.squared, q(4, 1));
    }

    #[test]
    fn rectangle_brackets_the_closed_form() {
        let u = GridSet::block(2, q(1, 32), [0, 0, 0], [63, 31, 0]).unwrap();
        let r = mstar_estimate(&u, &MstarPlan::default()).unwrap();
        let truth = 20f64.sqrt();
        assert!(r.lower_estimate.value() <= truth && truth <= r.upper_bound.value());
        assert_eq!(r.upper_bound.squared, q(20, 1));
        assert!(r.lower_estimate.value() > 0.97 * truth);
        assert_eq!(r.lipschitz_l, q(4, 1));
    }

    #[test]
    fn translation_invariant() {
        let u = GridSet::<Rational>::from_cells(2, q(1, 4), [[0, 0, 0], [1, 0, 0], [1, 1, 0], [3, 2, 0]]).unwrap();
        let a = mstar_estimate(&u, &MstarPlan::default()).unwrap();
        let b = mstar_estimate(&u.translate_cells(&[5, -3, 0]), &MstarPlan::default()).unwrap();
        assert_eq!(a, b);
    }
}
