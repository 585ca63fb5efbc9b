//! Steiner formulas for dilated convex bodies, checked against grid
//! measurements and an explicit offset-polygon computation.

use std::f64::consts::PI;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::minkowski::parallel_volume;
use crate::scalar::Scalar;
use crate::set_model::{rasterize, ConvexPolytope, GridSet, RasterMode};

#[derive(Clone, Debug, PartialEq)]
pub struct Steiner2dReport {
    pub r: f64,
    pub h: f64,
    pub predicted_area: f64,
    pub predicted_perimeter: f64,
    /// Area of the grid dilation of the outer rasterization.
    pub measured_area: f64,
    /// Error bound of the grid dilation for the rasterized body.
    pub measured_error: f64,
    pub relative_error: f64,
    /// Offset polygon: straight edges pushed out by `r` plus vertex arcs.
    pub offset_area: f64,
    pub offset_perimeter: f64,
}

impl Steiner2dReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": crate::set_model::SCHEMA_VERSION,
            "kind": "steiner_2d",
            "r": self.r,
            "h": self.h,
            "predicted_area": self.predicted_area,
            "predicted_perimeter": self.predicted_perimeter,
            "measured_area": self.measured_area,
            "measured_error": self.measured_error,
            "relative_error": self.relative_error,
            "offset_area": self.offset_area,
            "offset_perimeter": self.offset_perimeter,
        })
    }
}

/// `|B_r| = |B| + P r + π r²` and `P(B_r) = P + 2π r` for a convex polygon.
pub fn steiner_2d_check<T: Scalar>(b: &ConvexPolytope<T>, r: &T, h: &T) -> Result<Steiner2dReport> {
    if b.dim() != 2 || !b.is_full_dimensional() {
        return Err(Error::Degenerate("expected a convex polygon with positive area".into()));
    }
    if *r <= T::zero() {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let rf = r.lossy_f64();
    let area = b.volume().lossy_f64();
    let perimeter = b.boundary_measure();
    let grid = rasterize(b, h, RasterMode::Outer)?;
    let measured = parallel_volume(&grid, r)?;
    let predicted_area = area + perimeter * rf + PI * rf * rf;
    let (offset_area, offset_perimeter) = offset_polygon(b, rf);
    Ok(Steiner2dReport {
        r: rf,
        h: h.lossy_f64(),
        predicted_area,
        predicted_perimeter: perimeter + 2.0 * PI * rf,
        measured_area: measured.volume,
        measured_error: measured.error,
        relative_error: (measured.volume - predicted_area).abs() / predicted_area,
        offset_area,
        offset_perimeter,
    })
}

/// Area and perimeter of `B ⊕ B(0, r)` assembled from its pieces: the
/// polygon, one rectangle per edge and one circular sector per vertex with
/// the turning angle at that vertex.
fn offset_polygon<T: Scalar>(b: &ConvexPolytope<T>, r: f64) -> (f64, f64) {
    let v: Vec<(f64, f64)> = b.vertices().iter().map(|p| (p.0[0].lossy_f64(), p.0[1].lossy_f64())).collect();
    let m = v.len();
    let mut area = 0.0;
    let mut perimeter = 0.0;
    for i in 0..m {
        let (a, c) = (v[i], v[(i + 1) % m]);
        area += a.0 * c.1 - c.0 * a.1;
        let len = ((c.0 - a.0).powi(2) + (c.1 - a.1).powi(2)).sqrt();
        area += 2.0 * len * r;
        perimeter += len;
        // Turning angle between this edge and the next.
        let n = v[(i + 2) % m];
        let (e1, e2) = ((c.0 - a.0, c.1 - a.1), (n.0 - c.0, n.1 - c.1));
        let turn = (e1.0 * e2.1 - e1.1 * e2.0).atan2(e1.0 * e2.0 + e1.1 * e2.1).abs();
        area += turn * r * r;
        perimeter += turn * r;
    }
    (area / 2.0, perimeter)
}

/// Shapes with classical Steiner coefficients in space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shape3 {
    Box { a: f64, b: f64, c: f64 },
    Ball { r: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Steiner3d {
    pub volume: f64,
    pub area: f64,
}

/// Volume and surface area of the `r`-dilation.
pub fn steiner_3d_closed_forms(shape: Shape3, r: f64) -> Result<Steiner3d> {
    if r < 0.0 {
        return Err(Error::InvalidParameter("r must be nonnegative".into()));
    }
    Ok(match shape {
        Shape3::Box { a, b, c } => {
            let (v, s, m) = (a * b * c, 2.0 * (a * b + b * c + c * a), a + b + c);
            Steiner3d {
                volume: v + s * r + PI * m * r * r + 4.0 / 3.0 * PI * r.powi(3),
                area: s + 2.0 * PI * m * r + 4.0 * PI * r * r,
            }
        }
        Shape3::Ball { r: big } => {
            let rr = big + r;
            Steiner3d { volume: 4.0 / 3.0 * PI * rr.powi(3), area: 4.0 * PI * rr * rr }
        }
    })
}

/// Grid measurement of the dilated volume of a box with sides that are
/// multiples of `h`.
pub fn measure_box_dilation<T: Scalar>(sides: [i64; 3], h: &T, r: &T) -> Result<(f64, f64)> {
    let g = GridSet::block(3, h.clone(), [0, 0, 0], [sides[0] - 1, sides[1] - 1, sides[2] - 1])?;
    let m = parallel_volume(&g, r)?;
    Ok((m.volume, m.error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::scalar::{q, Rational};

    #[test]
    fn square_dilation() {
        let sq = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        let rep = steiner_2d_check(&sq, &q(1, 2), &q(1, 64)).unwrap();
        assert!((rep.predicted_area - (3.0 + PI / 4.0)).abs() < 1e-12);
        assert!(rep.relative_error < 0.01, "{rep:?}");
        assert!((rep.offset_area - rep.predicted_area).abs() < 1e-12);
        assert!((rep.offset_perimeter - rep.predicted_perimeter).abs() < 1e-12);
    }

    #[test]
    fn right_triangle_offset() {
        let t = ConvexPolytope::<Rational>::hull(&[Point::from_ints(&[0, 0]), Point::from_ints(&[3, 0]), Point::from_ints(&[0, 4])])
            .unwrap();
        let (a, _) = offset_polygon(&t, 0.5);
        assert!((a - (6.0 + 6.0 + PI / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn box_coefficient_matches_a_grid_measurement() {
        let s = steiner_3d_closed_forms(Shape3::Box { a: 1.0, b: 1.0, c: 1.0 }, 1.0).unwrap();
        assert!((s.volume - (7.0 + 3.0 * PI + 4.0 * PI / 3.0)).abs() < 1e-12);
        let r = 0.25;
        let want = steiner_3d_closed_forms(Shape3::Box { a: 1.0, b: 1.0, c: 1.0 }, r).unwrap().volume;
        let (got, err) = measure_box_dilation([16, 16, 16], &q(1, 16), &q(1, 4)).unwrap();
        assert!((got - want).abs() <= err, "{got} vs {want} ± {err}");
        assert!((got - want).abs() / want < 0.03);
        let b = steiner_3d_closed_forms(Shape3::Ball { r: 1.0 }, 1.0).unwrap();
        assert!((b.volume - 32.0 * PI / 3.0).abs() < 1e-12);
    }
}
