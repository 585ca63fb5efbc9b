//! Planar shape functionals and the Kakeya radius of convex polygons.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set_model::ConvexPolytope;

#[derive(Clone, Debug, PartialEq)]
pub struct ShapeFunctionals {
    pub area: f64,
    pub perimeter: f64,
    pub width: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub diameter: f64,
    /// `(r_in / R, D / (2R))`.
    pub bs_point: (f64, f64),
    /// Zero area.
    pub degenerate: bool,
}

impl ShapeFunctionals {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": crate::set_model::SCHEMA_VERSION,
            "kind": "shape_functionals",
            "area": self.area,
            "perimeter": self.perimeter,
            "width": self.width,
            "inradius": self.inradius,
            "circumradius": self.circumradius,
            "diameter": self.diameter,
            "bs_x": self.bs_point.0,
            "bs_y": self.bs_point.1,
            "degenerate": self.degenerate,
        })
    }
}

fn planar_vertices<T: Scalar>(k: &ConvexPolytope<T>) -> Result<Vec<(f64, f64)>> {
    if k.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: k.dim() });
    }
    Ok(k.vertices().iter().map(|p| (p.0[0].lossy_f64(), p.0[1].lossy_f64())).collect())
}

pub fn shape_functionals<T: Scalar>(k: &ConvexPolytope<T>) -> Result<ShapeFunctionals> {
    let v = planar_vertices(k)?;
    let degenerate = !k.is_full_dimensional();
    let diameter = k.diameter().value();
    let circumradius = min_enclosing_radius(&v);
    let (width, inradius) = if degenerate { (0.0, 0.0) } else { (min_width(&v), inradius(&v)) };
    let bs_point = if circumradius > 0.0 {
        (inradius / circumradius, diameter / (2.0 * circumradius))
    } else {
        (0.0, 0.0)
    };
    Ok(ShapeFunctionals {
        area: k.volume().lossy_f64(),
        perimeter: k.boundary_measure(),
        width,
        inradius,
        circumradius,
        diameter,
        bs_point,
        degenerate,
    })
}

/// Width is minimised at an edge normal of a convex polygon.
fn min_width(v: &[(f64, f64)]) -> f64 {
    let m = v.len();
    (0..m)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % m]);
            let (nx, ny) = (b.1 - a.1, a.0 - b.0);
            let len = nx.hypot(ny);
            let proj: Vec<f64> = v.iter().map(|p| (p.0 * nx + p.1 * ny) / len).collect();
            proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - proj.iter().cloned().fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Largest inscribed circle: its centre is equidistant from three edge
/// lines, so every triple is tried and the feasible maximum kept.
fn inradius(v: &[(f64, f64)]) -> f64 {
    let m = v.len();
    // Edge lines n·x ≤ c with |n| = 1 (counter-clockwise order).
    let lines: Vec<(f64, f64, f64)> = (0..m)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % m]);
            let (nx, ny) = (b.1 - a.1, a.0 - b.0);
            let len = nx.hypot(ny);
            (nx / len, ny / len, (nx * a.0 + ny * a.1) / len)
        })
        .collect();
    let slack = |x: f64, y: f64| lines.iter().map(|l| l.2 - l.0 * x - l.1 * y).fold(f64::INFINITY, f64::min);
    let mut best: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                // n·x + t = c for the three lines.
                let rows = [lines[i], lines[j], lines[k]];
                let det = |c: [[f64; 3]; 3]| {
                    c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
                        + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0])
                };
                let a = rows.map(|l| [l.0, l.1, 1.0]);
                let dd = det(a);
                if dd.abs() < 1e-14 {
                    continue;
                }
                let col = |idx: usize| {
                    let mut b = a;
                    for (r, l) in b.iter_mut().zip(&rows) {
                        r[idx] = l.2;
                    }
                    det(b) / dd
                };
                let (x, y) = (col(0), col(1));
                let t = slack(x, y);
                best = best.max(t);
            }
        }
    }
    best
}

/// Minimal enclosing circle radius (incremental construction).
fn min_enclosing_radius(v: &[(f64, f64)]) -> f64 {
    type C = ((f64, f64), f64);
    let inside = |c: &C, p: (f64, f64)| ((p.0 - c.0 .0).hypot(p.1 - c.0 .1)) <= c.1 * (1.0 + 1e-12) + 1e-12;
    let two = |a: (f64, f64), b: (f64, f64)| -> C {
        (((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0), (a.0 - b.0).hypot(a.1 - b.1) / 2.0)
    };
    let three = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| -> C {
        let (bx, by, cx, cy) = (b.0 - a.0, b.1 - a.1, c.0 - a.0, c.1 - a.1);
        let d = 2.0 * (bx * cy - by * cx);
        if d.abs() < 1e-300 {
            // Collinear: the widest pair.
            let cands = [two(a, b), two(b, c), two(a, c)];
            return cands.into_iter().fold(((0.0, 0.0), -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        }
        let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
        let ux = (cy * b2 - by * c2) / d;
        let uy = (bx * c2 - cx * b2) / d;
        ((a.0 + ux, a.1 + uy), ux.hypot(uy))
    };
    if v.is_empty() {
        return 0.0;
    }
    let mut c: C = (v[0], 0.0);
    for i in 1..v.len() {
        if inside(&c, v[i]) {
            continue;
        }
        c = (v[i], 0.0);
        for j in 0..i {
            if inside(&c, v[j]) {
                continue;
            }
            c = two(v[i], v[j]);
            for k in 0..j {
                if !inside(&c, v[k]) {
                    c = three(v[i], v[j], v[k]);
                }
            }
        }
    }
    c.1
}

#[derive(Clone, Debug, PartialEq)]
pub struct KakeyaReport {
    /// `min_u` of the longest chord of `K` parallel to `u`, over the
    /// sampled directions (an upper estimate of the true minimum).
    pub sampled_min_chord: f64,
    /// `2 ρ(½(K - K))`, the diameter of the largest centred ball in the
    /// difference body, which equals the minimal width.
    pub difference_body_value: f64,
    pub relative_gap: f64,
    pub tolerance: f64,
    pub agree: bool,
    /// Largest `r` for which `K` is `r`-Kakeya.
    pub kakeya_r: f64,
    pub directions: usize,
}

impl KakeyaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": crate::set_model::SCHEMA_VERSION,
            "kind": "kakeya",
            "sampled_min_chord": self.sampled_min_chord,
            "difference_body_value": self.difference_body_value,
            "relative_gap": self.relative_gap,
            "tolerance": self.tolerance,
            "agree": self.agree,
            "kakeya_r": self.kakeya_r,
            "directions": self.directions,
        })
    }
}

/// `K` contains a segment of length `r` in every direction iff `r(K) ≥ r`:
/// the longest chord parallel to `u` is the radial function of `K - K`
/// at `u`, whose minimum is the inradius of `K - K`.
pub fn kakeya_equivalence_check<T: Scalar>(
    k: &ConvexPolytope<T>,
    directions: &[Vec<f64>],
    tolerance: f64,
) -> Result<KakeyaReport> {
    planar_vertices(k)?;
    let body = k.steinhaus();
    let exact = 2.0 * body.origin_ball_radius().value();
    let diff = k.minkowski_sum(&k.neg());
    let sampled = directions
        .iter()
        .map(|u| chord(&diff, u))
        .fold(f64::INFINITY, f64::min);
    let relative_gap = if exact > 0.0 { (sampled - exact).abs() / exact } else { sampled.abs() };
    Ok(KakeyaReport {
        sampled_min_chord: sampled,
        difference_body_value: exact,
        relative_gap,
        tolerance,
        agree: relative_gap <= tolerance,
        kakeya_r: exact,
        directions: directions.len(),
    })
}

/// Radial function of the difference body `K - K` along `u`.
fn chord<T: Scalar>(diff: &ConvexPolytope<T>, u: &[f64]) -> f64 {
    if !diff.is_full_dimensional() {
        // A segment through the origin: nonzero only along its direction.
        let v = diff.vertices();
        if v.len() < 2 {
            return 0.0;
        }
        let (dx, dy) = (v[1].0[0].lossy_f64() - v[0].0[0].lossy_f64(), v[1].0[1].lossy_f64() - v[0].0[1].lossy_f64());
        let len = dx.hypot(dy);
        return if (dx * u[1] - dy * u[0]).abs() <= 1e-12 * len { len / 2.0 } else { 0.0 };
    }
    diff.halfspaces()
        .iter()
        .filter_map(|(n, c)| {
            let nu = n.0[0].lossy_f64() * u[0] + n.0[1].lossy_f64() * u[1];
            (nu > 0.0).then(|| c.lossy_f64() / nu)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::direction_plan;
    use crate::geom::Point;
    use crate::scalar::{q, Rational};

    fn equilateral(side: f64) -> ConvexPolytope<f64> {
        let h = side * 3f64.sqrt() / 2.0;
        ConvexPolytope::hull(&[Point(vec![0.0, 0.0]), Point(vec![side, 0.0]), Point(vec![side / 2.0, h])]).unwrap()
    }

    #[test]
    fn equilateral_triangle() {
        let f = shape_functionals(&equilateral(1.0)).unwrap();
        assert!((f.bs_point.0 - 0.5).abs() < 1e-9);
        assert!((f.bs_point.1 - 3f64.sqrt() / 2.0).abs() < 1e-9);
        assert!((f.width - 3f64.sqrt() / 2.0).abs() < 1e-9);
        let unit_height = equilateral(2.0 / 3f64.sqrt());
        let g = shape_functionals(&unit_height).unwrap();
        assert!((g.area.sqrt() * 3f64.powf(0.25) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_polygon_is_nearly_a_disk() {
        let pts: Vec<Point<f64>> = (0..64)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 64.0;
                Point(vec![t.cos(), t.sin()])
            })
            .collect();
        let f = shape_functionals(&ConvexPolytope::hull(&pts).unwrap()).unwrap();
        assert!(f.bs_point.0 > 0.99 && (f.bs_point.1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kakeya_radius_of_square_segment_and_triangle() {
        let dirs = direction_plan(2, Some(720)).unwrap();
        let sq = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        let r = kakeya_equivalence_check(&sq, &dirs, 1e-3).unwrap();
        assert!(r.agree && (r.kakeya_r - 1.0).abs() < 1e-12);
        let seg = ConvexPolytope::<Rational>::hull(&[Point::from_ints(&[0, 0]), Point::from_ints(&[2, 1])]).unwrap();
        assert_eq!(kakeya_equivalence_check(&seg, &dirs, 1e-3).unwrap().kakeya_r, 0.0);
        let t = kakeya_equivalence_check(&equilateral(1.0), &dirs, 1e-3).unwrap();
        assert!(t.agree && (t.kakeya_r - 3f64.sqrt() / 2.0).abs() < 1e-9);
    }
}
