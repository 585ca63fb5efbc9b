//! Static SVG snapshots of 1D and 2D sets.

use std::fmt::Write;

use steinhaus_core::set_model::runs::RunSet;
use steinhaus_core::{CompactSet, Scalar};

const SIZE: f64 = 480.0;
const OUTER: &str = "#c6d4e8";
const INNER: &str = "#2b5797";

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn new(lo: (f64, f64), hi: (f64, f64)) -> Self {
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        let pad = 0.05 * span;
        Frame { x0: lo.0 - pad, y1: hi.1 + pad, scale: SIZE / (span + 2.0 * pad) }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.x0) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        (self.y1 - y) * self.scale
    }
}

/// `None` for 3D sets.
pub fn render<T: Scalar>(k: &CompactSet<T>, title: &str) -> Option<String> {
    if k.dim() == 3 {
        return None;
    }
    let mut body = String::new();
    match k {
        CompactSet::Intervals(iv) => {
            let parts: Vec<(f64, f64)> = iv.components().iter().map(|(a, b)| (a.lossy_f64(), b.lossy_f64())).collect();
            let lo = parts.first()?.0;
            let hi = parts.last()?.1;
            let f = Frame::new((lo, -0.05 * (hi - lo)), (hi, 0.05 * (hi - lo)));
            let y = f.y(0.0);
            for (a, b) in parts {
                if a == b {
                    writeln!(body, r#"<circle cx="{:.3}" cy="{y:.3}" r="3" fill="{INNER}"/>"#, f.x(a)).unwrap();
                } else {
                    writeln!(
                        body,
                        r#"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="{INNER}" stroke-width="6"/>"#,
                        f.x(a),
                        f.x(b)
                    )
                    .unwrap();
                }
            }
        }
        CompactSet::Grid(g) => {
            let h = g.h().lossy_f64();
            let f = grid_frame(g.cells(), h)?;
            cells(&mut body, &f, g.cells(), h, INNER);
        }
        CompactSet::Sandwich(s) => {
            let h = s.h().lossy_f64();
            let f = grid_frame(s.outer().cells(), h)?;
            cells(&mut body, &f, s.outer().cells(), h, OUTER);
            cells(&mut body, &f, s.inner().cells(), h, INNER);
        }
        CompactSet::Points(p) => {
            let pts: Vec<(f64, f64)> = p.points().iter().map(|q| xy(&q.0)).collect();
            let f = frame_of(&pts)?;
            let r = (SIZE / (4.0 * (pts.len() as f64).sqrt())).clamp(0.6, 4.0);
            for (x, y) in pts {
                writeln!(body, r#"<circle cx="{:.3}" cy="{:.3}" r="{r:.2}" fill="{INNER}"/>"#, f.x(x), f.y(y)).unwrap();
            }
        }
        CompactSet::Polytope(p) => {
            let pts: Vec<(f64, f64)> = p.vertices().iter().map(|q| xy(&q.0)).collect();
            let f = frame_of(&pts)?;
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.3},{:.3}", f.x(x), f.y(y))).collect();
            writeln!(
                body,
                r#"<polygon points="{}" fill="{OUTER}" stroke="{INNER}" stroke-width="1.5"/>"#,
                path.join(" ")
            )
            .unwrap();
        }
    }
    let s = SIZE as u32;
    Some(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n\
         <title>{}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n",
        escape(title)
    ))
}

fn xy<T: Scalar>(c: &[T]) -> (f64, f64) {
    (c[0].lossy_f64(), c.get(1).map_or(0.0, Scalar::lossy_f64))
}

fn frame_of(pts: &[(f64, f64)]) -> Option<Frame> {
    let first = *pts.first()?;
    let (lo, hi) = pts.iter().fold((first, first), |(lo, hi), &(x, y)| {
        ((lo.0.min(x), lo.1.min(y)), (hi.0.max(x), hi.1.max(y)))
    });
    Some(Frame::new(lo, hi))
}

fn grid_frame(c: &RunSet, h: f64) -> Option<Frame> {
    let (lo, hi) = c.bbox()?;
    let top = if c.dim() == 1 { 1 } else { hi[1] + 1 };
    Some(Frame::new((lo[0] as f64 * h, lo[1] as f64 * h), ((hi[0] + 1) as f64 * h, top as f64 * h)))
}

/// One rectangle per run.
fn cells(out: &mut String, f: &Frame, c: &RunSet, h: f64, fill: &str) {
    for (key, runs) in c.rows() {
        let y = key[0] as f64 * h;
        for &(a, b) in runs {
            let (x0, x1) = (f.x(a as f64 * h), f.x((b + 1) as f64 * h));
            let (y0, y1) = (f.y(y + h), f.y(y));
            writeln!(
                out,
                r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
                x1 - x0,
                y1 - y0
            )
            .unwrap();
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use steinhaus_core::scalar::q;
    use steinhaus_core::ExactGrid;

    #[test]
    fn one_rect_per_run() {
        let g = ExactGrid::from_cells(2, q(1, 2), [[0, 0, 0], [1, 0, 0], [3, 0, 0], [0, 1, 0]]).unwrap();
        let svg = render(&CompactSet::Grid(g), "K").unwrap();
        assert_eq!(svg.matches("<rect x=").count(), 3);
    }
}
