//! Lower bounds on the Steinhaus radius `r(U)` (largest centred ball in
//! `U - U`) and the brute-force oracle they are checked against.

use serde_json::{json, Value};

use crate::convex::{origin_ball_radius, RadiusBracket};
use crate::edt::squared_edt;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set_model::runs::{Cell, RunSet};
use crate::set_model::{CompactSet, GridSet, Length};

/// A certified lower bound on `r(U)` (radius convention) next to the
/// brute-force bracket for the same cell union.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub bound: Length<T>,
    pub truth: RadiusBracket<T>,
    /// `truth.lower / bound`.
    pub slack: f64,
    /// Certified upper bracket of `M*` for the subset that gave the bound.
    pub mstar_upper: Length<T>,
    /// Which subset produced the bound (`"U"` for the set itself).
    pub subset: String,
}

impl<T: Scalar> BoundReport<T> {
    pub fn is_sound(&self) -> bool {
        self.bound.squared <= self.truth.upper.squared
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": crate::set_model::SCHEMA_VERSION,
            "kind": "bound_report",
            "convention": "radius",
            "bound": self.bound.value(),
            "truth_lower": self.truth.lower.value(),
            "truth_upper": self.truth.upper.value(),
            "slack": self.slack,
            "mstar_upper": self.mstar_upper.value(),
            "subset": self.subset,
        })
    }
}

/// Largest radius of a closed centred ball in `U - U`, computed on the
/// exact difference set of the cells. For sandwiches the bracket runs from
/// the inner to the outer union.
pub fn steinhaus_radius_bruteforce<T: Scalar>(u: &CompactSet<T>) -> Result<RadiusBracket<T>> {
    match u {
        CompactSet::Grid(g) => origin_ball_radius(&CompactSet::Grid(g.difference_set())),
        CompactSet::Sandwich(s) => {
            let upper = origin_ball_radius(&CompactSet::Grid(s.outer().difference_set()))?.upper;
            let lower = if s.inner().is_empty() {
                Length::zero()
            } else {
                origin_ball_radius(&CompactSet::Grid(s.inner().difference_set()))?.lower
            };
            Ok(RadiusBracket { lower, upper })
        }
        _ => Err(Error::Unsupported(format!("brute-force radius of a {} set", u.kind()))),
    }
}

/// `|S| / M*_upper(S)` with the certified face-measure bracket.
fn quotient<T: Scalar>(s: &GridSet<T>) -> (Length<T>, Length<T>) {
    let upper = mstar_upper(s);
    let v = s.volume();
    (Length::from_squared(v.clone() * v / upper.squared.clone()), upper)
}

fn mstar_upper<T: Scalar>(s: &GridSet<T>) -> Length<T> {
    Length::from_squared(s.face_measures().into_iter().fold(T::zero(), |acc, f| acc + f.clone() * f))
}

/// `r(U) ≥ |U| / M*(U)`.
pub fn theorem1_bound<T: Scalar>(u: &GridSet<T>) -> Result<BoundReport<T>> {
    if u.is_empty() {
        return Err(Error::NullMeasure);
    }
    let truth = steinhaus_radius_bruteforce(&CompactSet::Grid(u.clone()))?;
    let (bound, mstar_upper) = quotient(u);
    Ok(report(bound, truth, mstar_upper, "U".into()))
}

fn report<T: Scalar>(bound: Length<T>, truth: RadiusBracket<T>, mstar_upper: Length<T>, subset: String) -> BoundReport<T> {
    let slack = truth.lower.value() / bound.value();
    BoundReport { bound, truth, slack, mstar_upper, subset }
}

/// Subsets scanned by [`theorem2_bound`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetFamily {
    pub include_self: bool,
    /// Erosions by balls of radius `k h`, `k = 1..=erosions`.
    pub erosions: u32,
    /// The largest axis-aligned box of cells (planar sets only).
    pub boxes: bool,
}

impl Default for SubsetFamily {
    fn default() -> Self {
        SubsetFamily { include_self: true, erosions: 8, boxes: true }
    }
}

/// `r(U) ≥ sup_S |S| / M*(S)` over the subsets of `family`.
pub fn theorem2_bound<T: Scalar>(u: &GridSet<T>, family: &SubsetFamily) -> Result<BoundReport<T>> {
    if u.is_empty() {
        return Err(Error::NullMeasure);
    }
    let mut candidates: Vec<(String, GridSet<T>)> = Vec::new();
    if family.include_self {
        candidates.push(("U".into(), u.clone()));
    }
    if family.erosions > 0 {
        let depth = erosion_depth(u.cells())?;
        for k in 1..=family.erosions as i64 {
            let cells = RunSet::from_cells(u.dim(), u.cells().cells().filter(|c| depth(c) > k * k));
            if cells.is_empty() {
                break;
            }
            candidates.push((format!("erosion k={k}"), GridSet::new(u.h().clone(), cells)?));
        }
    }
    if family.boxes && u.dim() == 2 {
        let (lo, hi) = largest_box(u.cells());
        candidates.push((
            format!("box [{}, {}] x [{}, {}]", lo[0], hi[0], lo[1], hi[1]),
            GridSet::block(2, u.h().clone(), lo, hi)?,
        ));
    }
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("empty subset family".into()));
    }
    let truth = steinhaus_radius_bruteforce(&CompactSet::Grid(u.clone()))?;
    let mut best: Option<(Length<T>, Length<T>, String)> = None;
    for (name, s) in candidates {
        let (b, m) = quotient(&s);
        if best.as_ref().map_or(true, |(bb, _, _)| b.squared > bb.squared) {
            best = Some((b, m, name));
        }
    }
    let (bound, mstar_upper, subset) = best.expect("nonempty family");
    Ok(report(bound, truth, mstar_upper, subset))
}

/// Squared distance (in cells, centre to centre) from each cell of the set
/// to the nearest absent cell.
fn erosion_depth(cells: &RunSet) -> Result<impl Fn(&Cell) -> i64 + '_> {
    let d = cells.dim();
    let (mut lo, mut hi) = cells.bbox().ok_or(Error::EmptySet)?;
    let mut dims = [1usize; 3];
    for i in 0..d {
        lo[i] -= 1;
        hi[i] += 1;
        dims[i] = (hi[i] - lo[i] + 1) as usize;
    }
    let len: usize = dims.iter().product();
    if len > crate::set_model::HALF_LATTICE_CAP {
        return Err(Error::BudgetExceeded { needed: len as u128, cap: crate::set_model::HALF_LATTICE_CAP as u128, suggested_h: None });
    }
    let index = move |c: &Cell| -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for i in 0..3 {
            idx += (c[i] - lo[i]) as usize * stride;
            stride *= dims[i];
        }
        idx
    };
    let mut absent = vec![true; len];
    for c in cells.cells() {
        absent[index(&c)] = false;
    }
    let dist = squared_edt(dims, &absent);
    Ok(move |c: &Cell| dist[index(c)] as i64)
}

/// Largest-area axis-aligned rectangle of cells, by the histogram sweep.
fn largest_box(cells: &RunSet) -> (Cell, Cell) {
    let (lo, hi) = cells.bbox().expect("nonempty");
    let width = (hi[0] - lo[0] + 1) as usize;
    let mut heights = vec![0i64; width];
    let mut best = (0i64, [0i64; 3], [0i64; 3]);
    for y in lo[1]..=hi[1] {
        let mut row = vec![false; width];
        for &(a, b) in cells.row(&[y, 0]) {
            for x in a..=b {
                row[(x - lo[0]) as usize] = true;
            }
        }
        for (h, &present) in heights.iter_mut().zip(&row) {
            *h = if present { *h + 1 } else { 0 };
        }
        // Largest rectangle under the histogram.
        let mut stack: Vec<usize> = Vec::new();
        for i in 0..=width {
            let cur = if i < width { heights[i] } else { 0 };
            while let Some(&top) = stack.last() {
                if heights[top] < cur {
                    break;
                }
                stack.pop();
                let left = stack.last().map_or(0, |&s| s + 1);
                let area = heights[top] * (i - left) as i64;
                if area > best.0 {
                    let x0 = lo[0] + left as i64;
                    best = (area, [x0, y - heights[top] + 1, 0], [lo[0] + i as i64 - 1, y, 0]);
                }
            }
            stack.push(i);
        }
    }
    (best.1, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn rectangle_bound_and_truth() {
        let u = GridSet::block(2, q(1, 16), [0, 0, 0], [31, 15, 0]).unwrap();
        let r = theorem1_bound(&u).unwrap();
        assert_eq!(r.bound.squared, q(1, 5));
        assert_eq!(r.truth.lower.squared, q(1, 1));
        assert!(r.is_sound());
    }

    #[test]
    fn single_cell_difference_set() {
        let u = GridSet::block(1, q(1, 1), [0, 0, 0], [0, 0, 0]).unwrap();
        let t = steinhaus_radius_bruteforce(&CompactSet::Grid(u)).unwrap();
        assert_eq!(t.lower.squared, q(1, 1));
    }

    #[test]
    fn erosion_beats_a_fringe() {
        // A square with a comb of single cells along its top edge.
        let mut cells: Vec<Cell> = Vec::new();
        for x in 0..32 {
            for y in 0..32 {
                cells.push([x, y, 0]);
            }
        }
        for x in (0..32).step_by(2) {
            for y in 32..40 {
                cells.push([x, y, 0]);
            }
        }
        let u = GridSet::<Rational>::from_cells(2, q(1, 32), cells).unwrap();
        let t1 = theorem1_bound(&u).unwrap();
        let t2 = theorem2_bound(&u, &SubsetFamily::default()).unwrap();
        assert!(t2.bound.squared > t1.bound.squared);
        assert!(t2.is_sound() && t1.is_sound());
        let only = SubsetFamily { include_self: true, erosions: 0, boxes: false };
        assert_eq!(theorem2_bound(&u, &only).unwrap().bound, t1.bound);
    }

    #[test]
    fn largest_box_of_an_l_shape() {
        let mut cells: Vec<Cell> = Vec::new();
        for x in 0..10 {
            cells.push([x, 0, 0]);
            cells.push([x, 1, 0]);
        }
        for y in 2..5 {
            cells.push([0, y, 0]);
        }
        let (lo, hi) = largest_box(&RunSet::from_cells(2, cells));
        assert_eq!((lo, hi), ([0, 0, 0], [9, 1, 0]));
    }
}
