//! Run-length encoded sets of integer index tuples in Z^d, d ≤ 3.
//!
//! Rows are keyed by the trailing coordinates `(y, z)`; each row holds
//! sorted, non-adjacent inclusive runs `[x0, x1]` along the first axis.
//! Both grid cells and exact lattice points are stored this way.

use std::collections::{BTreeMap, HashMap};

pub type Cell = [i64; 3];
pub type RowKey = [i64; 2];
pub type Run = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RunSet {
    dim: usize,
    rows: BTreeMap<RowKey, Vec<Run>>,
}

fn normalize_row(runs: &mut Vec<Run>) {
    runs.sort_unstable();
    let mut out: Vec<Run> = Vec::with_capacity(runs.len());
    for &(a, b) in runs.iter() {
        match out.last_mut() {
            Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    *runs = out;
}

fn row_len(runs: &[Run]) -> u64 {
    runs.iter().map(|&(a, b)| (b - a + 1) as u64).sum()
}

/// Number of integers covered by exactly one of two normalized run lists.
fn symmetric_difference_len(a: &[Run], b: &[Run]) -> u64 {
    row_len(a) + row_len(b) - 2 * intersection_len(a, b, 0)
}

/// `|{x : x ∈ a, x + shift ∈ b}|` for normalized run lists.
fn intersection_len(a: &[Run], b: &[Run], shift: i64) -> u64 {
    let (mut i, mut j) = (0, 0);
    let mut total = 0u64;
    while i < a.len() && j < b.len() {
        let (a0, a1) = a[i];
        let (b0, b1) = (b[j].0 - shift, b[j].1 - shift);
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        if lo <= hi {
            total += (hi - lo + 1) as u64;
        }
        if a1 < b1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    total
}

fn intersect_runs(a: &[Run], b: &[Run]) -> Vec<Run> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if lo <= hi {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

impl RunSet {
    pub fn empty(dim: usize) -> Self {
        RunSet { dim, rows: BTreeMap::new() }
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(dim: usize, cells: I) -> Self {
        let mut rows: HashMap<RowKey, Vec<Run>> = HashMap::new();
        for c in cells {
            rows.entry([c[1], c[2]]).or_default().push((c[0], c[0]));
        }
        Self::from_row_map(dim, rows)
    }

    /// Builds from possibly unsorted, overlapping runs per row.
    pub fn from_row_map(dim: usize, rows: HashMap<RowKey, Vec<Run>>) -> Self {
        let rows = rows
            .into_iter()
            .filter_map(|(k, mut runs)| {
                normalize_row(&mut runs);
                (!runs.is_empty()).then_some((k, runs))
            })
            .collect();
        RunSet { dim, rows }
    }

    pub fn from_runs<I: IntoIterator<Item = (RowKey, Run)>>(dim: usize, runs: I) -> Self {
        let mut rows: HashMap<RowKey, Vec<Run>> = HashMap::new();
        for (k, r) in runs {
            if r.0 <= r.1 {
                rows.entry(k).or_default().push(r);
            }
        }
        Self::from_row_map(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> u64 {
        self.rows.values().map(|r| row_len(r)).sum()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&RowKey, &Vec<Run>)> {
        self.rows.iter()
    }

    pub fn row(&self, key: &RowKey) -> &[Run] {
        self.rows.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, c: &Cell) -> bool {
        let runs = self.row(&[c[1], c[2]]);
        let idx = runs.partition_point(|&(a, _)| a <= c[0]);
        idx > 0 && c[0] <= runs[idx - 1].1
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows
            .iter()
            .flat_map(|(k, runs)| runs.iter().flat_map(move |&(a, b)| (a..=b).map(move |x| [x, k[0], k[1]])))
    }

    /// Inclusive bounding box of the indices, `None` when empty.
    pub fn bbox(&self) -> Option<(Cell, Cell)> {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (k, runs) in &self.rows {
            lo[0] = lo[0].min(runs[0].0);
            hi[0] = hi[0].max(runs[runs.len() - 1].1);
            for a in 0..2 {
                lo[a + 1] = lo[a + 1].min(k[a]);
                hi[a + 1] = hi[a + 1].max(k[a]);
            }
        }
        (lo[0] <= hi[0]).then_some((lo, hi))
    }

    fn map_rows<F: Fn(&RowKey, &[Run]) -> Vec<(RowKey, Run)>>(&self, f: F) -> Self {
        let mut rows: HashMap<RowKey, Vec<Run>> = HashMap::new();
        for (k, runs) in &self.rows {
            for (nk, r) in f(k, runs) {
                rows.entry(nk).or_default().push(r);
            }
        }
        Self::from_row_map(self.dim, rows)
    }

    /// Points `z` of a planar set whose whole box `z + [-wx, wx] × [-w, w]`
    /// lies in the set.
    pub fn erode_box_2d(&self, wx: i64, w: i64) -> Self {
        debug_assert!(self.dim <= 2 && wx >= 0 && w >= 0);
        let shrunk: BTreeMap<i64, Vec<Run>> = self
            .rows
            .iter()
            .map(|(k, runs)| (k[0], runs.iter().filter(|r| r.1 - r.0 >= 2 * wx).map(|r| (r.0 + wx, r.1 - wx)).collect::<Vec<_>>()))
            .filter(|(_, r)| !r.is_empty())
            .collect();
        let mut rows = BTreeMap::new();
        for &y in shrunk.keys() {
            let mut acc: Option<Vec<Run>> = None;
            for dy in -w..=w {
                let Some(r) = shrunk.get(&(y + dy)) else {
                    acc = Some(Vec::new());
                    break;
                };
                acc = Some(match acc {
                    None => r.clone(),
                    Some(a) => intersect_runs(&a, r),
                });
                if acc.as_ref().is_some_and(Vec::is_empty) {
                    break;
                }
            }
            if let Some(a) = acc.filter(|a| !a.is_empty()) {
                rows.insert([y, 0], a);
            }
        }
        RunSet { dim: self.dim, rows }
    }

    /// Point reflection `z ↦ -z`.
    pub fn neg_points(&self) -> Self {
        self.map_rows(|k, runs| runs.iter().map(|&(a, b)| ([-k[0], -k[1]], (-b, -a))).collect())
    }

    /// Reflection of unit cells through the origin: cell `z` covers
    /// `[z, z + 1]`, its mirror image is cell `-z - 1`.
    pub fn reflect_cells(&self) -> Self {
        let d = self.dim;
        self.map_rows(|k, runs| {
            let ky = if d >= 2 { -k[0] - 1 } else { 0 };
            let kz = if d >= 3 { -k[1] - 1 } else { 0 };
            runs.iter().map(|&(a, b)| ([ky, kz], (-b - 1, -a - 1))).collect()
        })
    }

    pub fn translate(&self, t: &Cell) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|(k, runs)| {
                ([k[0] + t[1], k[1] + t[2]], runs.iter().map(|&(a, b)| (a + t[0], b + t[0])).collect())
            })
            .collect();
        RunSet { dim: self.dim, rows }
    }

    /// The index difference set `{a - b : a ∈ self, b ∈ other}`.
    pub fn difference(&self, other: &Self) -> Self {
        let mut rows: HashMap<RowKey, Vec<Run>> = HashMap::new();
        for (ka, ra) in &self.rows {
            for (kb, rb) in &other.rows {
                let key = [ka[0] - kb[0], ka[1] - kb[1]];
                let out = rows.entry(key).or_default();
                for &(a0, a1) in ra {
                    for &(b0, b1) in rb {
                        out.push((a0 - b1, a1 - b0));
                    }
                }
            }
            // Keep the accumulation buffers small on long products.
            if rows.values().map(Vec::len).sum::<usize>() > 1 << 22 {
                for v in rows.values_mut() {
                    normalize_row(v);
                }
            }
        }
        Self::from_row_map(self.dim, rows)
    }

    /// Sumset `{a + b}`.
    pub fn sum(&self, other: &Self) -> Self {
        self.difference(&other.neg_points())
    }

    /// Dilation by the block `{-1, 0}^d`.
    pub fn dilate_down(&self) -> Self {
        let d = self.dim;
        let ys: &[i64] = if d >= 2 { &[0, -1] } else { &[0] };
        let zs: &[i64] = if d >= 3 { &[0, -1] } else { &[0] };
        self.map_rows(|k, runs| {
            let mut out = Vec::with_capacity(runs.len() * 4);
            for &dy in ys {
                for &dz in zs {
                    for &(a, b) in runs {
                        out.push(([k[0] + dy, k[1] + dz], (a - 1, b)));
                    }
                }
            }
            out
        })
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut rows: HashMap<RowKey, Vec<Run>> = HashMap::new();
        for (k, runs) in self.rows.iter().chain(other.rows.iter()) {
            rows.entry(*k).or_default().extend_from_slice(runs);
        }
        Self::from_row_map(self.dim, rows)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .filter_map(|(k, ra)| {
                let rb = other.rows.get(k)?;
                let r = intersect_runs(ra, rb);
                (!r.is_empty()).then_some((*k, r))
            })
            .collect();
        RunSet { dim: self.dim, rows }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|(k, ra)| {
            let rb = other.row(k);
            ra.iter().all(|&(a, b)| {
                let idx = rb.partition_point(|&(c, _)| c <= a);
                idx > 0 && b <= rb[idx - 1].1
            })
        })
    }

    /// `|{z ∈ self : z + s ∈ other}|`.
    pub fn overlap_count(&self, other: &Self, s: &Cell) -> u64 {
        self.rows
            .iter()
            .map(|(k, ra)| match other.rows.get(&[k[0] + s[1], k[1] + s[2]]) {
                Some(rb) => intersection_len(ra, rb, s[0]),
                None => 0,
            })
            .sum()
    }

    /// Number of unit faces between a present and an absent index, per axis.
    pub fn face_counts(&self) -> [u64; 3] {
        let mut faces = [0u64; 3];
        faces[0] = 2 * self.rows.values().map(|r| r.len() as u64).sum::<u64>();
        for axis in 1..self.dim {
            let step = if axis == 1 { [1, 0] } else { [0, 1] };
            let mut keys: Vec<RowKey> = self.rows.keys().copied().collect();
            keys.extend(self.rows.keys().map(|k| [k[0] - step[0], k[1] - step[1]]));
            keys.sort_unstable();
            keys.dedup();
            faces[axis] = keys
                .iter()
                .map(|k| symmetric_difference_len(self.row(k), self.row(&[k[0] + step[0], k[1] + step[1]])))
                .sum();
        }
        faces
    }

    /// Splits every index into a `2^k`-per-axis block.
    pub fn refine(&self, k: u32) -> Self {
        let f = 1i64 << k;
        let d = self.dim;
        self.map_rows(|key, runs| {
            let ny = if d >= 2 { f } else { 1 };
            let nz = if d >= 3 { f } else { 1 };
            let mut out = Vec::new();
            for dy in 0..ny {
                for dz in 0..nz {
                    let nk = [if d >= 2 { key[0] * f + dy } else { 0 }, if d >= 3 { key[1] * f + dz } else { 0 }];
                    for &(a, b) in runs {
                        out.push((nk, (a * f, b * f + f - 1)));
                    }
                }
            }
            out
        })
    }

    /// Halves the resolution: a parent index is kept when any child is
    /// present (`outer`) or when all `2^d` children are present (inner).
    pub fn coarsen(&self, outer: bool) -> Self {
        let d = self.dim;
        let parent = |v: i64| v.div_euclid(2);
        if outer {
            return self.map_rows(|k, runs| {
                let nk = [if d >= 2 { parent(k[0]) } else { 0 }, if d >= 3 { parent(k[1]) } else { 0 }];
                runs.iter().map(|&(a, b)| (nk, (parent(a), parent(b)))).collect()
            });
        }
        let mut parents: HashMap<RowKey, Vec<Vec<Run>>> = HashMap::new();
        for (k, runs) in &self.rows {
            let nk = [if d >= 2 { parent(k[0]) } else { 0 }, if d >= 3 { parent(k[1]) } else { 0 }];
            // Children entirely covered within this row, at parent scale.
            let inside: Vec<Run> = runs
                .iter()
                .filter_map(|&(a, b)| {
                    let lo = (a + 1).div_euclid(2);
                    let hi = (b - 1).div_euclid(2);
                    (lo <= hi).then_some((lo, hi))
                })
                .collect();
            parents.entry(nk).or_default().push(inside);
        }
        let need = 1usize << (d - 1);
        let rows = parents
            .into_iter()
            .filter_map(|(k, lists)| {
                if lists.len() < need {
                    return None;
                }
                let mut acc = lists[0].clone();
                for l in &lists[1..] {
                    acc = intersect_runs(&acc, l);
                }
                (!acc.is_empty()).then_some((k, acc))
            })
            .collect();
        RunSet { dim: d, rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(n: i64) -> RunSet {
        RunSet::from_cells(2, (0..n).flat_map(|x| (0..n).map(move |y| [x, y, 0])))
    }

    #[test]
    fn box_erosion_matches_brute_force() {
        let mut s = square(9);
        s = RunSet::from_cells(2, s.cells().filter(|c| *c != [4, 6, 0] && *c != [0, 0, 0]));
        for (wx, w) in [(0, 0), (1, 1), (2, 1), (0, 2), (2, 2)] {
            let e = s.erode_box_2d(wx, w);
            let want = RunSet::from_cells(
                2,
                s.cells().filter(|c| (-wx..=wx).all(|dx| (-w..=w).all(|dy| s.contains(&[c[0] + dx, c[1] + dy, 0])))),
            );
            assert_eq!(e, want, "w = ({wx}, {w})");
        }
    }

    #[test]
    fn cells_round_trip() {
        let s = RunSet::from_cells(2, [[0, 0, 0], [1, 0, 0], [3, 0, 0], [1, 2, 0]]);
        assert_eq!(s.len(), 4);
        assert_eq!(s.row(&[0, 0]), &[(0, 1), (3, 3)]);
        let back: Vec<Cell> = s.cells().collect();
        assert_eq!(back.len(), 4);
        assert!(s.contains(&[3, 0, 0]));
        assert!(!s.contains(&[2, 0, 0]));
    }

    #[test]
    fn difference_of_squares() {
        let s = square(3);
        let d = s.difference(&s);
        assert_eq!(d.len(), 25);
        assert_eq!(d.bbox(), Some(([-2, -2, 0], [2, 2, 0])));
    }

    #[test]
    fn faces_of_square() {
        assert_eq!(square(3).face_counts(), [6, 6, 0]);
        let l = RunSet::from_cells(2, [[0, 0, 0], [1, 0, 0], [0, 1, 0]]);
        assert_eq!(l.face_counts(), [4, 4, 0]);
    }

    #[test]
    fn reflect_cells_is_involution() {
        let s = RunSet::from_cells(2, [[0, 0, 0], [2, 1, 0]]);
        let r = s.reflect_cells();
        assert!(r.contains(&[-1, -1, 0]));
        assert!(r.contains(&[-3, -2, 0]));
        assert_eq!(r.reflect_cells(), s);
    }

    #[test]
    fn refine_then_coarsen() {
        let s = RunSet::from_cells(2, [[0, 0, 0], [1, 0, 0], [5, -3, 0]]);
        let f = s.refine(1);
        assert_eq!(f.len(), 12);
        assert_eq!(f.coarsen(false), s);
        assert_eq!(f.coarsen(true), s);
        let mut partial: Vec<Cell> = f.cells().collect();
        partial.pop();
        let p = RunSet::from_cells(2, partial);
        assert_eq!(p.coarsen(false).len(), 2);
        assert_eq!(p.coarsen(true).len(), 3);
    }

    #[test]
    fn overlap_with_shift() {
        let s = square(4);
        assert_eq!(s.overlap_count(&s, &[1, 0, 0]), 12);
        assert_eq!(s.overlap_count(&s, &[1, 1, 0]), 9);
        assert_eq!(s.overlap_count(&s, &[4, 0, 0]), 0);
    }
}
