//! Exact squared Euclidean distance transforms on integer lattices, and
//! the half-cell lattice used to measure distances between cell unions.
//!
//! The transform is the separable lower-envelope algorithm of Felzenszwalb
//! and Huttenlocher. Inputs and outputs are integers stored in `f64`
//! (exact below 2^53).

use crate::set_model::runs::{Cell, RunSet};

/// Squared distance from every lattice point of a `dims` box to the nearest
/// feature point (`f64::INFINITY` when there is none).
pub fn squared_edt(dims: [usize; 3], feature: &[bool]) -> Vec<f64> {
    let [nx, ny, nz] = dims;
    let mut f: Vec<f64> = feature.iter().map(|&b| if b { 0.0 } else { f64::INFINITY }).collect();
    let mut buf = Vec::new();
    let mut out = Vec::new();
    for (len, stride, lines) in [(nx, 1, ny * nz), (ny, nx, nx * nz), (nz, nx * ny, nx * ny)] {
        if len <= 1 {
            continue;
        }
        for line in 0..lines {
            let start = match stride {
                1 => line * nx,
                s if s == nx => (line / nx) * nx * ny + line % nx,
                _ => line,
            };
            buf.clear();
            buf.extend((0..len).map(|i| f[start + i * stride]));
            transform_1d(&buf, &mut out);
            for i in 0..len {
                f[start + i * stride] = out[i];
            }
        }
    }
    f
}

fn transform_1d(f: &[f64], d: &mut Vec<f64>) {
    let n = f.len();
    d.clear();
    d.resize(n, f64::INFINITY);
    let mut v = vec![0usize; n];
    let mut z = vec![0f64; n + 1];
    let mut k: usize = 0;
    let first = match f.iter().position(|x| x.is_finite()) {
        Some(i) => i,
        None => return,
    };
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in first + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        let qf = q as f64;
        let meet = |p: usize| {
            let pf = p as f64;
            ((f[q] + qf * qf) - (f[p] + pf * pf)) / (2.0 * qf - 2.0 * pf)
        };
        // z[0] is -inf, so the loop stops at k = 0 at the latest.
        let mut s = meet(v[k]);
        while s <= z[k] {
            k -= 1;
            s = meet(v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    let mut k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        let qf = q as f64;
        while z[k + 1] < qf {
            k += 1;
        }
        let dq = qf - v[k] as f64;
        *out = dq * dq + f[v[k]];
    }
}

/// A dense box of the lattice `(h/2) Z^d` covering a padded cell range.
/// Half-lattice coordinates `u` correspond to points `u h / 2`; cell `z`
/// covers the half-lattice points `2z ≤ u ≤ 2z + 2`.
#[derive(Clone, Debug)]
pub struct HalfLattice {
    pub dim: usize,
    pub lo: Cell,
    pub dims: [usize; 3],
}

impl HalfLattice {
    /// Covers cells `lo..=hi` padded by `pad` cells on every side.
    pub fn covering(dim: usize, lo: Cell, hi: Cell, pad: i64) -> Self {
        let mut l = [0i64; 3];
        let mut dims = [1usize; 3];
        for i in 0..dim {
            l[i] = 2 * (lo[i] - pad);
            dims[i] = (2 * (hi[i] + 1 + pad) - l[i] + 1) as usize;
        }
        HalfLattice { dim, lo: l, dims }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, u: &Cell) -> Option<usize> {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for i in 0..3 {
            let off = u[i] - self.lo[i];
            if off < 0 || off as usize >= self.dims[i] {
                return None;
            }
            idx += off as usize * stride;
            stride *= self.dims[i];
        }
        Some(idx)
    }

    pub fn coords(&self, mut idx: usize) -> Cell {
        let mut u = [0i64; 3];
        for i in 0..3 {
            u[i] = (idx % self.dims[i]) as i64 + self.lo[i];
            idx /= self.dims[i];
        }
        u
    }

    /// Marks every half-lattice point of the closed cells.
    pub fn mark_cells(&self, cells: &RunSet, out: &mut [bool]) {
        let d = self.dim;
        for (k, runs) in cells.rows() {
            let ys: Vec<i64> = if d >= 2 { (2 * k[0]..=2 * k[0] + 2).collect() } else { vec![0] };
            let zs: Vec<i64> = if d >= 3 { (2 * k[1]..=2 * k[1] + 2).collect() } else { vec![0] };
            for &uz in &zs {
                for &uy in &ys {
                    for &(a, b) in runs {
                        let (s, e) = (2 * a, 2 * b + 2);
                        if let (Some(i0), Some(i1)) = (self.index(&[s, uy, uz]), self.index(&[e, uy, uz])) {
                            out[i0..=i1].iter_mut().for_each(|x| *x = true);
                        } else {
                            for ux in s..=e {
                                if let Some(i) = self.index(&[ux, uy, uz]) {
                                    out[i] = true;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// Cells of the covered range that are not in `cells` (the closure of
    /// the complement, restricted to this box).
    pub fn absent_cells(&self, cells: &RunSet) -> RunSet {
        let d = self.dim;
        let cell_lo: Vec<i64> = (0..3).map(|i| if i < d { self.lo[i] / 2 } else { 0 }).collect();
        let cell_hi: Vec<i64> =
            (0..3).map(|i| if i < d { (self.lo[i] + self.dims[i] as i64 - 1) / 2 - 1 } else { 0 }).collect();
        let mut runs = Vec::new();
        for z in cell_lo[2]..=cell_hi[2] {
            for y in cell_lo[1]..=cell_hi[1] {
                let mut x = cell_lo[0];
                for &(a, b) in cells.row(&[y, z]) {
                    if a > x {
                        runs.push(([y, z], (x, (a - 1).min(cell_hi[0]))));
                    }
                    x = x.max(b + 1);
                }
                if x <= cell_hi[0] {
                    runs.push(([y, z], (x, cell_hi[0])));
                }
            }
        }
        RunSet::from_runs(d, runs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(dims: [usize; 3], feature: &[bool]) -> Vec<f64> {
        let n = feature.len();
        let coord = |i: usize| [i % dims[0], (i / dims[0]) % dims[1], i / (dims[0] * dims[1])];
        (0..n)
            .map(|i| {
                let a = coord(i);
                (0..n)
                    .filter(|&j| feature[j])
                    .map(|j| {
                        let b = coord(j);
                        (0..3).map(|k| (a[k] as f64 - b[k] as f64).powi(2)).sum::<f64>()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    #[test]
    fn matches_bruteforce_on_pseudorandom_masks() {
        let dims = [7, 5, 3];
        let n = 105;
        for seed in 0..20u64 {
            let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mask: Vec<bool> = (0..n)
                .map(|_| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (s >> 60) == 0
                })
                .collect();
            assert_eq!(squared_edt(dims, &mask), brute(dims, &mask));
        }
    }

    #[test]
    fn half_lattice_marks_closed_cell() {
        let cells = RunSet::from_cells(2, [[0, 0, 0]]);
        let hl = HalfLattice::covering(2, [0, 0, 0], [0, 0, 0], 1);
        let mut m = vec![false; hl.len()];
        hl.mark_cells(&cells, &mut m);
        assert_eq!(m.iter().filter(|&&b| b).count(), 9);
        let absent = hl.absent_cells(&cells);
        assert_eq!(absent.len(), 8);
    }
}
