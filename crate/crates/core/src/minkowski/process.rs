//! The iterated process `K_n = S(K_{n-1})` with per-step metrics.

use serde_json::{json, Value};

use super::lattice::{LatticeProcess, LATTICE_POINT_CAP};
use crate::convex::{origin_ball_radius, RadiusBracket};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::set_model::{encode_set, CompactSet, Length, Measured, PointSet, VolumeBracket, DEFAULT_CELL_BUDGET};

#[derive(Clone, Debug)]
pub struct ProcessOptions<T> {
    /// Cell budget for grid iterates (and point budget for point sets).
    pub budget: u64,
    /// Keep each iterate in the trace.
    pub snapshots: bool,
    /// Radius `r` of the seed, when known.
    pub declared_r: Option<T>,
}

impl<T> Default for ProcessOptions<T> {
    fn default() -> Self {
        ProcessOptions { budget: DEFAULT_CELL_BUDGET, snapshots: false, declared_r: None }
    }
}

#[derive(Clone, Debug)]
pub struct SeedInfo<T> {
    pub kind: &'static str,
    pub dim: usize,
    pub diameter: Measured<T>,
    pub declared_r: Option<T>,
}

#[derive(Clone, Debug)]
pub struct TraceRecord<T> {
    pub n: u32,
    pub volume: VolumeBracket<T>,
    /// `d_H(K_n, Conv(K₁))`; `None` when no supported method applies.
    pub hausdorff: Option<Measured<T>>,
    pub radius: RadiusBracket<T>,
    pub diameter: Measured<T>,
    /// Points, cells (outer cells for sandwiches) or components.
    pub size: u64,
    pub snapshot: Option<CompactSet<T>>,
}

#[derive(Clone, Debug)]
pub struct ProcessTrace<T> {
    pub seed: SeedInfo<T>,
    pub records: Vec<TraceRecord<T>>,
    /// Why the trace ended before `n_max`, if it did.
    pub stopped: Option<Error>,
}

/// Runs `K₁, ..., K_{n_max}` from the seed `K₀`.
pub fn iterate_process<T: Scalar>(k0: &CompactSet<T>, n_max: u32, opts: &ProcessOptions<T>) -> Result<ProcessTrace<T>> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let seed = SeedInfo { kind: k0.kind(), dim: k0.dim(), diameter: k0.diameter(), declared_r: opts.declared_r.clone() };
    let mut trace = ProcessTrace { seed, records: Vec::new(), stopped: None };
    if let CompactSet::Points(p) = k0 {
        if let Ok(lp) = LatticeProcess::new(&p.cast::<Rational>()) {
            run_lattice(lp, n_max, opts, &mut trace)?;
            return Ok(trace);
        }
    }
    let mut k = k0.steinhaus(opts.budget)?;
    let hull = CompactSet::Polytope(k.convex_hull());
    for n in 1..=n_max {
        trace.records.push(record(n, &k, &hull, opts.snapshots));
        if n == n_max {
            break;
        }
        match k.steinhaus(opts.budget) {
            Ok(next) => k = next,
            Err(e) => {
                trace.stopped = Some(e);
                break;
            }
        }
    }
    Ok(trace)
}

fn record<T: Scalar>(n: u32, k: &CompactSet<T>, hull: &CompactSet<T>, snapshot: bool) -> TraceRecord<T> {
    let size = match k {
        CompactSet::Intervals(x) => x.len() as u64,
        CompactSet::Grid(g) => g.cell_count(),
        CompactSet::Sandwich(s) => s.outer().cell_count(),
        CompactSet::Points(p) => p.len() as u64,
        CompactSet::Polytope(p) => p.vertices().len() as u64,
    };
    TraceRecord {
        n,
        volume: k.volume(),
        hausdorff: k.hausdorff(hull).ok(),
        radius: origin_ball_radius(k).unwrap_or_else(|_| RadiusBracket::exact(Length::zero())),
        diameter: k.diameter(),
        size,
        snapshot: snapshot.then(|| k.clone()),
    }
}

fn run_lattice<T: Scalar>(
    mut lp: LatticeProcess,
    n_max: u32,
    opts: &ProcessOptions<T>,
    trace: &mut ProcessTrace<T>,
) -> Result<()> {
    let cap = opts.budget.min(LATTICE_POINT_CAP);
    let from = |l: Length<Rational>| Length::from_squared(T::from_rational(&l.squared));
    let mut previous: Option<Length<Rational>> = None;
    for n in 1..=n_max {
        let snapshot = if opts.snapshots {
            let p: PointSet<T> = lp.to_point_set()?.cast();
            Some(CompactSet::Points(p))
        } else {
            None
        };
        trace.records.push(TraceRecord {
            n,
            volume: VolumeBracket::exact(T::zero()),
            hausdorff: {
                let dh = lp.hausdorff_to_hull_within(previous.as_ref()).ok();
                previous = dh.clone();
                dh.map(|l| Measured::exact(from(l)))
            },
            radius: RadiusBracket::exact(Length::zero()),
            diameter: Measured::exact(from(lp.diameter()?)),
            size: lp.len(),
            snapshot,
        });
        if n == n_max {
            break;
        }
        if let Err(e) = lp.step(cap) {
            trace.stopped = Some(e);
            break;
        }
    }
    Ok(())
}

impl<T: Scalar> ProcessTrace<T> {
    /// One row per iterate: `n, vol_inner, vol_outer, dH, dH_err, r_ball, diam`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        w.write_record(["n", "vol_inner", "vol_outer", "dH", "dH_err", "r_ball", "diam"]).map_err(io)?;
        for r in &self.records {
            let (dh, err) = match &r.hausdorff {
                Some(m) => (m.value(), m.error),
                None => (f64::NAN, f64::INFINITY),
            };
            w.write_record([
                r.n.to_string(),
                r.volume.lower.lossy_f64().to_string(),
                r.volume.upper.lossy_f64().to_string(),
                dh.to_string(),
                err.to_string(),
                r.radius.lower.value().to_string(),
                r.diameter.value().to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Value {
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                let mut v = json!({
                    "n": r.n,
                    "vol_inner": r.volume.lower.lossy_f64(),
                    "vol_outer": r.volume.upper.lossy_f64(),
                    "dH": r.hausdorff.as_ref().map(|m| m.value()),
                    "dH_err": r.hausdorff.as_ref().map(|m| m.error),
                    "dH_squared": r.hausdorff.as_ref().filter(|_| T::EXACT).map(|m| exact_text(&m.length)),
                    "r_ball": r.radius.lower.value(),
                    "r_ball_upper": r.radius.upper.value(),
                    "diam": r.diameter.value(),
                    "diam_err": r.diameter.error,
                    "size": r.size,
                });
                if let Some(s) = &r.snapshot {
                    v["snapshot"] = encode_set(s);
                }
                v
            })
            .collect();
        json!({
            "schema_version": crate::set_model::SCHEMA_VERSION,
            "kind": "process_trace",
            "seed": {
                "kind": self.seed.kind,
                "dimension": self.seed.dim,
                "diameter": self.seed.diameter.value(),
                "declared_r": self.seed.declared_r.as_ref().map(Scalar::lossy_f64),
            },
            "stopped": self.stopped.as_ref().map(|e| e.to_string()),
            "records": records,
        })
    }
}

fn exact_text<T: Scalar>(l: &Length<T>) -> String {
    format_rational(&l.squared.to_rational())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::scalar::q;
    use crate::set_model::{ConvexPolytope, GridSet, IntervalUnion};

    #[test]
    fn two_point_seed_halves_the_distance() {
        let k0: CompactSet<Rational> =
            PointSet::new(1, vec![Point::from_ints(&[0]), Point::from_ints(&[4])]).unwrap().into();
        let t = iterate_process(&k0, 6, &ProcessOptions::default()).unwrap();
        for r in &t.records {
            let m = r.hausdorff.as_ref().unwrap();
            assert!(m.is_exact());
            assert_eq!(m.length.exact(), Some(q(4, 1 << (r.n + 1))));
            assert_eq!(r.diameter.length.exact(), Some(q(4, 1)));
        }
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("n,vol_inner,vol_outer,dH,dH_err,r_ball,diam\n1,0,0,1,0,0,4\n"));
    }

    #[test]
    fn symmetric_convex_seed_is_constant() {
        let sq = ConvexPolytope::cuboid(&[q(-1, 1), q(-1, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        let t = iterate_process(&CompactSet::Polytope(sq), 4, &ProcessOptions::default()).unwrap();
        for r in &t.records {
            assert_eq!(r.volume.lower, q(4, 1));
            assert_eq!(r.hausdorff.as_ref().unwrap().length.squared, q(0, 1));
        }
    }

    #[test]
    fn interval_volumes_grow_towards_the_hull() {
        let k0: CompactSet<Rational> =
            IntervalUnion::canonicalize(vec![(q(-2, 1), q(-2, 1)), (q(-1, 2), q(1, 2)), (q(2, 1), q(2, 1))])
                .unwrap()
                .into();
        let t = iterate_process(&k0, 8, &ProcessOptions::default()).unwrap();
        let vols: Vec<Rational> = t.records.iter().map(|r| r.volume.lower.clone()).collect();
        assert!(vols.windows(2).all(|w| w[0] <= w[1]));
        assert!(*vols.last().unwrap() <= q(4, 1));
        assert!(vols.last().unwrap().lossy_f64() > 3.5);
    }

    #[test]
    fn grid_trace_nests_and_coarsens() {
        let g = GridSet::from_cells(2, q(1, 2), [[0, 0, 0], [3, 0, 0], [0, 2, 0]]).unwrap();
        let opts = ProcessOptions { budget: 3000, ..ProcessOptions::default() };
        let t = iterate_process(&CompactSet::Grid(g), 5, &opts).unwrap();
        assert_eq!(t.records.len(), 5);
        assert!(t.records.iter().all(|r| r.size <= 3000));
        let d: Vec<f64> = t.records.iter().map(|r| r.hausdorff.as_ref().unwrap().value()).collect();
        assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{d:?}");
        let json = t.to_json();
        assert_eq!(json["records"].as_array().unwrap().len(), 5);
    }
}
