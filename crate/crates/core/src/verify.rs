//! Acceptance checks with pinned tolerances and runtime limits.
//!
//! Each check is deterministic for a given seed. A check passes only when
//! its numeric condition holds and it finishes inside its time limit.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bounds::{
    half_hull_threshold, k1_family, kakeya_equivalence_check, one_d_constants, shape_functionals,
    steiner_2d_check, theorem1_bound, verify_from_k1, OneDCertificate,
};
use crate::convex::{direction_plan, origin_ball_radius, weighted_combination_set};
use crate::error::Result;
use crate::geom::Point;
use crate::minkowski::{iterate_process, minkowski_content_estimate, mstar_estimate, tube_volume, MstarPlan, ProcessOptions};
use crate::scalar::{q, Rational, Scalar};
use crate::set_model::runs::{Cell, RunSet};
use crate::set_model::{
    rasterize, CompactSet, ConvexPolytope, Ellipsoid, GridSet, IntervalUnion, PointSet, RasterMode,
};

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub limit: Duration,
    run: fn(u64) -> Result<Outcome>,
}

/// The numeric verdict of one check and a one-line summary.
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<22} {:>8.2}s / {:>4}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "elapsed_s": self.elapsed.as_secs_f64(),
            "limit_s": self.limit.as_secs_f64(),
        })
    }
}

pub fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { id: 1, name: "two-point-seed", limit: s(1), run: two_point_seed },
        Criterion { id: 2, name: "k1-steinhaus", limit: s(1), run: k1_steinhaus },
        Criterion { id: 3, name: "hull-rate", limit: s(30), run: hull_rate },
        Criterion { id: 4, name: "map-properties", limit: s(60), run: map_properties },
        Criterion { id: 5, name: "weighted-combinations", limit: s(30), run: weighted_combinations },
        Criterion { id: 6, name: "rectangle-mstar", limit: s(60), run: rectangle_mstar },
        Criterion { id: 7, name: "one-d-constants", limit: s(10), run: one_d },
        Criterion { id: 8, name: "half-hull", limit: s(120), run: half_hull },
        Criterion { id: 9, name: "steiner", limit: s(60), run: steiner },
        Criterion { id: 10, name: "tube-content", limit: s(60), run: tube_content },
        Criterion { id: 11, name: "kakeya", limit: s(30), run: kakeya },
        Criterion { id: 12, name: "soundness", limit: s(300), run: soundness },
    ]
}

/// Runs the checks whose name contains `only` (all when `None`).
pub fn run(seed: u64, only: Option<&str>) -> Vec<CriterionResult> {
    criteria()
        .into_iter()
        .filter(|c| only.is_none_or(|o| c.name.contains(o) || c.id.to_string() == o))
        .map(|c| run_one(&c, seed))
        .collect()
}

pub fn run_one(c: &Criterion, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let outcome = (c.run)(seed.wrapping_add(c.id as u64));
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(o) => (o.passed && elapsed <= c.limit, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let detail = if elapsed > c.limit { format!("{detail}; over time limit") } else { detail };
    CriterionResult { id: c.id, name: c.name, passed, detail, elapsed, limit: c.limit }
}

pub fn report_json(results: &[CriterionResult], seed: u64) -> Value {
    json!({
        "schema_version": crate::set_model::SCHEMA_VERSION,
        "kind": "verify_report",
        "seed": seed,
        "passed": results.iter().all(|r| r.passed),
        "criteria": results.iter().map(CriterionResult::to_json).collect::<Vec<_>>(),
    })
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ipoint(c: &[i64]) -> Point<Rational> {
    Point::from_ints(c)
}

/// `2..=max` distinct integer points in `[0, span]^d`.
fn random_points(r: &mut ChaCha8Rng, d: usize, max: usize, span: i64) -> PointSet<Rational> {
    loop {
        let k = r.random_range(2..=max);
        let pts: Vec<Point<Rational>> =
            (0..k).map(|_| ipoint(&(0..d).map(|_| r.random_range(0..=span)).collect::<Vec<_>>())).collect();
        let p = PointSet::new(d, pts).expect("valid points");
        if p.len() >= 2 {
            return p;
        }
    }
}

fn two_point_seed(_: u64) -> Result<Outcome> {
    let k0: CompactSet<Rational> = PointSet::new(1, vec![ipoint(&[0]), ipoint(&[4])])?.into();
    let trace = iterate_process(&k0, 10, &ProcessOptions::default())?;
    let mut bad = Vec::new();
    for r in &trace.records {
        let ok = r
            .hausdorff
            .as_ref()
            .is_some_and(|m| m.error == 0.0 && m.length.exact() == Some(q(4, 1 << (r.n + 1))));
        if !ok {
            bad.push(r.n);
        }
    }
    let n = trace.records.len();
    outcome(bad.is_empty() && n == 10, format!("{n} iterates, exact mismatches at {bad:?}"))
}

fn k1_steinhaus(_: u64) -> Result<Outcome> {
    let k1 = k1_family(&q(1, 1), &q(4, 1), &q(0, 1))?;
    let want = IntervalUnion::canonicalize(vec![
        (q(-2, 1), q(-2, 1)),
        (q(-5, 4), q(-3, 4)),
        (q(-1, 2), q(1, 2)),
        (q(3, 4), q(5, 4)),
        (q(2, 1), q(2, 1)),
    ])?;
    let got = k1.steinhaus();
    outcome(got == want, format!("{} components", got.len()))
}

fn hull_rate(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let (mut checks, mut failures, mut worst) = (0, 0, 0f64);
    for _ in 0..100 {
        let k0 = random_points(&mut r, 2, 5, 3);
        let d2 = k0.diameter().squared;
        let trace = iterate_process(&CompactSet::Points(k0), 8, &ProcessOptions::default())?;
        for rec in trace.records.iter().filter(|rec| rec.n >= 3) {
            // d_H ≤ D d / 2^n, compared squared and exactly.
            let bound2 = d2.clone() * q(4, 1) / Rational::from_integer((1u64 << (2 * rec.n)).into());
            match &rec.hausdorff {
                Some(m) if m.error == 0.0 => {
                    checks += 1;
                    if m.length.squared > bound2 {
                        failures += 1;
                    }
                    if !num_traits::Zero::is_zero(&bound2) {
                        worst = worst.max((m.length.squared.clone() / bound2).lossy_f64().sqrt());
                    }
                }
                _ => failures += 1,
            }
        }
        if let Some(e) = trace.stopped {
            return outcome(false, format!("process stopped early: {e}"));
        }
    }
    outcome(failures == 0 && checks == 600, format!("{checks} checks, {failures} failures, max dH/bound {worst:.3}"))
}

fn map_properties(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let mut failures: Vec<String> = Vec::new();
    // Symmetry, 0 ∈ S(K), diameter and nesting on point sets.
    for _ in 0..100 {
        let d = r.random_range(1..=2);
        let k = random_points(&mut r, d, 5, 6);
        let s1 = k.steinhaus();
        if !s1.is_symmetric() || !s1.contains(&Point::origin(d)) {
            failures.push("point symmetry".into());
        }
        if s1.diameter() != k.diameter() {
            failures.push("point diameter".into());
        }
        let s2 = s1.steinhaus();
        if !s1.is_subset_of(&s2) {
            failures.push("point nesting".into());
        }
    }
    // The same on interval unions.
    for _ in 0..100 {
        let k = random_intervals(&mut r);
        let s1 = k.steinhaus();
        if !s1.is_symmetric() || s1.diameter() != k.diameter() {
            failures.push("interval symmetry/diameter".into());
        }
        let s2 = s1.steinhaus();
        if !s1.is_subset_of(&s2) || !s2.is_subset_of(&s2.steinhaus()) {
            failures.push("interval nesting".into());
        }
    }
    // Fixed points: symmetric convex bodies are fixed; perturbed ones are not.
    for _ in 0..50 {
        let d = r.random_range(2..=3);
        let pts: Vec<Point<Rational>> = (0..6)
            .map(|_| Point((0..d).map(|_| q(r.random_range(-20..=20), r.random_range(1..=5))).collect()))
            .collect();
        let sym: Vec<Point<Rational>> = pts.iter().cloned().chain(pts.iter().map(Point::neg)).collect();
        let body = ConvexPolytope::hull(&sym)?;
        if body.steinhaus() != body {
            failures.push("symmetric convex body moved".into());
        }
        let shift = Point((0..d).map(|i| q(1 + i as i64, 3)).collect());
        if body.is_full_dimensional() && body.translate(&shift).steinhaus() == body.translate(&shift) {
            failures.push("translated body fixed".into());
        }
        // Symmetric but not convex: two antipodal copies of the body's vertex set.
        let v = PointSet::new(d, body.vertices().to_vec())?;
        if v.len() > 1 && v.steinhaus() == v {
            failures.push("vertex set fixed".into());
        }
    }
    let gapped =
        IntervalUnion::canonicalize(vec![(q(-2, 1), q(-1, 1)), (q(-1, 2), q(1, 2)), (q(1, 1), q(2, 1))])?;
    if gapped.steinhaus() == gapped {
        failures.push("gapped union fixed".into());
    }
    let plus = GridSet::<Rational>::from_cells(
        2,
        q(1, 1),
        (-3..3).flat_map(|i| [[i, -1, 0], [i, 0, 0], [-1, i, 0], [0, i, 0]]),
    )?;
    if plus.steinhaus() == plus.refine(1) {
        failures.push("plus sign fixed".into());
    }
    let square = GridSet::<Rational>::block(2, q(1, 1), [-2, -2, 0], [1, 1, 0])?;
    if square.steinhaus() != square.refine(1) {
        failures.push("centred square moved".into());
    }
    // Contraction on random pairs.
    let mut worst = 0f64;
    for _ in 0..500 {
        let d = r.random_range(1..=2);
        let a = random_points(&mut r, d, 5, 8);
        let b = random_points(&mut r, d, 5, 8);
        let before = a.hausdorff(&b).squared;
        let after = a.steinhaus().hausdorff(&b.steinhaus()).squared;
        if after > before {
            failures.push("contraction".into());
        }
        if !num_traits::Zero::is_zero(&before) {
            worst = worst.max((after / before).lossy_f64().sqrt());
        }
    }
    failures.dedup();
    outcome(failures.is_empty(), format!("failures {failures:?}, max contraction ratio {worst:.3}"))
}

fn random_intervals(r: &mut ChaCha8Rng) -> IntervalUnion<Rational> {
    let k = r.random_range(1..=4);
    let raw: Vec<(Rational, Rational)> = (0..k)
        .map(|_| {
            let a = q(r.random_range(-20..=20), 4);
            let len = if r.random_bool(0.3) { q(0, 1) } else { q(r.random_range(1..=8), 4) };
            (a.clone(), a + len)
        })
        .collect();
    IntervalUnion::canonicalize(raw).expect("valid intervals")
}

fn weighted_combinations(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let (mut checks, mut failures) = (0, 0);
    for _ in 0..40 {
        let d = r.random_range(1..=2);
        let k0 = random_points(&mut r, d, 4, 3);
        let k1 = k0.steinhaus();
        let mut iterate = k1.clone();
        for n in 1..=4u32 {
            checks += 1;
            if weighted_combination_set(&k1, n, 1 << 26)? != iterate {
                failures += 1;
            }
            if n < 4 {
                iterate = iterate.steinhaus();
            }
        }
    }
    outcome(failures == 0, format!("{checks} seed/n pairs, {failures} mismatches"))
}

fn rectangle_mstar(_: u64) -> Result<Outcome> {
    let h = q(1, 128);
    let u = GridSet::block(2, h.clone(), [0, 0, 0], [255, 127, 0])?;
    let m = mstar_estimate(&u, &MstarPlan::default())?;
    let truth = 20f64.sqrt();
    let (lo, hi) = (m.lower_estimate.value(), m.upper_bound.value());
    let width = (hi - lo) / lo;
    let t1 = theorem1_bound(&u)?;
    let ratio = t1.bound.value() * 5f64.sqrt();
    let tol = h.lossy_f64() * 2f64.sqrt();
    let truth_ok = (t1.truth.lower.value() - 1.0).abs() <= tol && (t1.truth.upper.value() - 1.0).abs() <= tol;
    let passed = lo <= truth && truth <= hi && width <= 0.05 && (0.95..=1.0).contains(&ratio) && truth_ok;
    outcome(
        passed,
        format!(
            "M* in [{lo:.4}, {hi:.4}] (width {:.2}%), bound*sqrt5 = {ratio:.4}, truth [{:.4}, {:.4}]",
            100.0 * width,
            t1.truth.lower.value(),
            t1.truth.upper.value()
        ),
    )
}

fn one_d(_: u64) -> Result<Outcome> {
    let c = match one_d_constants(&q(1, 1), &q(4, 1), &q(1, 2))? {
        OneDCertificate::Constants(c) => c,
        OneDCertificate::Degenerate { .. } => return outcome(false, "degenerate certificate".into()),
    };
    let constants_ok = c.n0 == 2 && c.t0 == q(3, 4) && c.l0 == 5;
    let v = verify_from_k1(&k1_family(&q(1, 1), &q(4, 1), &q(0, 1))?, &q(1, 2))?;
    let first_ok = v.first_containing.is_some_and(|n| n <= 11);
    outcome(
        constants_ok && first_ok && v.holds && v.l1_ok,
        format!(
            "n0={} t0={} l0={}; containment from n*={:?} through n={}, L1 gap {}",
            c.n0,
            c.t0,
            c.l0,
            v.first_containing,
            v.n_checked,
            v.l1_gap.lossy_f64()
        ),
    )
}

fn half_hull(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let mut failures = 0;
    let mut thresholds = Vec::new();
    for _ in 0..20 {
        // Two or three overlapping rectangles on a unit grid.
        let mut cells: Vec<Cell> = Vec::new();
        for _ in 0..r.random_range(2..=3) {
            let (x0, y0) = (r.random_range(0..4), r.random_range(0..4));
            let (w, h) = (r.random_range(2..=4), r.random_range(2..=4));
            for x in x0..x0 + w {
                for y in y0..y0 + h {
                    cells.push([x, y, 0]);
                }
            }
        }
        let k0 = CompactSet::Grid(GridSet::<Rational>::from_cells(2, q(1, 1), cells)?);
        let k1 = k0.steinhaus(u64::MAX)?;
        let rho = origin_ball_radius(&k1)?.lower;
        let rho = rho.exact().unwrap_or_else(|| Rational::from_float(rho.value()).expect("finite"));
        let big_d = k1.diameter().length;
        let big_d = big_d.exact().unwrap_or_else(|| Rational::from_float(big_d.value().ceil()).expect("finite"));
        let n = half_hull_threshold(&big_d, 2, &(rho * q(2, 1)))?;
        thresholds.push(n);
        let opts: ProcessOptions<Rational> = ProcessOptions { budget: 1 << 20, ..ProcessOptions::default() };
        let mut k = k1.clone();
        for _ in 1..n + 1 {
            k = k.steinhaus(opts.budget)?;
        }
        let inner = k.inner_grid().expect("grid iterate");
        let half = k1.convex_hull().scale(&q(1, 2));
        let target = rasterize(&half, inner.h(), RasterMode::Inner)?;
        if !target.is_subset_of(inner) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("20 seeds, thresholds {thresholds:?}, {failures} failures"))
}

fn steiner(_: u64) -> Result<Outcome> {
    let sq = ConvexPolytope::cuboid(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)])?;
    let mut worst = 0f64;
    let mut oracle = 0f64;
    for r in [q(1, 4), q(1, 2), q(1, 1)] {
        let rep = steiner_2d_check(&sq, &r, &q(1, 256))?;
        worst = worst.max(rep.relative_error);
        oracle = oracle.max((rep.offset_area - rep.predicted_area).abs());
    }
    outcome(worst <= 0.01 && oracle <= 1e-12, format!("max relative error {worst:.2e}, offset oracle gap {oracle:.1e}"))
}

fn tube_content(_: u64) -> Result<Outcome> {
    let h = q(1, 256);
    let disk = Ellipsoid::ball(Point::from_ints(&[0, 0]), q(1, 1));
    let u = rasterize(&disk, &h, RasterMode::Outer)?;
    let t = tube_volume(&u, &q(1, 4))?;
    let tube_err = (t.volume - PI).abs() / PI;
    let c = minkowski_content_estimate(&u)?;
    let finest = *c.ratios.last().expect("radii");
    let content_err = (finest - 2.0 * PI).abs() / (2.0 * PI);
    let extrapolated_err = (c.extrapolated - 2.0 * PI).abs() / (2.0 * PI);
    outcome(
        tube_err <= 0.03 && content_err <= 0.03,
        format!(
            "tube {:.4} ({:.2}%), finest ratio {finest:.4} at x={} ({:.2}%), extrapolated {:.4} ({:.2}%)",
            t.volume,
            100.0 * tube_err,
            c.radii.last().expect("radii"),
            100.0 * content_err,
            c.extrapolated,
            100.0 * extrapolated_err
        ),
    )
}

fn kakeya(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let dirs = direction_plan(2, Some(720))?;
    let mut worst = 0f64;
    let mut failures = 0;
    let mut done = 0;
    while done < 50 {
        let pts: Vec<Point<Rational>> = (0..r.random_range(3..=9))
            .map(|_| Point(vec![q(r.random_range(-1000..=1000), 1000), q(r.random_range(-1000..=1000), 1000)]))
            .collect();
        let k = ConvexPolytope::hull(&pts)?;
        if !k.is_full_dimensional() {
            continue;
        }
        done += 1;
        let rep = kakeya_equivalence_check(&k, &dirs, 1e-3)?;
        worst = worst.max(rep.relative_gap);
        let f = shape_functionals(&k)?;
        let width_ok = (f.width - rep.kakeya_r).abs() <= 1e-9 * (1.0 + f.width);
        if !rep.agree || !width_ok {
            failures += 1;
        }
    }
    let side = 2.0 / 3f64.sqrt();
    let tri = ConvexPolytope::hull(&[
        Point(vec![0.0, 0.0]),
        Point(vec![side, 0.0]),
        Point(vec![side / 2.0, 1.0]),
    ])?;
    let pal = shape_functionals(&tri)?.area.sqrt() * 3f64.powf(0.25);
    let pal_ok = (pal - 1.0).abs() <= 1e-12;
    outcome(
        failures == 0 && pal_ok,
        format!("50 polygons, {failures} failures, max relative gap {worst:.2e}; triangle |K|^0.5 3^0.25 = {pal:.15}"),
    )
}

fn soundness(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for i in 0..200 {
        let u = random_shape(&mut r, i % 3)?;
        let rep = theorem1_bound(&u)?;
        if !rep.is_sound() {
            violations += 1;
        }
        min_slack = min_slack.min(rep.truth.upper.value() / rep.bound.value());
    }
    outcome(violations == 0, format!("200 sets, {violations} violations, min truth/bound {min_slack:.3}"))
}

/// Unions of rectangles, discretized ellipses and L-shapes at `h = 1/32`.
fn random_shape(r: &mut ChaCha8Rng, kind: usize) -> Result<GridSet<Rational>> {
    let h = q(1, 32);
    match kind {
        0 => {
            let mut cells: Vec<Cell> = Vec::new();
            for _ in 0..r.random_range(1..=4) {
                let (x0, y0) = (r.random_range(0..48), r.random_range(0..48));
                let (w, hh) = (r.random_range(1..=24), r.random_range(1..=24));
                for x in x0..x0 + w {
                    for y in y0..y0 + hh {
                        cells.push([x, y, 0]);
                    }
                }
            }
            GridSet::new(h, RunSet::from_cells(2, cells))
        }
        1 => {
            let c = Point(vec![q(r.random_range(-8..=8), 8), q(r.random_range(-8..=8), 8)]);
            let axes = vec![q(r.random_range(2..=24), 16), q(r.random_range(2..=24), 16)];
            rasterize(&Ellipsoid { center: c, semi_axes: axes }, &h, RasterMode::Outer)
        }
        _ => {
            let (a, b) = (r.random_range(8..=48), r.random_range(8..=48));
            let (t1, t2) = (r.random_range(1..=a / 2), r.random_range(1..=b / 2));
            let cells = (0..a).flat_map(|x| (0..t2).map(move |y| [x, y, 0])).chain((0..t1).flat_map(|x| (0..b).map(move |y| [x, y, 0])));
            GridSet::new(h, RunSet::from_cells(2, cells))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_filterable() {
        let c = criteria();
        let mut names: Vec<&str> = c.iter().map(|c| c.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 12);
        let r = run(7, Some("k1-steinhaus"));
        assert_eq!(r.len(), 1);
        assert!(r[0].passed, "{}", r[0].line());
    }
}
