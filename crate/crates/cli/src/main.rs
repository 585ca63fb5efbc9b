//! `steinhaus`: iterate the Steinhaus map, bound radii, measure shapes and
//! run the acceptance checks from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 a cell or point budget was exceeded.

mod io;
mod svg;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use steinhaus_core::bounds::{
    kakeya_equivalence_check, shape_functionals, steiner_2d_check, theorem1_bound, theorem2_bound, SubsetFamily,
};
use steinhaus_core::convex::{direction_plan, star_subset};
use steinhaus_core::minkowski::{iterate_process, mstar_estimate, MstarPlan, ProcessOptions};
use steinhaus_core::set_model::{decode_set, encode_set, rasterize, rasterize_sandwich, RasterMode, SCHEMA_VERSION};
use steinhaus_core::{verify, CompactSet, ConvexPolytope, Error, GridSet, PointSet, Rational, Scalar};

use crate::io::Output;

#[derive(Parser, Debug)]
#[command(name = "steinhaus", version, about = "Iterated Steinhaus map K -> (K - K)/2 and related bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args, Debug)]
struct Opts {
    /// Input set (JSON); a directory for `shape`.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Number of iterations for `iterate`.
    #[arg(long, global = true, default_value_t = 6)]
    iters: u32,
    /// Grid cell size, e.g. `1/64`.
    #[arg(long, global = true)]
    resolution: Option<String>,
    /// Number of sampled directions.
    #[arg(long, global = true, default_value_t = 720)]
    directions: usize,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Cell / point budget; `STEINHAUS_BUDGET` overrides it.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Output directory; without it the main result goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write SVG snapshots.
    #[arg(long, global = true)]
    svg: bool,
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Run only the checks whose name contains this (or whose id equals it).
    #[arg(long, global = true)]
    only: Option<String>,
    /// Dilation radius for `steiner`; repeatable.
    #[arg(long, global = true)]
    radius: Vec<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Iterate K_n = S(K_{n-1}) and write the trace.
    Iterate,
    /// Certified lower bounds on the Steinhaus radius of a grid set.
    Radius,
    /// Bracket M*(U) for a grid set.
    Mstar,
    /// Star-shaped part of a symmetric set.
    Star,
    /// Steiner formula check for a convex polygon.
    Steiner,
    /// Shape functionals and Kakeya radius for convex polygons.
    Shape,
    /// Run the acceptance checks.
    Verify,
    /// Re-encode a set, optionally rasterized, optionally as SVG.
    Export,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Exact,
    Float,
}

/// Errors with a fixed exit code.
#[derive(Debug)]
pub enum Failure {
    Verify(String),
    Input(String),
    Budget(String),
}

impl Failure {
    pub fn from_core(e: Error, context: &str) -> Self {
        let msg = if context.is_empty() { e.to_string() } else { format!("{context}: {e}") };
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(msg),
            _ => Failure::Input(msg),
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verify(m) | Failure::Input(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

fn core<T>(r: steinhaus_core::Result<T>) -> Result<T> {
    r.map_err(|e| Failure::from_core(e, "").into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.opts.mode {
        Mode::Exact => run::<Rational>(cli.command, &cli.opts),
        Mode::Float => run::<f64>(cli.command, &cli.opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.downcast_ref::<Failure>().map_or(2, Failure::code))
        }
    }
}

fn run<T: Scalar>(cmd: Command, o: &Opts) -> Result<()> {
    match cmd {
        Command::Iterate => iterate::<T>(o),
        Command::Radius => radius::<T>(o),
        Command::Mstar => mstar::<T>(o),
        Command::Star => star::<T>(o),
        Command::Steiner => steiner::<T>(o),
        Command::Shape => shape::<T>(o),
        Command::Verify => run_verify(o),
        Command::Export => export::<T>(o),
    }
}

fn input(o: &Opts) -> Result<&Path> {
    match &o.input {
        Some(p) => Ok(p),
        None => Err(Failure::Input("--input is required".into()).into()),
    }
}

fn budget(o: &Opts) -> Result<u64> {
    let b = match std::env::var("STEINHAUS_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Input(format!("STEINHAUS_BUDGET={s:?} is not a count")))?,
        Err(_) => o.budget.unwrap_or(steinhaus_core::set_model::DEFAULT_CELL_BUDGET),
    };
    if b == 0 {
        bail!(Failure::Input("budget must be positive".into()));
    }
    Ok(b)
}

fn positive<T: Scalar>(s: &str, what: &str) -> Result<T> {
    let v = T::decode(&Value::String(s.to_string())).map_err(|e| Failure::Input(format!("{what} {s:?}: {e}")))?;
    if v <= T::zero() {
        bail!(Failure::Input(format!("{what} must be positive, got {s}")));
    }
    Ok(v)
}

fn resolution<T: Scalar>(o: &Opts) -> Result<Option<T>> {
    o.resolution.as_deref().map(|s| positive(s, "resolution")).transpose()
}

/// Grid sets pass through; other sets are rasterized to a sandwich when
/// `--resolution` is given.
fn maybe_rasterize<T: Scalar>(k: CompactSet<T>, h: Option<&T>) -> Result<CompactSet<T>> {
    let Some(h) = h else { return Ok(k) };
    Ok(match k {
        CompactSet::Intervals(x) => CompactSet::Sandwich(core(rasterize_sandwich(&x, h))?),
        CompactSet::Points(x) => CompactSet::Sandwich(core(rasterize_sandwich(&x, h))?),
        CompactSet::Polytope(x) => CompactSet::Sandwich(core(rasterize_sandwich(&x, h))?),
        grid => grid,
    })
}

/// The grid a bound is computed on: the set itself, the inner grid of a
/// sandwich, or the inner raster of a continuous set.
fn bound_grid<T: Scalar>(k: &CompactSet<T>, h: Option<&T>) -> Result<GridSet<T>> {
    let inner = |g: steinhaus_core::Result<GridSet<T>>| -> Result<GridSet<T>> {
        let g = core(g)?;
        if g.is_empty() {
            bail!(Failure::Input("no grid cell lies inside the set; refine --resolution".into()));
        }
        Ok(g)
    };
    match (k, h) {
        (CompactSet::Grid(g), _) => Ok(g.clone()),
        (CompactSet::Sandwich(s), _) => inner(Ok(s.inner().clone())),
        (CompactSet::Intervals(x), Some(h)) => inner(rasterize(x, h, RasterMode::Inner)),
        (CompactSet::Polytope(x), Some(h)) => inner(rasterize(x, h, RasterMode::Inner)),
        (CompactSet::Points(_), _) => bail!(Failure::Input("a finite point set has no interior".into())),
        _ => bail!(Failure::Input(format!("a {} input needs --resolution", k.kind()))),
    }
}

fn snapshot_svg<T: Scalar>(out: &mut Output, name: &str, k: &CompactSet<T>) {
    if let Some(s) = svg::render(k, name) {
        out.add(&format!("{name}.svg"), s.into_bytes(), false);
    }
}

fn iterate<T: Scalar>(o: &Opts) -> Result<()> {
    let path = input(o)?;
    let k0 = maybe_rasterize(io::read_set::<T>(path)?, resolution::<T>(o)?.as_ref())?;
    let opts = ProcessOptions { budget: budget(o)?, snapshots: o.svg, declared_r: None };
    let trace = iterate_process(&k0, o.iters, &opts).map_err(|e| Failure::from_core(e, &path.display().to_string()))?;
    let mut out = Output::new(o.out.clone());
    out.add("trace.csv", core(trace.to_csv())?.into_bytes(), true);
    out.add_json("trace.json", &trace.to_json(), false);
    if o.svg {
        snapshot_svg(&mut out, "K_0", &k0);
        for r in &trace.records {
            if let Some(s) = &r.snapshot {
                snapshot_svg(&mut out, &format!("K_{}", r.n), s);
            }
        }
    }
    out.commit()?;
    // The partial trace is kept; the exit code still reports the stop.
    match trace.stopped {
        Some(e) => {
            let done = trace.records.last().map_or(0, |r| r.n);
            Err(Failure::from_core(e, &format!("stopped after n = {done}")).into())
        }
        None => Ok(()),
    }
}

fn radius<T: Scalar>(o: &Opts) -> Result<()> {
    let k = io::read_set::<T>(input(o)?)?;
    let u = bound_grid(&k, resolution::<T>(o)?.as_ref())?;
    let t1 = core(theorem1_bound(&u))?;
    let t2 = core(theorem2_bound(&u, &SubsetFamily::default()))?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "radius_report",
        "h": u.h().lossy_f64(),
        "cells": u.cell_count(),
        "theorem1": t1.to_json(),
        "theorem2": t2.to_json(),
    });
    let mut out = Output::new(o.out.clone());
    out.add_json("radius.json", &report, true);
    out.commit()
}

fn mstar<T: Scalar>(o: &Opts) -> Result<()> {
    let k = io::read_set::<T>(input(o)?)?;
    let u = bound_grid(&k, resolution::<T>(o)?.as_ref())?;
    let report = core(mstar_estimate(&u, &MstarPlan::default()))?;
    let mut out = Output::new(o.out.clone());
    out.add_json("mstar.json", &report.to_json(), true);
    out.commit()
}

fn star<T: Scalar>(o: &Opts) -> Result<()> {
    let k = maybe_rasterize(io::read_set::<T>(input(o)?)?, resolution::<T>(o)?.as_ref())?;
    let s = core(star_subset(&k))?;
    let mut out = Output::new(o.out.clone());
    out.add_json("star.json", &encode_set(&s), true);
    if o.svg {
        snapshot_svg(&mut out, "star", &s);
    }
    out.commit()
}

fn steiner<T: Scalar>(o: &Opts) -> Result<()> {
    let k = io::read_set::<T>(input(o)?)?;
    let CompactSet::Polytope(b) = &k else {
        bail!(Failure::Input(format!("steiner needs a polytope, got {}", k.kind())));
    };
    let h: T = resolution(o)?.unwrap_or_else(|| T::from_ratio(1, 256));
    let radii: Vec<T> = if o.radius.is_empty() {
        vec![T::from_ratio(1, 4), T::from_ratio(1, 2), T::from_int(1)]
    } else {
        o.radius.iter().map(|s| positive(s, "radius")).collect::<Result<_>>()?
    };
    let reports: Vec<Value> =
        radii.iter().map(|r| core(steiner_2d_check(b, r, &h)).map(|x| x.to_json())).collect::<Result<_>>()?;
    let mut out = Output::new(o.out.clone());
    out.add_json(
        "steiner.json",
        &json!({ "schema_version": SCHEMA_VERSION, "kind": "steiner_reports", "reports": reports }),
        true,
    );
    out.commit()
}

/// Reads a polygon file, rejecting vertex lists not in convex position.
fn convex_polygon<T: Scalar>(path: &Path) -> Result<ConvexPolytope<T>> {
    let mut v = io::read_json(path)?;
    let bad = |m: String| -> anyhow::Error { Failure::Input(format!("{}: {m}", path.display())).into() };
    if v.get("kind").and_then(Value::as_str) != Some("polytope") {
        return Err(bad("expected a polytope".into()));
    }
    let poly = match decode_set::<T>(&v).map_err(|e| bad(e.to_string()))? {
        CompactSet::Polytope(p) if p.dim() == 2 => p,
        k => return Err(bad(format!("expected a planar polygon, got dimension {}", k.dim()))),
    };
    // Decoding takes the hull; compare against the listed vertices.
    let obj = v.as_object_mut().expect("decoded as an object");
    let listed = obj.remove("vertices").unwrap_or(Value::Null);
    obj.insert("kind".into(), json!("points"));
    obj.insert("points".into(), listed);
    let pts: PointSet<T> = match decode_set(&v).map_err(|e| bad(e.to_string()))? {
        CompactSet::Points(p) => p,
        _ => unreachable!("kind was set to points"),
    };
    if pts.len() > poly.vertices().len() {
        return Err(bad(format!(
            "polygon is not convex: {} listed vertices, {} on the hull",
            pts.len(),
            poly.vertices().len()
        )));
    }
    Ok(poly)
}

fn shape<T: Scalar>(o: &Opts) -> Result<()> {
    let path = input(o)?;
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(path)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    if files.is_empty() {
        bail!(Failure::Input(format!("no .json files in {}", path.display())));
    }
    let dirs = core(direction_plan(2, Some(o.directions)))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "file",
        "area",
        "perimeter",
        "width",
        "inradius",
        "circumradius",
        "diameter",
        "bs_x",
        "bs_y",
        "kakeya_r",
        "kakeya_gap",
    ])?;
    for f in &files {
        let poly = convex_polygon::<T>(f)?;
        let s = core(shape_functionals(&poly))?;
        let kk = core(kakeya_equivalence_check(&poly, &dirs, 1e-3))?;
        let name = f.file_name().map_or_else(|| f.display().to_string(), |n| n.to_string_lossy().into_owned());
        w.write_record([
            name,
            s.area.to_string(),
            s.perimeter.to_string(),
            s.width.to_string(),
            s.inradius.to_string(),
            s.circumradius.to_string(),
            s.diameter.to_string(),
            s.bs_point.0.to_string(),
            s.bs_point.1.to_string(),
            kk.kakeya_r.to_string(),
            kk.relative_gap.to_string(),
        ])?;
    }
    let mut out = Output::new(o.out.clone());
    out.add("shape.csv", w.into_inner().map_err(|e| anyhow::anyhow!("csv: {e}"))?, true);
    out.commit()
}

fn run_verify(o: &Opts) -> Result<()> {
    let results = verify::run(o.seed, o.only.as_deref());
    if results.is_empty() {
        bail!(Failure::Input(format!("no check matches {:?}", o.only.as_deref().unwrap_or(""))));
    }
    for r in &results {
        println!("{}", r.line());
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} passed (seed {})", results.len(), o.seed);
    if let Some(dir) = &o.out {
        io::write_atomic(&dir.join("verify.json"), verify::report_json(&results, o.seed).to_string().as_bytes())?;
    }
    if passed < results.len() {
        let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
        bail!(Failure::Verify(format!("failed: {}", failed.join(", "))));
    }
    Ok(())
}

fn export<T: Scalar>(o: &Opts) -> Result<()> {
    let k = maybe_rasterize(io::read_set::<T>(input(o)?)?, resolution::<T>(o)?.as_ref())?;
    let mut out = Output::new(o.out.clone());
    out.add_json("set.json", &encode_set(&k), true);
    if o.svg {
        snapshot_svg(&mut out, "set", &k);
    }
    out.commit()
}
