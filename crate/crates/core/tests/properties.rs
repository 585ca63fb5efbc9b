use proptest::prelude::*;
use steinhaus_core::minkowski::{correlation, iterate_process, shift_symmdiff, ProcessOptions};
use steinhaus_core::scalar::q;
use steinhaus_core::set_model::{decode_set, encode_set, rasterize, RasterMode};
use steinhaus_core::{CompactSet, ExactGrid, ExactIntervals, ExactPoints, Point, Rational, Scalar};

fn points(d: usize, max: usize) -> impl Strategy<Value = ExactPoints> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, d), 1..=max)
        .prop_map(move |v| ExactPoints::new(d, v.iter().map(|c| Point::from_ints(c)).collect()).unwrap())
}

fn intervals() -> impl Strategy<Value = ExactIntervals> {
    prop::collection::vec((-16i64..=16, 0i64..=6), 1..=4).prop_map(|v| {
        ExactIntervals::canonicalize(v.into_iter().map(|(a, l)| (q(a, 4), q(a + l, 4))).collect()).unwrap()
    })
}

/// Quarter-aligned, without isolated points: a point's outer raster is a
/// whole cell, whose image is wider than the raster of the point's image.
fn fat_intervals() -> impl Strategy<Value = ExactIntervals> {
    prop::collection::vec((-16i64..=16, 1i64..=6), 1..=4).prop_map(|v| {
        ExactIntervals::canonicalize(v.into_iter().map(|(a, l)| (q(a, 4), q(a + l, 4))).collect()).unwrap()
    })
}

fn grid() -> impl Strategy<Value = ExactGrid> {
    prop::collection::vec((0i64..12, 0i64..12), 1..40)
        .prop_map(|v| ExactGrid::from_cells(2, q(1, 4), v.into_iter().map(|(x, y)| [x, y, 0])).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn steinhaus_of_points_is_symmetric_with_same_diameter(k in points(2, 6)) {
        let s = k.steinhaus();
        prop_assert!(s.is_symmetric());
        prop_assert!(s.contains(&Point::origin(2)));
        prop_assert_eq!(s.diameter(), k.diameter());
        prop_assert!(s.is_subset_of(&s.steinhaus()));
    }

    #[test]
    fn steinhaus_is_a_contraction(a in points(2, 5), b in points(2, 5)) {
        prop_assert!(a.steinhaus().hausdorff(&b.steinhaus()).squared <= a.hausdorff(&b).squared);
    }

    #[test]
    fn interval_steinhaus_matches_on_the_grid(k in fat_intervals(), m in 1i64..=3) {
        // Rasterizing then mapping equals mapping then rasterizing, for
        // sets the grid represents exactly.
        let den = 4 * m;
        let lhs = rasterize(&k, &q(1, den), RasterMode::Outer).unwrap().steinhaus();
        let rhs = rasterize(&k.steinhaus(), &q(1, 2 * den), RasterMode::Outer).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn correlation_and_symmetric_difference_add_up(u in grid(), x in -8i64..8, y in -8i64..8) {
        let u = CompactSet::Grid(u);
        let p = Point(vec![q(x, 4), q(y, 4)]);
        let f = correlation(&u, &p).unwrap();
        let m = shift_symmdiff(&u, &p).unwrap();
        prop_assert_eq!(f + m / q(2, 1), u.volume().lower);
    }

    #[test]
    fn symmetric_difference_is_subadditive(u in grid(), a in (-6i64..6, -6i64..6), b in (-6i64..6, -6i64..6)) {
        let g = CompactSet::Grid(u);
        let pt = |x: i64, y: i64| Point(vec![q(x, 4), q(y, 4)]);
        let m = |x: i64, y: i64| shift_symmdiff(&g, &pt(x, y)).unwrap();
        prop_assert!(m(a.0 + b.0, a.1 + b.1) <= m(a.0, a.1) + m(b.0, b.1));
    }

    #[test]
    fn interval_traces_are_monotone(k in intervals()) {
        let trace = iterate_process(&CompactSet::Intervals(k), 6, &ProcessOptions::default()).unwrap();
        for w in trace.records.windows(2) {
            prop_assert!(w[0].volume.lower <= w[1].volume.lower);
            let (a, b) = (w[0].hausdorff.as_ref().unwrap(), w[1].hausdorff.as_ref().unwrap());
            prop_assert!(b.length.squared <= a.length.squared);
        }
    }

    #[test]
    fn json_round_trip(k in intervals(), p in points(2, 5), g in grid()) {
        for set in [CompactSet::Intervals(k), CompactSet::Points(p), CompactSet::Grid(g)] {
            let back: CompactSet<Rational> = decode_set(&encode_set(&set)).unwrap();
            prop_assert_eq!(back, set);
        }
    }
}

#[test]
fn float_and_exact_modes_agree_on_a_polygon_trace() {
    let pts: Vec<Point<Rational>> = [[0, 0], [3, 1], [1, 2]].iter().map(|c| Point::from_ints(c)).collect();
    let exact = CompactSet::Polytope(steinhaus_core::ExactPolytope::hull(&pts).unwrap());
    let float: CompactSet<f64> = CompactSet::Polytope(exact.convex_hull().cast());
    let opts = ProcessOptions::default();
    let te = iterate_process(&exact, 3, &opts).unwrap();
    let tf = iterate_process(&float, 3, &ProcessOptions::default()).unwrap();
    for (a, b) in te.records.iter().zip(&tf.records) {
        let (va, vb) = (a.volume.lower.clone(), b.volume.lower);
        assert!((va.lossy_f64() - vb).abs() < 1e-9, "{va} vs {vb}");
    }
}
