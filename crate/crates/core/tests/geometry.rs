mod common;

use cantorlab::boxdim::{
    box_count_1d, box_count_2d, count_series, default_fit_range, max_gap, regress_dim,
    BoxCountSeries,
};
use cantorlab::furstenberg::{
    bounds_report, build_e, build_k, dimension_profile, furstenberg_experiment, project_px, sumset,
    svg_scatter, uniform_grid,
};
use cantorlab::integrals::constants;
use cantorlab::{enumerate_points, four_corner, Budget, CantorSpec, PlanarPointSet, PointSet1D, Rational};
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn cantor_points_match_digit_expansion() {
    for n in 0..=8 {
        let c = enumerate_points(&CantorSpec::cantor(), n, &budget()).unwrap();
        let mut want = common::cantor_numerators(n);
        want.sort_unstable();
        let got: Vec<i128> = c.iter().map(|p| p.numer() * (4i128.pow(n) / p.denom())).collect();
        assert_eq!(got, want, "n={n}");
    }
}

#[test]
fn box_counts_match_hashing() {
    let n = 9;
    let nums = common::cantor_numerators(n);
    let c = enumerate_points(&CantorSpec::cantor(), n, &budget()).unwrap();
    for base in [2, 3, 4, 5, 16] {
        for m in 0..=4 {
            let want = common::brute_box_count(&nums, 4i128.pow(n), base, m);
            assert_eq!(box_count_1d(&c, base, m).unwrap(), want as u64, "base {base} m {m}");
        }
    }
}

#[test]
fn four_corner_counts_are_powers_of_four() {
    let cc = four_corner(6, &budget()).unwrap();
    assert_eq!(cc.len(), 4096);
    for m in 0..=6 {
        assert_eq!(box_count_2d(&cc, 4, m).unwrap(), 4u64.pow(m));
    }
    let s = count_series(&cc, 4, 0, 6).unwrap();
    assert!((regress_dim(&s).unwrap().slope - 1.0).abs() < 1e-12);
}

#[test]
fn sumset_gaps_shrink_at_the_digit_rate() {
    for n in 2..=7 {
        let s = sumset(&Rational::new(1, 2), n, &budget()).unwrap();
        let g = max_gap(&s).unwrap();
        assert_eq!(g, Rational::new(3, 2 * 4i128.pow(n)), "n={n}");
    }
}

#[test]
fn quarter_sumset_has_dimension_log3_over_log4() {
    let s = sumset(&Rational::new(1, 4), 8, &budget()).unwrap();
    let series = count_series(&s, 4, 2, 7).unwrap();
    let est = regress_dim(&series).unwrap();
    let want = 3f64.ln() / 4f64.ln();
    assert!((est.slope - want).abs() < 1e-9, "{est:?}");
    for &(m, n) in series.entries() {
        assert_eq!(n, 4 * 3u64.pow(m - 1), "m={m}");
    }
}

#[test]
fn projection_endpoints_are_copies_of_c() {
    let c = enumerate_points(&CantorSpec::cantor(), 6, &budget()).unwrap();
    let p0 = project_px(&Rational::from_integer(0), 6, &budget()).unwrap();
    // x = 0 maps (c1, c2) to c1
    assert_eq!(p0, c);
    let p1 = project_px(&Rational::from_integer(1), 6, &budget()).unwrap();
    assert_eq!(p1.len(), c.len());
    assert!(project_px(&Rational::new(3, 2), 4, &budget()).is_err());
}

#[test]
fn two_thirds_projection_collapses() {
    let p = project_px(&Rational::new(2, 3), 4, &budget()).unwrap();
    assert_eq!(p.len(), 81);
}

#[test]
fn projection_matches_pairwise_oracle() {
    let n = 4;
    let nums = common::cantor_numerators(n);
    let den = 4i128.pow(n);
    for (p, q) in [(1, 3), (2, 5), (1, 7), (5, 6)] {
        // (1 - x) c1 + x c2 / 2 over denominator 2 q 4^n
        let mut want: Vec<i128> = nums
            .iter()
            .flat_map(|&a| nums.iter().map(move |&b| 2 * (q - p) * a + p * b))
            .collect();
        want.sort_unstable();
        want.dedup();
        let got = project_px(&Rational::new(p, q), n, &budget()).unwrap();
        assert_eq!(got.len(), want.len(), "x = {p}/{q}");
        let scale = 2 * q * den;
        for (g, w) in got.iter().zip(&want) {
            assert_eq!(g, Rational::new(*w, scale));
        }
    }
}

#[test]
fn profile_is_ordered_and_bounded() {
    let xs = uniform_grid(9).unwrap();
    assert_eq!(xs[0], Rational::from_integer(0));
    assert_eq!(xs[8], Rational::from_integer(1));
    let prof = dimension_profile(6, &xs, &budget()).unwrap();
    assert_eq!(prof.len(), 9);
    for (pt, x) in prof.iter().zip(&xs) {
        assert_eq!(&pt.x, x);
        assert!(pt.dim_estimate.slope >= 0.5 - 1e-9 && pt.dim_estimate.slope <= 1.0 + 1e-9);
    }
    assert!((prof[0].dim_estimate.slope - 0.5).abs() < 1e-9);
}

#[test]
fn k_set_construction() {
    let k = build_k(0.5, 4).unwrap();
    assert_eq!(k.spec, CantorSpec::cantor());
    assert!((k.achieved - 0.5).abs() < 1e-15);
    let k = build_k(0.5, 9).unwrap();
    assert_eq!(k.spec.digits(), &[0, 4, 8]);
    assert!(build_k(0.95, 4).is_err());
    assert!(build_k(0.5, 2).is_err());
    assert!(build_k(0.0, 4).is_err());
}

#[test]
fn e_sections_are_projections() {
    let k = build_k(0.5, 4).unwrap();
    let e = build_e(&k.spec, 3, 3, &budget()).unwrap();
    assert_eq!(e.depth(), 3);
    let xs = e.abscissae();
    assert_eq!(xs.len(), 8);
    for x in &xs {
        let section = e.section(x).unwrap();
        assert_eq!(section, project_px(x, 3, &budget()).unwrap(), "x = {x}");
    }
}

#[test]
fn experiment_records_series_and_bounds() {
    let r = furstenberg_experiment(0.5, 4, 5, 5, &budget()).unwrap();
    assert_eq!(r.series.len(), 6);
    assert_eq!(r.estimate.m_range, default_fit_range(5));
    assert_eq!(r.bounds, bounds_report(0.5).unwrap());
    assert!(r.n_points > 0);
}

#[test]
fn bounds_window_edges() {
    let k = constants();
    let (lo, hi) = bounds_report(0.5).unwrap().improvement_window();
    assert!((lo - (1.0 - 2.0 * k.c)).abs() < 1e-15 && (hi - 2.0 * k.c).abs() < 1e-15);
    assert!(bounds_report(0.5).unwrap().l2_improves());
    assert!(!bounds_report(0.1).unwrap().l2_improves());
    // just above 1/2 - c the elementary bound still wins
    let b = bounds_report(0.5 - k.c + 0.01).unwrap();
    assert!(!b.l2_improves());
    assert!(b.lower_elementary - b.lower_l2 > 0.0);
    // both edges are equalities
    let b = bounds_report(lo).unwrap();
    assert!((b.lower_l2 - b.lower_elementary).abs() < 1e-12);
    let b = bounds_report(hi).unwrap();
    assert!((b.lower_l2 - b.lower_elementary).abs() < 1e-12);
    assert!(!bounds_report(0.9).unwrap().l2_improves());
}

#[test]
fn svg_is_well_formed() {
    let svg = svg_scatter(&[(0.0, 0.0), (1.0, 0.5)], "a < b");
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("a &lt; b"));
    assert_eq!(svg.matches("width=\"1\" height=\"1\"").count(), 2);
}

#[test]
fn series_validation() {
    assert!(BoxCountSeries::new(4, 1, vec![(0, 1), (1, 2), (2, 4)]).is_ok());
    assert!(BoxCountSeries::new(4, 1, vec![(0, 1), (1, 5)]).is_err());
    assert!(BoxCountSeries::new(4, 1, vec![(0, 2), (1, 1)]).is_err());
    assert!(BoxCountSeries::new(4, 1, vec![(1, 2), (1, 2)]).is_err());
    assert!(BoxCountSeries::new(4, 1, vec![(1, 0)]).is_err());
    assert!(BoxCountSeries::new(1, 1, vec![]).is_err());
    assert!(BoxCountSeries::new(4, 3, vec![]).is_err());
    let c = enumerate_points(&CantorSpec::cantor(), 4, &budget()).unwrap();
    assert!(count_series(&c, 4, 0, 5).is_err());
    assert!(regress_dim(&count_series(&c, 4, 0, 1).unwrap()).is_err());
}

fn point_set() -> impl Strategy<Value = (u32, i128, Vec<i128>)> {
    (1u32..5).prop_flat_map(|depth| {
        let den = 4i128.pow(depth) * 6;
        (Just(depth), Just(den), prop::collection::vec(0..den, 1..60))
    })
}

proptest! {
    #[test]
    fn box_count_ignores_order_and_duplicates((depth, den, nums) in point_set(), m in 0u32..4) {
        let m = m.min(depth);
        let a = PointSet1D::from_numerators(depth, den, nums.clone()).unwrap();
        let mut shuffled = nums.clone();
        shuffled.reverse();
        shuffled.extend_from_slice(&nums[..nums.len() / 2]);
        let b = PointSet1D::from_numerators(depth, den, shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        let want = common::brute_box_count(&nums, den, 4, m) as u64;
        prop_assert_eq!(box_count_1d(&a, 4, m).unwrap(), want);
        prop_assert_eq!(box_count_1d(&b, 4, m).unwrap(), want);
    }

    #[test]
    fn canonical_form_is_sorted_and_reduced((depth, den, nums) in point_set()) {
        let a = PointSet1D::from_numerators(depth, den, nums.clone()).unwrap();
        prop_assert!(a.numerators().windows(2).all(|w| w[0] < w[1]));
        let scaled: Vec<i128> = nums.iter().map(|n| n * 7).collect();
        let b = PointSet1D::from_numerators(depth, den * 7, scaled).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn series_counts_are_monotone((depth, den, nums) in point_set()) {
        let a = PointSet1D::from_numerators(depth, den, nums).unwrap();
        let s = count_series(&a, 4, 0, depth).unwrap();
        for w in s.entries().windows(2) {
            prop_assert!(w[0].1 <= w[1].1 && w[1].1 <= 4 * w[0].1);
        }
        for &(m, n) in s.entries() {
            prop_assert_eq!(n, box_count_1d(&a, 4, m).unwrap());
        }
    }

    #[test]
    fn planar_counts_match_hashing(pts in prop::collection::vec((0i128..64, 0i128..64), 1..80), m in 0u32..4) {
        let e = PlanarPointSet::from_numerators(3, 64, 64, pts.clone()).unwrap();
        let scale = 4i128.pow(m);
        let want: std::collections::HashSet<(i128, i128)> = pts
            .iter()
            .map(|&(x, y)| ((x * scale).div_euclid(64), (y * scale).div_euclid(64)))
            .collect();
        prop_assert_eq!(box_count_2d(&e, 4, m).unwrap(), want.len() as u64);
    }

    #[test]
    fn bounds_are_ordered(alpha in 0.001f64..0.999) {
        let b = bounds_report(alpha).unwrap();
        prop_assert!(b.lower_elementary <= b.upper + 1e-15);
        prop_assert!(b.lower_l2 <= b.upper);
        prop_assert!((b.upper - b.lower_l2 - (0.5 - b.c)).abs() < 1e-12);
        let (lo, hi) = b.improvement_window();
        let inside = alpha > lo && alpha < hi;
        prop_assert_eq!(b.l2_improves(), inside);
    }

    #[test]
    fn sumset_contains_both_summands(num in 0i128..8, den in 1i128..8) {
        let t = Rational::new(num, den);
        let s = sumset(&t, 3, &budget()).unwrap();
        let c = enumerate_points(&CantorSpec::cantor(), 3, &budget()).unwrap();
        prop_assert!(s.len() <= c.len() * c.len());
        for p in c.iter() {
            prop_assert!(s.contains(&p));
            prop_assert!(s.contains(&(p * t)));
        }
    }
}
