mod common;

use std::f64::consts::PI;

use cantorlab::integrals::{
    block_integral, constants, energy_integral, est2_value, integrate_pk_dilated_lambda,
    integrate_pk_dlambda, mainest2_value, pest1_direct, pest1_value, pest2_value,
    pk_dlambda_atom_sum, verify_sequence, BlockQuadrature, DepthRule, Estimate, InnerMeasure,
    RatioSummary, TestMeasure, VerifyConfig,
};
use cantorlab::{natural_measure, Budget, CantorSpec, DiscreteMeasure, Rational};
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::default()
}

fn p_direct(s: f64) -> f64 {
    let mut v = 1.0;
    let mut x = 2.0 * PI * s / 4.0;
    while x.abs() > 1e-9 {
        v *= x.cos().powi(2);
        x /= 4.0;
    }
    v
}

#[test]
fn pk_against_cantor_measure_halves_per_level() {
    let one = Rational::from_integer(1);
    for k in 0..=8 {
        let spectral = integrate_pk_dlambda(k, 1e-13, &budget()).unwrap();
        let atoms = pk_dlambda_atom_sum(k, k + 2, &one, &budget()).unwrap();
        let exact = 0.5f64.powi(k as i32);
        assert!((spectral - exact).abs() < 1e-10, "K={k}: {spectral}");
        assert!((atoms - exact).abs() < 1e-14, "K={k}: {atoms}");
    }
}

#[test]
fn dilated_pairing_matches_atom_sum() {
    let s0 = Rational::from_integer(2);
    for k in 1..=5 {
        let spectral = integrate_pk_dilated_lambda(k, &s0, 1e-13, &budget()).unwrap();
        // the atom sum converges like 4^(K - depth)
        let atoms = pk_dlambda_atom_sum(k, k + 14, &s0, &budget()).unwrap();
        assert!((spectral - atoms).abs() < 1e-6, "K={k}: {spectral} {atoms}");
    }
}

#[test]
fn dirac_and_grid_test_measures() {
    let dirac = DiscreteMeasure::dirac(Rational::from_integer(0));
    for k in 0..12 {
        assert_eq!(est2_value(k, &dirac), 1.0);
    }
    for k in 1..=6 {
        let grid = natural_measure(&CantorSpec::full(4).unwrap(), k, &budget()).unwrap();
        let v = est2_value(k, &grid);
        assert!((v - 0.5f64.powi(k as i32)).abs() < 1e-14, "K={k}: {v}");
    }
}

#[test]
fn pest1_matches_direct_oracle() {
    for k in 1..=2 {
        let a = 4f64.powi(k);
        let oracle = common::simpson(p_direct, a, 4.0 * a, 40_000 * (k as usize));
        let v = pest1_value(k as u32, 12, 48).unwrap();
        assert!((v.value - oracle).abs() < v.error_bound + 1e-9, "K={k}: {} {oracle}", v.value);
    }
    for k in 1..=4 {
        let t = pest1_value(k, 10, 48).unwrap();
        let d = pest1_direct(k, 10, 16).unwrap();
        assert!(
            (t.value - d.value).abs() <= t.error_bound + d.error_bound,
            "K={k}: {t:?} {d:?}"
        );
    }
}

#[test]
fn pest1_rejects_coarse_grids() {
    assert!(pest1_value(3, 8, 4).is_err());
}

#[test]
fn mainest2_dirac_is_the_outer_integral() {
    let quad = BlockQuadrature::default();
    let inner = TestMeasure::Dirac.inner(&budget()).unwrap();
    for k in 1..=3 {
        let a = 4f64.powi(k);
        let oracle = common::simpson(common::abs_lambda_hat_sq, a, 4.0 * a, 4000 * 4usize.pow(k as u32));
        let b = mainest2_value(k as u32, &inner, &quad).unwrap();
        assert!((b.value - oracle).abs() <= b.error_bound, "K={k}: {b:?} vs {oracle}");
        assert!(b.kept <= b.nodes);
    }
}

#[test]
fn mainest2_with_atoms_matches_double_sum() {
    let quad = BlockQuadrature { prune: 0.0, ..Default::default() };
    let mu = natural_measure(&CantorSpec::cantor(), 3, &budget()).unwrap();
    let (ts, ws) = mu.to_f64();
    let inner = InnerMeasure::Atoms(mu);
    let f = |s: f64| {
        let j: f64 = ts.iter().zip(&ws).map(|(t, w)| w * common::abs_lambda_hat_sq(t * s)).sum();
        common::abs_lambda_hat_sq(s) * j
    };
    let oracle = common::simpson(f, 4.0, 16.0, 24_000);
    let b = mainest2_value(1, &inner, &quad).unwrap();
    assert!((b.value - oracle).abs() <= b.error_bound, "{b:?} vs {oracle}");
}

#[test]
fn mainest2_with_lebesgue_matches_double_integral() {
    let quad = BlockQuadrature { prune: 0.0, ..Default::default() };
    // J(s) = (1/s) int_0^s |lambda_hat|^2, accumulated on a fine grid
    let h = 1.0 / 2000.0;
    let mut cum = vec![0.0];
    let mut acc = 0.0;
    let n = (16.0 / h) as usize;
    for i in 0..n {
        let x = i as f64 * h;
        acc += h / 6.0
            * (common::abs_lambda_hat_sq(x)
                + 4.0 * common::abs_lambda_hat_sq(x + h / 2.0)
                + common::abs_lambda_hat_sq(x + h));
        cum.push(acc);
    }
    let j = |s: f64| cum[(s / h).round() as usize] / s;
    let f = |s: f64| common::abs_lambda_hat_sq(s) * j(s);
    let oracle = common::simpson(f, 4.0, 16.0, 24_000);
    let b = mainest2_value(1, &InnerMeasure::Lebesgue, &quad).unwrap();
    assert!((b.value - oracle).abs() <= b.error_bound + 1e-7, "{b:?} vs {oracle}");
}

#[test]
fn block_integral_weight_is_between_the_endpoints() {
    let quad = BlockQuadrature::default();
    let tau = 0.4;
    for k in 1..=3 {
        let b = block_integral(k, &InnerMeasure::Lebesgue, &quad, Some(tau)).unwrap();
        let w = b.weighted.unwrap();
        let a = 4f64.powi(k as i32);
        assert!(w <= b.value * a.powf(tau - 1.0) * (1.0 + 1e-12));
        assert!(w >= b.value * (4.0 * a).powf(tau - 1.0) * (1.0 - 1e-12));
    }
}

#[test]
fn block_quadrature_rejects_bad_settings() {
    let bad = BlockQuadrature { panel_nodes: 2, ..Default::default() };
    assert!(mainest2_value(1, &InnerMeasure::Lebesgue, &bad).is_err());
    let bad = BlockQuadrature { prune: 1.0, ..Default::default() };
    assert!(mainest2_value(1, &InnerMeasure::Lebesgue, &bad).is_err());
    let err = mainest2_value(13, &InnerMeasure::Lebesgue, &BlockQuadrature::default()).unwrap_err();
    assert!(err.is_budget());
}

#[test]
fn energy_blocks_are_bounded_and_summed() {
    let report = energy_integral(0.4, &InnerMeasure::Lebesgue, 4, &BlockQuadrature::default()).unwrap();
    assert_eq!(report.blocks.len(), 4);
    let mut sum = 0.0;
    for b in &report.blocks {
        assert!(b.increment > 0.0);
        assert!(b.increment <= b.block_bound + b.error_bound);
        sum += b.increment;
        assert!((b.partial_sum - sum).abs() < 1e-12);
    }
    assert!(report.decay_factor() > 0.0);
    assert!(energy_integral(1.0, &InnerMeasure::Lebesgue, 2, &BlockQuadrature::default()).is_err());
}

#[test]
fn pest2_factorizes_and_is_dominated_by_est2() {
    let mu = natural_measure(&CantorSpec::cantor(), 6, &budget()).unwrap();
    for k in 1..=4 {
        let s0 = Rational::new(3, 2);
        let s = 4f64.powi(k as i32) * 1.5;
        let v = pest2_value(k, s, &mu, 10).unwrap();
        assert!((v.value - v.factorized).abs() <= 2.0 * v.error_bound + 1e-12, "{v:?}");
        let dilated = mu.dilate(s0).unwrap();
        assert!(v.factorized <= est2_value(k, &dilated) + 1e-12);
    }
    assert!(pest2_value(2, 15.9, &mu, 8).is_err());
    assert!(pest2_value(2, 256.1, &mu, 8).is_err());
}

#[test]
fn rows_report_ratio_against_envelope() {
    let cfg = VerifyConfig::default();
    let rows = verify_sequence(Estimate::Pest1, 1..=6, &cfg).unwrap();
    for r in &rows {
        assert_eq!(r.method, "factorized-transfer");
        assert!((r.envelope - 2f64.powi(r.k as i32)).abs() < 1e-9);
        assert_eq!(r.ratio, r.lhs / r.envelope);
        assert!(r.error_bound < 1e-6 * r.lhs);
    }
    let s = RatioSummary::from_rows(&rows).unwrap();
    assert!(s.spread < 1.01, "{s:?}");
    assert!(RatioSummary::from_rows(&[]).is_none());
}

#[test]
fn envelopes_use_the_measure_exponent() {
    let k = constants();
    let a = 0.5;
    let e = Estimate::Mainest2.envelope(3, a);
    assert!((e - 4f64.powf((1.0 - k.c - a / 2.0) * 3.0)).abs() < 1e-12);
    let e = Estimate::Est2.envelope(2, 1.0);
    assert!((e - (6f64.sqrt() / 4.0).powi(2)).abs() < 1e-12);
    for est in Estimate::ALL {
        assert_eq!(est.name().parse::<Estimate>().unwrap(), est);
    }
    assert!("bogus".parse::<Estimate>().is_err());
}

#[test]
fn sequences_do_not_depend_on_thread_count() {
    let cfg = VerifyConfig {
        measure: TestMeasure::cantor(0),
        depth: DepthRule::AboveK(2),
        ..Default::default()
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| verify_sequence(Estimate::Est2, 1..=6, &cfg).unwrap())
    };
    let a: Vec<String> = run(1).iter().map(|r| r.to_csv()).collect();
    let b: Vec<String> = run(3).iter().map(|r| r.to_csv()).collect();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn est2_is_an_average_of_weights(k in 0u32..8, depth in 0u32..6, num in 1i128..40, den in 1i128..9) {
        let mu = natural_measure(&CantorSpec::cantor(), depth, &budget())
            .unwrap()
            .dilate(Rational::new(num, den))
            .unwrap();
        let v = est2_value(k, &mu);
        prop_assert!((-1e-15..=1.0 + 1e-12).contains(&v));
        prop_assert!(est2_value(k + 1, &mu) <= v + 1e-12);
    }

    #[test]
    fn pest2_lies_in_unit_interval(k in 1u32..5, frac in 0.0f64..1.0) {
        let mu = natural_measure(&CantorSpec::cantor(), 4, &budget()).unwrap();
        let s = 4f64.powi(k as i32) * (1.0 + 15.0 * frac);
        let v = pest2_value(k, s, &mu, 8).unwrap();
        prop_assert!(v.value >= -v.error_bound && v.value <= 1.0 + v.error_bound);
    }
}
