use advpos::region::{
    corner_theta, eval_p8, even_m_negativity_witness, jll_check, nu_interval_numeric, nu_l,
    nu_l_limit, nu_r, nu_r_bracket, region_scan, root_y_l, root_y_r, theta_cap, theta_crit,
    y_r_bracket, Y_ROOT_TOL,
};
use advpos::{is_positivity_preserving, FullStepParams, NuBound, SchemeKind};
use approx::assert_abs_diff_eq;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn positivity_matches_closed_form_boundaries(
        k in 1u32..=8,
        theta in 0.01f64..=1.0,
        log_nu in -1.0f64..2.5,
    ) {
        let nu = 10f64.powf(log_nu);
        let lo = nu_r(k, theta).unwrap();
        let hi = nu_l(k, theta).unwrap();
        let near = |b: f64| (nu - b).abs() <= 1e-8 * b;
        prop_assume!(!near(lo) && !hi.finite().is_some_and(near));
        let p = FullStepParams::new(SchemeKind::Centered2, 2 * k as usize + 1, theta, nu).unwrap();
        let v = is_positivity_preserving(&p, 1e-13).unwrap();
        prop_assert_eq!(v.preserving, lo <= nu && hi.admits(nu));
    }
}

#[test]
fn monotonicity_in_k() {
    let mut prev_y = 0.0;
    let mut prev_tc = 0.0;
    for k in 1..=20 {
        let y = root_y_r(k, Y_ROOT_TOL).unwrap();
        assert!(y > prev_y);
        prev_y = y;
        let tc = theta_crit(k).unwrap();
        assert!(
            tc > prev_tc && (0.5 - 1e-12..theta_cap(k)).contains(&tc),
            "k={k} {tc}"
        );
        prev_tc = tc;
        for theta in [0.5, 0.8, 1.0] {
            assert!(nu_r(k + 1, theta).unwrap() > nu_r(k, theta).unwrap());
        }
        // nu_L decreases in k while finite, until it sits on its limit to root precision
        for theta in [0.6, 0.9] {
            if let (NuBound::Finite(a), NuBound::Finite(b)) =
                (nu_l(k, theta).unwrap(), nu_l(k + 1, theta).unwrap())
            {
                assert!(b < a || (a - b).abs() < 1e-10 * a, "k={k} theta={theta}");
            }
        }
    }
}

#[test]
fn root_brackets_hold_to_k_50() {
    for k in 1..=50 {
        let y = root_y_r(k, Y_ROOT_TOL).unwrap();
        let (lo, hi) = y_r_bracket(k).unwrap();
        assert!(lo < y && y < hi, "k={k}");
        for theta in [0.5, 0.75, 1.0] {
            let v = nu_r(k, theta).unwrap();
            let (lo, hi) = nu_r_bracket(k, theta).unwrap();
            assert!(lo < v && v < hi, "k={k} theta={theta}");
        }
    }
}

#[test]
fn nu_l_approaches_its_limit() {
    let limit = nu_l_limit(0.9).unwrap();
    let v = nu_l(200, 0.9).unwrap().finite().unwrap();
    assert!(v > limit && v - limit < 1e-2 * limit);
    assert!(root_y_l(2, 0.85, Y_ROOT_TOL).is_err());
}

#[test]
fn numeric_interval_matches_closed_form_for_centered2() {
    for (k, theta) in [(1, 0.6), (2, 0.75), (3, 0.9), (2, 1.0)] {
        let m = 2 * k as usize + 1;
        let s = nu_interval_numeric(SchemeKind::Centered2, m, theta, 1e3, 1e-12).unwrap();
        assert_eq!(s.intervals.len(), 1, "k={k} theta={theta}");
        let iv = s.intervals[0];
        let lo = nu_r(k, theta).unwrap();
        assert_abs_diff_eq!(iv.lo, lo, epsilon = 1e-6 * lo);
        match nu_l(k, theta).unwrap() {
            NuBound::Finite(hi) => {
                assert_abs_diff_eq!(iv.hi.finite().unwrap(), hi, epsilon = 1e-6 * hi)
            }
            NuBound::Infinite => assert!(iv.hi.is_infinite()),
        }
    }
}

#[test]
fn higher_order_region_exists_beyond_corner() {
    let s = nu_interval_numeric(SchemeKind::Centered4, 5, 0.9, 1000.0, 1e-5).unwrap();
    assert!(!s.is_empty());
    let s = nu_interval_numeric(SchemeKind::Centered4, 5, 0.7, 1e4, 1e-10).unwrap();
    assert!(s.is_empty());
}

#[test]
fn corner_of_centered2_is_theta_k() {
    assert_abs_diff_eq!(
        corner_theta(SchemeKind::Centered2, 3, 1e-8).unwrap(),
        0.5,
        epsilon = 1e-6
    );
    for k in [2, 3] {
        let m = 2 * k as usize + 1;
        let c = corner_theta(SchemeKind::Centered2, m, 1e-8).unwrap();
        assert_abs_diff_eq!(c, theta_crit(k).unwrap(), epsilon = 1e-6);
    }
}

#[test]
fn spectral_corners() {
    // no published reference; values pinned from this implementation
    for (m, want) in [(5, 0.69873), (7, 0.78550), (9, 0.83365)] {
        let c = corner_theta(SchemeKind::Spectral, m, 1e-7).unwrap();
        assert_abs_diff_eq!(c, want, epsilon = 1e-4);
    }
}

#[test]
fn corner_rejects_upwind_and_even_m() {
    assert!(corner_theta(SchemeKind::Upwind1, 5, 1e-6).is_err());
    assert!(corner_theta(SchemeKind::Spectral, 6, 1e-6).is_err());
}

#[test]
fn even_m_scan_is_all_false() {
    let thetas: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let nus: Vec<f64> = (0..30).map(|i| 10f64.powf(-2.0 + i as f64 / 7.0)).collect();
    let scan = region_scan(SchemeKind::Centered2, 4, &thetas, &nus, 1e-12).unwrap();
    assert_eq!(scan.nonneg_count(), 0);
    assert_eq!(scan.samples.len(), thetas.len() * nus.len());
}

#[test]
fn three_point_scan_follows_closed_form() {
    let nus: Vec<f64> = (3..=10).map(f64::from).collect();
    let scan = region_scan(SchemeKind::Centered2, 3, &[0.75], &nus, 1e-12).unwrap();
    let lo = 2.0 / 0.75;
    // theta = 0.75 >= 2/3, so the upper bound is infinite
    assert!(nu_l(1, 0.75).unwrap().is_infinite());
    for s in &scan.samples {
        assert_eq!(s.nonneg, s.nu >= lo, "nu={}", s.nu);
    }
    let scan = region_scan(SchemeKind::Centered2, 3, &[0.6], &nus, 1e-12).unwrap();
    let hi = 2.0 / (0.6f64 * (2.0 - 1.8)).sqrt();
    for s in &scan.samples {
        assert_eq!(s.nonneg, s.nu >= 2.0 / 0.6 && s.nu <= hi, "nu={}", s.nu);
    }
}

#[test]
fn spectral_five_point_region_is_non_empty() {
    let thetas: Vec<f64> = (0..20).map(|i| 0.7 + 0.3 * i as f64 / 19.0).collect();
    let nus: Vec<f64> = (0..60).map(|i| 10f64.powf(i as f64 / 20.0)).collect();
    let scan = region_scan(SchemeKind::Spectral, 5, &thetas, &nus, 1e-12).unwrap();
    assert!(scan.nonneg_count() > 0);
}

#[test]
fn even_m_witnesses_are_negative() {
    assert!(even_m_negativity_witness(SchemeKind::Centered2, 6, 1.0, 1.0).unwrap() < 0.0);
    assert!(even_m_negativity_witness(SchemeKind::Centered4, 8, 0.5, 50.0).unwrap() < 0.0);
    for i in 0..20 {
        let theta = 0.05 + 0.95 * ((i * 7) % 20) as f64 / 19.0;
        let nu = 10f64.powf(-2.0 + 4.0 * i as f64 / 19.0);
        let w = even_m_negativity_witness(SchemeKind::Spectral, 8, theta, nu).unwrap();
        assert_eq!(
            w.signum(),
            eval_p8(std::f64::consts::PI * theta * nu).signum()
        );
    }
}

#[test]
fn p8_is_negative_on_a_dense_grid() {
    for i in 0..=20_000 {
        assert!(eval_p8(i as f64 / 200.0) < 0.0);
    }
}

// For q = 3 the lower side of the power-sum condition also fails on a bounded
// window; the published thresholds track the upper side only.
#[test]
fn lower_power_sum_side_fails_on_a_window() {
    let c = jll_check(5, 1.0, 1.0, 4, 3).unwrap();
    assert!(!c.lower_holds);
    let c = jll_check(5, 1.0, 2.0, 4, 3).unwrap();
    assert!(c.lower_holds && c.upper_holds);
}
