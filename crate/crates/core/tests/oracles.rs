//! Independent reference values: hand-expanded small cases, recursions for
//! the entry numerators, dense eigenvalues and known limits.

use advpos::closed_form::{det_d_recursive, y_from};
use advpos::fullstep::l_eigenvalues;
use advpos::region::eval_p8;
use advpos::{
    build_l, build_m_direct, build_m_trig, large_nu_limit_row, FullStepParams, SchemeKind,
};
use approx::{assert_abs_diff_eq, assert_relative_eq};
use nalgebra::DMatrix;
use std::f64::consts::PI;

fn trig_row(kind: SchemeKind, m: usize, theta: f64, nu: f64) -> Vec<f64> {
    let p = FullStepParams::new(kind, m, theta, nu).unwrap();
    build_m_trig(&p).unwrap().matrix.into_first_row()
}

const SAMPLES: [(f64, f64); 6] = [
    (0.0, 0.3),
    (0.25, 1.7),
    (0.5, 4.0),
    (0.7, 0.05),
    (0.9, 12.0),
    (1.0, 2.0),
];

#[test]
fn three_point_rows_by_hand() {
    for (t, n) in SAMPLES {
        let den = 0.75 * t * t * n * n + 1.0;
        let want = [
            0.75 * t * t * n * n - 0.5 * t * n * n + 1.0,
            0.25 * t * n * n + 0.5 * n,
            0.25 * t * n * n - 0.5 * n,
        ];
        let got = trig_row(SchemeKind::Centered2, 3, t, n);
        for j in 0..3 {
            assert_abs_diff_eq!(got[j], want[j] / den, epsilon = 1e-13);
        }
    }
}

#[test]
fn five_point_rows_by_hand() {
    for (t, n) in SAMPLES {
        let (t2, t3, t4) = (t * t, t * t * t, t.powi(4));
        let (n2, n3, n4) = (n * n, n * n * n, n.powi(4));
        let den = 5.0 * t4 * n4 / 16.0 + 1.25 * t2 * n2 + 1.0;
        let want = [
            5.0 * t4 * n4 / 16.0 - t3 * n4 / 4.0 + 1.25 * t2 * n2 - t * n2 / 2.0 + 1.0,
            t3 * n4 / 16.0 + t2 * n3 / 4.0 + n / 2.0,
            t3 * n4 / 16.0 - t2 * n3 / 8.0 + t * n2 / 4.0,
            t3 * n4 / 16.0 + t2 * n3 / 8.0 + t * n2 / 4.0,
            t3 * n4 / 16.0 - t2 * n3 / 4.0 - n / 2.0,
        ];
        let got = trig_row(SchemeKind::Centered2, 5, t, n);
        for j in 0..5 {
            assert_abs_diff_eq!(got[j], want[j] / den, epsilon = 1e-12);
        }
    }
}

fn second_order(k: u32, mu: f64, first: f64, second: f64) -> f64 {
    let mut v = vec![first, second];
    while v.len() < k as usize {
        let n = v.len();
        v.push((1.0 + mu / 2.0) * v[n - 1] - mu * mu / 16.0 * v[n - 2]);
    }
    v[k as usize - 1]
}

fn third_order(k: u32, mu: f64, init: [f64; 3]) -> f64 {
    let mut v = init.to_vec();
    while v.len() < k as usize {
        let n = v.len();
        v.push(
            (1.0 + 0.75 * mu) * v[n - 1] - (mu / 4.0 + 3.0 * mu * mu / 16.0) * v[n - 2]
                + mu.powi(3) / 64.0 * v[n - 3],
        );
    }
    v[k as usize - 1]
}

#[test]
fn entry_numerators_follow_their_recursions() {
    for (theta, nu) in [(0.3, 0.8), (0.6, 2.5), (1.0, 1.0), (0.8, 6.0)] {
        let mu: f64 = theta * theta * nu * nu;
        let s = mu.sqrt();
        let y = y_from(theta, nu).unwrap().value();
        for k in 1..=10u32 {
            let m = 2 * k as usize + 1;
            let row = trig_row(SchemeKind::Centered2, m, theta, nu);
            let d = det_d_recursive(k, mu).unwrap();

            let p1 = second_order(
                k,
                mu,
                1.0 + 0.75 * mu - mu / (2.0 * theta),
                1.0 + 1.25 * mu + 5.0 * mu * mu / 16.0
                    - mu / (2.0 * theta)
                    - mu * mu / (4.0 * theta),
            );
            let p2 = third_order(
                k,
                mu,
                [
                    (0.5 + s / 4.0) * nu,
                    (0.5 + mu / 4.0 + mu * s / 16.0) * nu,
                    (0.5 + mu / 2.0 + 3.0 * mu * mu / 32.0 + mu * mu * s / 64.0) * nu,
                ],
            );
            let p3 = third_order(
                k,
                mu,
                [
                    (-0.5 + s / 4.0) * nu,
                    (s / 4.0 - mu / 8.0 + mu * s / 16.0) * nu,
                    (s / 4.0 - mu * mu / 32.0 + 3.0 * mu * s / 16.0 + mu * mu * s / 64.0) * nu,
                ],
            );
            assert_relative_eq!(row[0], p1 / d, max_relative = 1e-9, epsilon = 1e-12);
            assert_relative_eq!(row[1], p2 / d, max_relative = 1e-9, epsilon = 1e-12);
            assert_relative_eq!(row[2], p3 / d, max_relative = 1e-9, epsilon = 1e-12);

            // closed forms of the same numerators in y
            let kk = k as i32;
            let base = nu * (1.0 - y * y).powi(1 - 2 * kk) / (2.0 * (1.0 + y * y));
            let c2 = base * (1.0 + y.powi(2 * kk - 1) + y.powi(2 * kk + 1) - y.powi(4 * kk));
            let c3 = base * (y - y.powi(2 * kk - 2) + y.powi(2 * kk + 2) + y.powi(4 * kk - 1));
            assert_relative_eq!(p2, c2, max_relative = 1e-9);
            assert_relative_eq!(p3, c3, max_relative = 1e-9);
        }
    }
}

fn dense_eigenvalues(kind: SchemeKind, m: usize) -> Vec<num_complex::Complex64> {
    let l = build_l(kind, m).unwrap().to_dense();
    let a = DMatrix::from_fn(m, m, |i, j| l[i][j]);
    a.complex_eigenvalues().iter().copied().collect()
}

#[test]
fn spectra_match_dense_eigenvalues() {
    for (kind, m) in [
        (SchemeKind::Upwind1, 4),
        (SchemeKind::Upwind1, 7),
        (SchemeKind::Centered2, 6),
        (SchemeKind::Centered4, 9),
        (SchemeKind::Spectral, 8),
    ] {
        let mut ours = l_eigenvalues(kind, m).unwrap();
        let mut dense = dense_eigenvalues(kind, m);
        assert_eq!(ours.len(), dense.len());
        // match each dense eigenvalue to the nearest unused one
        for d in dense.drain(..) {
            let (idx, dist) = ours
                .iter()
                .enumerate()
                .map(|(i, v)| (i, (v - d).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(
                dist < 1e-10,
                "{kind} m={m}: eigenvalue {d} unmatched ({dist:e})"
            );
            ours.swap_remove(idx);
        }
    }
}

#[test]
fn upwind_four_point_spectrum() {
    let e = l_eigenvalues(SchemeKind::Upwind1, 4).unwrap();
    let want = [(0.0, 0.0), (-1.0, 1.0), (-2.0, 0.0), (-1.0, -1.0)];
    for (v, (re, im)) in e.iter().zip(want) {
        assert_abs_diff_eq!(v.re, re, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, im, epsilon = 1e-15);
    }
}

#[test]
fn explicit_euler_is_identity_plus_nu_l() {
    for kind in SchemeKind::ALL {
        let m = kind.min_order() + 3;
        let l = build_l(kind, m).unwrap();
        let row = trig_row(kind, m, 0.0, 0.37);
        for (j, (got, lj)) in row.iter().zip(l.first_row()).enumerate() {
            let want = if j == 0 { 1.0 } else { 0.0 } + 0.37 * lj;
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
    }
}

#[test]
fn large_nu_limit_for_odd_centered2() {
    for (m, theta) in [(3, 0.5), (5, 0.8), (9, 1.0), (13, 0.65)] {
        let mf = m as f64;
        let limit = large_nu_limit_row(SchemeKind::Centered2, m, theta)
            .unwrap()
            .unwrap();
        assert_abs_diff_eq!(limit[0], 1.0 - (mf - 1.0) / (mf * theta), epsilon = 1e-13);
        for v in &limit[1..] {
            assert_abs_diff_eq!(*v, 1.0 / (mf * theta), epsilon = 1e-13);
        }
        let far = trig_row(SchemeKind::Centered2, m, theta, 1e7);
        for (a, b) in far.iter().zip(&limit) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-5);
        }
    }
    assert!(large_nu_limit_row(SchemeKind::Centered2, 5, 0.0)
        .unwrap()
        .is_none());
}

#[test]
fn direct_route_on_the_permutation_instance() {
    let p = FullStepParams::new(SchemeKind::Centered2, 3, 0.5, 4.0).unwrap();
    let d = build_m_direct(&p).unwrap();
    for (got, want) in d.first_row().iter().zip([0.0, 1.0, 0.0]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
    }
}

// M_{1,8} prod_{l=2..4} (1 + theta^2 nu^2 lambda_l^2) / nu equals a fixed
// positive multiple of p_8(pi theta nu)
#[test]
fn spectral_eight_point_corner_entry_is_proportional_to_p8() {
    let lambdas = [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0];
    let mut ratios = Vec::new();
    for (theta, nu) in [
        (0.2, 0.3),
        (0.5, 1.0),
        (0.9, 3.0),
        (1.0, 0.05),
        (0.35, 20.0),
    ] {
        let row = trig_row(SchemeKind::Spectral, 8, theta, nu);
        let scale: f64 = lambdas
            .iter()
            .map(|l: &f64| 1.0 + (theta * nu * l).powi(2))
            .product();
        ratios.push(row[7] * scale / nu / eval_p8(PI * theta * nu));
    }
    assert!(ratios[0] > 0.0);
    for r in &ratios[1..] {
        assert_relative_eq!(*r, ratios[0], max_relative = 1e-8);
    }
}
