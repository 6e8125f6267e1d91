mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use worldline::config::Tolerances;
use worldline::elimination::eliminants;
use worldline::poly::{int, rat, rational_to_f64, Var};
use worldline::roots::{classify_real, solve_at, RootSet};
use worldline::univariate::UniPolyInT;

use common::*;

fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn max_matched_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (w - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn vieta_checks(e: &UniPolyInT, rs: &RootSet) {
    let c = e.at(&rs.t);
    let n = e.degree();
    let lead = c.coeff(n);
    let sum: Complex64 = rs.roots.iter().sum();
    let expect_sum = rational_to_f64(&(-c.coeff(n - 1) / &lead)).unwrap();
    let scale: f64 = rs.roots.iter().map(|z| z.norm()).sum::<f64>() + 1.0;
    assert!((sum - expect_sum).norm() <= 1e-9 * scale, "sum {sum} vs {expect_sum}");
    let prod: Complex64 = rs.roots.iter().product();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let expect_prod = sign * rational_to_f64(&(c.coeff(0) / &lead)).unwrap();
    let pscale: f64 = rs.roots.iter().map(|z| z.norm().max(1.0)).product();
    assert!((prod - expect_prod).norm() <= 1e-8 * pscale, "product {prod} vs {expect_prod}");
}

fn assert_conjugate_closed(rs: &RootSet, tol: &Tolerances) {
    for z in &rs.roots {
        if z.im.abs() >= tol.real {
            assert!(rs.roots.iter().any(|w| (w - z.conj()).norm() < tol.conj));
        }
    }
    classify_real(&rs.roots, tol.real, tol.conj).unwrap();
}

#[test]
fn nine_root_eliminant_has_zero_root_at_minus_three() {
    let e = UniPolyInT::from_multi(&p(NINE_RY), Var::X).unwrap();
    let rs = solve_at(&e, &int(-3), None, &Tolerances::default()).unwrap();
    assert_eq!(rs.len(), 9);
    assert!(rs.roots.iter().any(|z| z.norm() < 1e-6), "{:?}", rs.roots);
}

#[test]
fn six_root_eliminant_matches_companion_oracle() {
    let el = eliminants(&six_root()).unwrap();
    let tol = Tolerances::default();
    for t in [int(0), rat(1, 3), int(-2)] {
        for e in [&el.ry.poly, &el.rx.poly] {
            let rs = solve_at(e, &t, None, &tol).unwrap();
            assert_eq!(rs.len(), 6);
            let coeffs: Vec<f64> = e.at(&t).coeffs().iter().map(|c| rational_to_f64(c).unwrap()).collect();
            let oracle = companion_roots(&coeffs);
            assert!(max_matched_distance(&rs.roots, &oracle) < 1e-8);
            vieta_checks(e, &rs);
            assert_conjugate_closed(&rs, &tol);
        }
    }
}

#[test]
fn nine_root_vieta_and_closure_over_time() {
    let el = eliminants(&nine_root()).unwrap();
    let tol = Tolerances::default();
    let mut prev: Option<RootSet> = None;
    for k in -10..=10 {
        let t = rat(k, 4);
        let rs = solve_at(&el.ry.poly, &t, prev.as_ref(), &tol).unwrap();
        vieta_checks(&el.ry.poly, &rs);
        assert_conjugate_closed(&rs, &tol);
        prev = Some(rs);
    }
}
