mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use worldline::config::{uniform_grid, Tolerances};
use worldline::elimination::leading_coeff_check;
use worldline::poly::{int, rat, rational_to_f64};
use worldline::sturm::SturmSequence;
use worldline::tracker::{EventKind, Tracker, TrajectorySample};
use worldline::{PolySystem, Rational};

use common::*;

/// Motion of every particle at `t0` and at `t0 +- h`, neighbours matched by position.
struct Stencil {
    v: Vec<[Complex64; 2]>,
    a: Vec<[Complex64; 2]>,
    minus: Vec<[Complex64; 2]>,
    plus: Vec<[Complex64; 2]>,
    minus_v: Vec<[Complex64; 2]>,
    plus_v: Vec<[Complex64; 2]>,
    h: f64,
}

fn nearest(sample: &TrajectorySample, at: [Complex64; 2]) -> usize {
    (0..sample.particles.len())
        .min_by(|&i, &j| {
            let d = |k: usize| (sample.particles[k].x - at[0]).norm() + (sample.particles[k].y - at[1]).norm();
            d(i).total_cmp(&d(j))
        })
        .unwrap()
}

fn stencil(tr: &Tracker, mid: &TrajectorySample, h: &Rational) -> Stencil {
    let t0 = &mid.t;
    let (_, _, lo) = tr.snapshot(&(t0 - h), None, false).unwrap();
    let (_, _, hi) = tr.snapshot(&(t0 + h), None, false).unwrap();
    assert!(!mid.near_event && !lo.near_event && !hi.near_event);
    let mut s = Stencil {
        v: Vec::new(),
        a: Vec::new(),
        minus: Vec::new(),
        plus: Vec::new(),
        minus_v: Vec::new(),
        plus_v: Vec::new(),
        h: rational_to_f64(h).unwrap(),
    };
    for (k, p) in mid.particles.iter().enumerate() {
        let v = mid.velocities[k].unwrap();
        let guess = |sign: f64| [p.x + v[0] * sign * s.h, p.y + v[1] * sign * s.h];
        let i = nearest(&lo, guess(-1.0));
        let j = nearest(&hi, guess(1.0));
        s.v.push(v);
        s.a.push(mid.accelerations[k].unwrap());
        s.minus.push([lo.particles[i].x, lo.particles[i].y]);
        s.plus.push([hi.particles[j].x, hi.particles[j].y]);
        s.minus_v.push(lo.velocities[i].unwrap());
        s.plus_v.push(hi.velocities[j].unwrap());
    }
    s
}

/// Largest finite-difference error of velocity, acceleration and the kinetic balance.
fn fd_errors(tr: &Tracker, t0: &Rational, h: &Rational) -> [f64; 3] {
    let (_, _, mid) = tr.snapshot(t0, None, false).unwrap();
    let s = stencil(tr, &mid, h);
    let mut err = [0.0f64; 3];
    for (k, p) in mid.particles.iter().enumerate() {
        let here = [p.x, p.y];
        for c in 0..2 {
            let dv = (s.plus[k][c] - s.minus[k][c]) / (2.0 * s.h);
            let da = (s.plus[k][c] - 2.0 * here[c] + s.minus[k][c]) / (s.h * s.h);
            err[0] = err[0].max((dv - s.v[k][c]).norm() / (1.0 + s.v[k][c].norm()));
            err[1] = err[1].max((da - s.a[k][c]).norm() / (1.0 + s.a[k][c].norm()));
        }
        let sq = |v: [Complex64; 2]| v[0] * v[0] + v[1] * v[1];
        let d_kinetic = (sq(s.plus_v[k]) - sq(s.minus_v[k])) / (4.0 * s.h);
        let power = s.a[k][0] * s.v[k][0] + s.a[k][1] * s.v[k][1];
        err[2] = err[2].max((d_kinetic - power).norm() / (1.0 + power.norm()));
    }
    err
}

fn assert_second_order(tr: &Tracker, t0: &Rational, h: &Rational) {
    let coarse = fd_errors(tr, t0, h);
    let fine = fd_errors(tr, t0, &(h / int(2)));
    for (c, f) in coarse.iter().zip(&fine) {
        assert!(*c < 1e-2, "coarse error {c}");
        if *f > 1e-9 {
            let ratio = c / f;
            assert!((3.0..5.5).contains(&ratio), "halving h shrank the error by {ratio} ({c} -> {f})");
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let tol = Tolerances::default();
    let nine = Tracker::new(&nine_root(), &tol).unwrap();
    assert_second_order(&nine, &rat(1, 2), &rat(1, 100));
    assert_second_order(&nine, &rat(-9, 5), &rat(1, 100));
    let six = Tracker::new(&six_root(), &tol).unwrap();
    assert_second_order(&six, &rat(1, 3), &rat(1, 100));
    assert_second_order(&six, &rat(-4, 1), &rat(1, 100));
}

#[test]
fn linear_motion_has_no_events() {
    let tol = Tolerances::default();
    let tr = Tracker::new(&linear(), &tol).unwrap();
    let traj = tr.track(&uniform_grid(&int(-3), &int(3), 13)).unwrap();
    assert!(traj.events.is_empty());
    assert!(traj.samples.iter().all(|s| !s.near_event && s.real_count() == 1));
}

fn check_event_counts(sys: &PolySystem, range: (i64, i64), steps: usize, expected: usize) {
    let tol = Tolerances::default();
    let tr = Tracker::new(sys, &tol).unwrap();
    let grid = uniform_grid(&int(range.0), &int(range.1), steps);
    let traj = tr.track(&grid).unwrap();
    assert_eq!(traj.events.len(), expected);
    for e in &traj.events {
        assert_eq!(e.real_before.abs_diff(e.real_after), 2);
        match e.kind {
            EventKind::Creation => assert!(e.real_after > e.real_before),
            EventKind::Annihilation => assert!(e.real_after < e.real_before),
            EventKind::Touch => panic!("unexpected touch"),
        }
        let t = e.approx_time();
        let before = traj.samples.iter().rev().find(|s| s.t_f64() < t && !s.near_event).unwrap();
        let after = traj.samples.iter().find(|s| s.t_f64() > t && !s.near_event).unwrap();
        let next_event = traj
            .events
            .iter()
            .map(|f| f.approx_time())
            .filter(|&u| u != t)
            .any(|u| (before.t_f64()..after.t_f64()).contains(&u));
        if !next_event {
            assert_eq!(before.real_count().abs_diff(after.real_count()), 2, "around t = {t}");
        }
    }
}

#[test]
fn events_change_the_real_count_by_two() {
    check_event_counts(&nine_root(), (-5, 5), 201, 4);
    check_event_counts(&six_root(), (-5, 5), 201, 2);
}

#[test]
fn six_root_event_polynomial() {
    let tr = Tracker::new(&six_root(), &Tolerances::default()).unwrap();
    assert_eq!(tr.d.degree(), Some(18));
    let sturm = SturmSequence::new(&tr.d);
    let big = int(1_000_000);
    assert_eq!(sturm.count(&-big.clone(), &big), 2);
}

#[test]
fn halving_the_step_keeps_identities() {
    let tol = Tolerances::default();
    for (sys, lo, hi) in [(nine_root(), -2, 3), (six_root(), -5, 4)] {
        let tr = Tracker::new(&sys, &tol).unwrap();
        let coarse = tr.track(&uniform_grid(&int(lo), &int(hi), 21)).unwrap();
        let fine = tr.track(&uniform_grid(&int(lo), &int(hi), 41)).unwrap();
        assert!(coarse.events.is_empty());
        for (k, s) in coarse.samples.iter().enumerate() {
            let f = &fine.samples[2 * k];
            assert_eq!(s.t, f.t);
            for (p, q) in s.particles.iter().zip(&f.particles) {
                assert_eq!(p.id, q.id);
                assert!((p.x - q.x).norm() + (p.y - q.y).norm() < 1e-9, "id {} at t = {}", p.id, s.t);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn random_systems_are_second_order(
        c1 in prop::collection::vec(-5i64..=5, 10),
        c2 in prop::collection::vec(-5i64..=5, 10),
        tn in -6i64..=6,
    ) {
        let sys = PolySystem::new(structured(2, &c1), structured(2, &c2));
        prop_assume!(sys.is_ok());
        let sys = sys.unwrap();
        prop_assume!(leading_coeff_check(&sys).is_ok());
        let tol = Tolerances::default();
        let tr = Tracker::new(&sys, &tol).unwrap();
        let t0 = rat(tn, 2);
        let margin = rat(1, 5);
        if tr.d.degree().unwrap_or(0) > 0 {
            prop_assume!(SturmSequence::new(&tr.d).count(&(&t0 - &margin), &(&t0 + &margin)) == 0);
        }
        let h = rat(1, 200);
        let ok = [&t0 - &h, t0.clone(), &t0 + &h, &t0 - &h / int(2), &t0 + &h / int(2)]
            .iter()
            .all(|t| tr.snapshot(t, None, false).is_ok_and(|s| !s.2.near_event));
        prop_assume!(ok);
        let coarse = fd_errors(&tr, &t0, &h);
        let fine = fd_errors(&tr, &t0, &(&h / int(2)));
        for (c, f) in coarse.iter().zip(&fine) {
            prop_assert!(*f < 1e-3, "fine error {f}");
            if *f > 1e-8 {
                prop_assert!(c / f > 2.5, "error ratio {} ({c} -> {f})", c / f);
            }
        }
    }
}
