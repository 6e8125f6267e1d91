mod common;

use common::*;
use worldline::elimination::{eliminants, leading_coeff_check};
use worldline::poly::int;
use worldline::Var;

#[test]
fn nine_root_eliminants_match_printed_forms() {
    let e = eliminants(&nine_root()).unwrap();
    let fx = e.ry.proportionality_to(&p(NINE_RY));
    let fy = e.rx.proportionality_to(&p(NINE_RX));
    println!("R_y = {} ; factor {:?}", e.ry.poly, fx);
    println!("R_x = {} ; factor {:?}", e.rx.poly, fy);
    assert!(fx.is_some());
    assert!(fy.is_some());
}

#[test]
fn six_root_leading_terms() {
    let sys = six_root();
    assert_eq!((sys.n, sys.m, sys.root_count()), (3, 2, 6));
    let e = eliminants(&sys).unwrap();
    assert_eq!(e.ry.leading_constant(), Some(int(-358343)));
    assert_eq!(e.rx.leading_constant(), Some(int(-358343)));
    assert_eq!(e.ry.poly.coeff(5).to_multi(Var::T), p("-374447*t-1176858"));
    assert_eq!(e.ry.poly.coeff(4).to_multi(Var::T), p("103876*t^2-864563*t-1155352"));
    assert_eq!(e.rx.poly.coeff(5).to_multi(Var::T), p("145966*t-95313"));
    assert_eq!(e.rx.poly.coeff(4).to_multi(Var::T), p("2828*t^2+968047*t-354945"));
    let lc = leading_coeff_check(&sys).unwrap();
    println!("{lc:?}");
    assert!(lc.consistent());
}

#[test]
fn grouped_and_raw_forms_agree() {
    assert_eq!(p(SIX_F1), p(SIX_F1_GROUPED));
    assert_eq!(p(SIX_F2), p(SIX_F2_GROUPED));
}
