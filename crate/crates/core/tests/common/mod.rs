#![allow(dead_code)]

use num_complex::Complex64;
use worldline::parser::parse_poly;
use worldline::poly::rat;
use worldline::{MultiPoly, PolySystem, Var};

pub const NINE_F1: &str = "-2*x^3+y^3+t*x+t*y+y+2";
pub const NINE_F2: &str = "-x^3-2*x^2*y+t+3";

pub const NINE_RY: &str = "-17*x^9+(4*t-4)*x^7+(3*t+25)*x^6+(4*t^2+16*t+12)*x^4\
    +(-3*t^2-18*t-27)*x^3+t^3+9*t^2+27*t+27";
pub const NINE_RX: &str = "17*y^9+(33*t+35)*y^7+(-6*t+52)*y^6+(15*t^2+34*t+19)*y^5\
    +(-16*t^2+8*t+40)*y^4+(-t^3+11*t^2+49*t+113)*y^3+(-18*t^3-72*t^2-50*t-12)*y^2\
    +(28*t^3+148*t^2+208*t+48)*y+t^4-48*t^2-5*t^3-96*t-64";

pub const SIX_F1: &str = "(3*x^3+7*y^3+6*t^3-2*x^2*y+5*x*y^2+7*t^2*x-4*t^2*y\
    +6*t*x^2-5*t*y^2-9*x*y*t)+(-x^2-3*y^2-9*t^2-x*y-10*t*x-11*t*y)\
    +(3*x+2*y-13*t)-8";
pub const SIX_F2: &str = "(7*x^2-12*y^2-4*t^2+17*x*y+5*t*x-11*t*y)+(19*x+21*y+3*t)+1";

pub const SIX_F1_GROUPED: &str = "(3*x^3-2*x^2*y+5*x*y^2+7*y^3)+(6*t-1)*x^2-(9*t+1)*x*y\
    -(5*t+3)*y^2+(7*t^2-10*t+3)*x-(4*t^2+11*t-2)*y+(6*t^3-9*t^2-13*t-8)";
pub const SIX_F2_GROUPED: &str = "(7*x^2+17*x*y-12*y^2)+(5*t+19)*x-(11*t-21)*y-(4*t^2-3*t-1)";

pub fn p(s: &str) -> MultiPoly {
    parse_poly(s).unwrap()
}

pub fn nine_root() -> PolySystem {
    PolySystem::parse(NINE_F1, NINE_F2).unwrap()
}

pub fn six_root() -> PolySystem {
    PolySystem::parse(SIX_F1, SIX_F2).unwrap()
}

pub fn linear() -> PolySystem {
    PolySystem::parse("x - t", "y - 2*t").unwrap()
}

/// Polynomial of total degree `deg` in `(x, y)` whose degree `deg - I` part has
/// coefficients of degree at most `I` in `t`; coefficients are taken from
/// `coeffs` cyclically.
pub fn structured(deg: u32, coeffs: &[i64]) -> MultiPoly {
    let (x, y, t) = (MultiPoly::var(Var::X), MultiPoly::var(Var::Y), MultiPoly::var(Var::T));
    let mut next = coeffs.iter().cycle();
    let mut out = MultiPoly::zero();
    for a in 0..=deg {
        for b in 0..=deg - a {
            for k in 0..=deg - a - b {
                let c = MultiPoly::from_int(*next.next().unwrap());
                out = &out + &(&(&c * &x.pow(a)) * &(&y.pow(b) * &t.pow(k)));
            }
        }
    }
    out
}

/// Rotation by the 3-4-5 angle: `x -> (3x - 4y)/5`, `y -> (4x + 3y)/5`.
pub fn rotate_345(p: &MultiPoly) -> MultiPoly {
    let (x, y) = (MultiPoly::var(Var::X), MultiPoly::var(Var::Y));
    let fifth = |a: i64, b: i64| (&x.scale(&rat(a, 5))) + (&y.scale(&rat(b, 5)));
    p.compose(&[Some(fifth(3, -4)), Some(fifth(4, 3)), None, None])
}

/// Pairs every element of `a` with a distinct nearest element of `b`; returns the largest gap.
pub fn matched_gap(a: &[[Complex64; 2]], b: &[[Complex64; 2]]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for p in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, (p[0] - q[0]).norm() + (p[1] - q[1]).norm()))
            .min_by(|u, v| u.1.total_cmp(&v.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
