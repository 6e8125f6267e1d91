//! Sylvester resultants and the dual eliminants of a generating system.
//!
//! Determinants are computed exactly, either by fraction-free Bareiss
//! elimination over the polynomial ring, or by evaluating all free variables at
//! integer points, taking scalar determinants and interpolating back. The
//! automatic strategy starts with Bareiss and switches to interpolation when
//! an intermediate entry grows past a term budget.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{int, Bindings, MultiPoly, Rational, Var};
use crate::system::PolySystem;
use crate::univariate::UniPolyInT;
use crate::upoly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Bareiss,
    Interpolation,
}

#[derive(Clone, Copy, Debug)]
pub struct ResultantOptions {
    pub strategy: Strategy,
    /// Largest entry (in terms) Bareiss may produce under `Strategy::Auto`.
    pub term_budget: usize,
}

impl Default for ResultantOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Auto,
            term_budget: 4000,
        }
    }
}

impl ResultantOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SylvesterMatrix {
    entries: Vec<Vec<MultiPoly>>,
    var: Var,
}

impl SylvesterMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }

    pub fn determinant(&self, opts: &ResultantOptions) -> MultiPoly {
        determinant(&self.entries, opts)
    }
}

/// Sylvester matrix of `p` and `q` with respect to `var`.
pub fn sylvester(p: &MultiPoly, q: &MultiPoly, var: Var) -> Result<SylvesterMatrix> {
    let dp = p.degree(var).filter(|&d| d > 0).ok_or(Error::NothingToEliminate(var))?;
    let dq = q.degree(var).filter(|&d| d > 0).ok_or(Error::NothingToEliminate(var))?;
    Ok(sylvester_formal(p, q, var, dp as usize, dq as usize))
}

/// Sylvester layout for formal degrees `dp >= deg p`, `dq >= deg q`.
fn sylvester_formal(p: &MultiPoly, q: &MultiPoly, var: Var, dp: usize, dq: usize) -> SylvesterMatrix {
    let size = dp + dq;
    let pc = p.coefficients(var);
    let qc = q.coefficients(var);
    let coeff = |cs: &[MultiPoly], k: usize| cs.get(k).cloned().unwrap_or_default();
    let mut entries = vec![vec![MultiPoly::zero(); size]; size];
    for row in 0..dq {
        for k in 0..=dp {
            entries[row][row + k] = coeff(&pc, dp - k);
        }
    }
    for row in 0..dp {
        for k in 0..=dq {
            entries[dq + row][row + k] = coeff(&qc, dq - k);
        }
    }
    SylvesterMatrix { entries, var }
}

/// `Res(P, Q; var)`, the Sylvester determinant. Both inputs need positive degree in `var`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: Var) -> Result<MultiPoly> {
    resultant_with(p, q, var, &ResultantOptions::default())
}

pub fn resultant_with(
    p: &MultiPoly,
    q: &MultiPoly,
    var: Var,
    opts: &ResultantOptions,
) -> Result<MultiPoly> {
    Ok(sylvester(p, q, var)?.determinant(opts))
}

/// Resultant extended to inputs of degree zero in `var` by the usual
/// convention `Res(c, Q) = c^deg Q`.
pub fn resultant_extended(p: &MultiPoly, q: &MultiPoly, var: Var, opts: &ResultantOptions) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero();
    }
    let dp = p.deg(var);
    let dq = q.deg(var);
    match (dp, dq) {
        (0, _) => p.pow(dq),
        (_, 0) => q.pow(dp),
        _ => sylvester_formal(p, q, var, dp as usize, dq as usize).determinant(opts),
    }
}

pub fn determinant(m: &[Vec<MultiPoly>], opts: &ResultantOptions) -> MultiPoly {
    match opts.strategy {
        Strategy::Bareiss => bareiss(m.to_vec(), None).expect("no budget"),
        Strategy::Interpolation => det_interpolate(m),
        Strategy::Auto => bareiss(m.to_vec(), Some(opts.term_budget)).unwrap_or_else(|| det_interpolate(m)),
    }
}

/// Fraction-free elimination over the polynomial ring. Returns `None` when an
/// entry exceeds `budget` terms.
fn bareiss(mut m: Vec<Vec<MultiPoly>>, budget: Option<usize>) -> Option<MultiPoly> {
    let n = m.len();
    if n == 0 {
        return Some(MultiPoly::one());
    }
    // integer rows keep the intermediate arithmetic free of denominators
    let mut scale = Rational::one();
    for row in m.iter_mut() {
        let den = row.iter().fold(BigInt::one(), |acc, e| num_integer::Integer::lcm(&acc, &e.denominator_lcm()));
        if !den.is_one() {
            let f = Rational::from_integer(den);
            for e in row.iter_mut() {
                *e = e.scale(&f);
            }
            scale *= f;
        }
    }
    let mut negate = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Some(MultiPoly::zero());
            };
            m.swap(k, pivot);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                let val = num.div_exact(&prev).expect("Bareiss division is exact");
                if budget.is_some_and(|b| val.num_terms() > b) {
                    return None;
                }
                m[i][j] = val;
            }
            m[i][k] = MultiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].scale(&scale.recip());
    Some(if negate { -det } else { det })
}

/// Determinant of a rational matrix via integer Bareiss.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = Rational::one();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let den = row
                .iter()
                .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
            scale *= Rational::from_integer(den.clone());
            row.iter()
                .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            a.swap(k, pivot);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k].is_zero() {
                if !prev.is_one() || !pivot_row[k].is_one() {
                    for j in k + 1..n {
                        row[j] = &pivot_row[k] * &row[j] / &prev;
                    }
                }
                continue;
            }
            for j in k + 1..n {
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = Rational::from_integer(a[n - 1][n - 1].clone()) / scale;
    if negate {
        -det
    } else {
        det
    }
}

/// Degree bound of the determinant in `var` (min of row and column bounds).
fn det_degree_bound(m: &[Vec<MultiPoly>], var: Var) -> u32 {
    let rows: u32 = m
        .iter()
        .map(|r| r.iter().filter_map(|e| e.degree(var)).max().unwrap_or(0))
        .sum();
    let n = m.len();
    let cols: u32 = (0..n)
        .map(|j| m.iter().filter_map(|r| r[j].degree(var)).max().unwrap_or(0))
        .sum();
    rows.min(cols)
}

/// Sample points 0, 1, -1, 2, -2, ...
fn sample_point(k: usize) -> Rational {
    let half = k.div_ceil(2) as i64;
    if k % 2 == 1 {
        int(half)
    } else {
        int(-half)
    }
}

fn det_interpolate(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let mut vars: Vec<Var> = Vec::new();
    for row in m {
        for e in row {
            for v in e.support() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
    }
    if vars.is_empty() {
        let scalar: Vec<Vec<Rational>> = m
            .iter()
            .map(|r| r.iter().map(|e| e.as_constant().unwrap()).collect())
            .collect();
        return MultiPoly::constant(det_rational(&scalar));
    }
    // evaluate the variable with the largest bound in the innermost layer
    let var = *vars
        .iter()
        .min_by_key(|&&v| det_degree_bound(m, v))
        .unwrap();
    let bound = det_degree_bound(m, var) as usize;
    let mut samples = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let u = sample_point(k);
        let b = Bindings::new().with(var, u.clone());
        let sub: Vec<Vec<MultiPoly>> = m
            .iter()
            .map(|r| r.iter().map(|e| e.evaluate_exact(&b)).collect())
            .collect();
        samples.push((u, det_interpolate(&sub)));
    }
    interpolate_coefficientwise(&samples, var)
}

/// Rebuilds `P(var, rest)` from `(u_k, P(u_k, rest))` samples.
pub fn interpolate_coefficientwise(samples: &[(Rational, MultiPoly)], var: Var) -> MultiPoly {
    let mut keys: Vec<[u32; 4]> = samples
        .iter()
        .flat_map(|(_, p)| p.terms().map(|(e, _)| *e))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let mut out = Vec::new();
    for key in keys {
        let pts: Vec<(Rational, Rational)> = samples
            .iter()
            .map(|(u, p)| (u.clone(), p.coefficient(&key)))
            .collect();
        let uni = UPoly::interpolate(&pts);
        for (k, c) in uni.coeffs().iter().enumerate() {
            let mut e = key;
            e[var.index()] += k as u32;
            out.push((e, c.clone()));
        }
    }
    MultiPoly::from_terms(out)
}

/// Result of eliminating one coordinate from the generating system.
#[derive(Clone, Debug, PartialEq)]
pub struct Eliminant {
    /// Univariate in the surviving coordinate.
    pub poly: UniPolyInT,
    /// The coordinate that was eliminated.
    pub eliminated: Var,
}

impl Eliminant {
    pub fn main_var(&self) -> Var {
        self.poly.var()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Leading coefficient when it does not depend on `t`.
    pub fn leading_constant(&self) -> Option<Rational> {
        let lc = self.poly.leading();
        (lc.degree() == Some(0)).then(|| lc.leading())
    }

    /// `Some(c)` with `self = c * other` when `other` is a rational multiple.
    pub fn proportionality_to(&self, other: &MultiPoly) -> Option<Rational> {
        let mine = self.poly.to_multi();
        let (e, c) = mine.leading_term_graded()?;
        let theirs = other.coefficient(&e);
        if theirs.is_zero() {
            return None;
        }
        let factor = c / theirs;
        (other.scale(&factor) == mine).then_some(factor)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eliminants {
    /// `R_y(x, t)`: y eliminated.
    pub ry: Eliminant,
    /// `R_x(y, t)`: x eliminated.
    pub rx: Eliminant,
}

impl Eliminants {
    pub fn for_axis(&self, main: Var) -> &Eliminant {
        match main {
            Var::X => &self.ry,
            _ => &self.rx,
        }
    }
}

/// Both eliminants, each of full degree `N = n m`.
///
/// The Sylvester matrices use the total degrees `n`, `m` as formal degrees in
/// the eliminated variable, so the leading coefficient is the resultant of the
/// leading forms even when a top power of that variable is missing.
pub fn eliminants(sys: &PolySystem) -> Result<Eliminants> {
    let n = sys.root_count();
    let opts = ResultantOptions::default();
    let build = |eliminated: Var, main: Var| -> Result<Eliminant> {
        let raw = sylvester_formal(&sys.f1, &sys.f2, eliminated, sys.n as usize, sys.m as usize).determinant(&opts);
        if raw.is_zero() {
            return Err(Error::DegenerateSystem(format!(
                "resultant over {eliminated} vanishes identically"
            )));
        }
        let poly = UniPolyInT::from_multi(&raw, main)?;
        if poly.degree() != n {
            return Err(Error::DegenerateSystem(format!(
                "eliminant in {main} has degree {} instead of {n}",
                poly.degree()
            )));
        }
        Ok(Eliminant { poly, eliminated })
    };
    Ok(Eliminants {
        ry: build(Var::Y, Var::X)?,
        rx: build(Var::X, Var::Y)?,
    })
}

/// Resultant of the leading forms and how it relates to the eliminants.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingCheck {
    /// `Res(F1^(n)(xi, 1), F2^(m)(xi, 1); xi)`.
    pub value: Rational,
    /// Same resultant under the substitution `x = 1, y = xi`.
    pub alternate: Rational,
    pub ry_leading: Option<Rational>,
    pub rx_leading: Option<Rational>,
}

impl LeadingCheck {
    /// Both eliminant leading coefficients are constants equal to the value up to sign.
    pub fn consistent(&self) -> bool {
        let abs = num_traits::Signed::abs(&self.value);
        [&self.ry_leading, &self.rx_leading]
            .iter()
            .all(|l| l.as_ref().is_some_and(|l| num_traits::Signed::abs(l) == abs))
            && num_traits::Signed::abs(&self.alternate) == abs
    }
}

/// Resultant of the top-degree forms, which fixes the eliminants' constant leading coefficients.
pub fn leading_coeff_check(sys: &PolySystem) -> Result<LeadingCheck> {
    let (l1, l2) = sys.leading_forms();
    let opts = ResultantOptions::default();
    let dehomogenize = |p: &MultiPoly, set: Var| p.evaluate_exact(&Bindings::new().with(set, int(1)));
    let form_resultant = |free: Var, set: Var| -> Rational {
        let a = dehomogenize(&l1, set);
        let b = dehomogenize(&l2, set);
        let det = sylvester_formal(&a, &b, free, sys.n as usize, sys.m as usize).determinant(&opts);
        det.as_constant()
            .expect("leading forms of a system with time-independent top coefficients")
    };
    if l1.contains(Var::T) || l2.contains(Var::T) {
        return Err(Error::DegenerateSystem(
            "top-degree coefficients depend on t".into(),
        ));
    }
    let value = form_resultant(Var::X, Var::Y);
    if value.is_zero() {
        return Err(Error::DegenerateSystem(
            "leading forms share a common factor; principal coefficient vanishes".into(),
        ));
    }
    let alternate = form_resultant(Var::Y, Var::X);
    let elim = eliminants(sys).ok();
    Ok(LeadingCheck {
        value,
        alternate,
        ry_leading: elim.as_ref().and_then(|e| e.ry.leading_constant()),
        rx_leading: elim.as_ref().and_then(|e| e.rx.leading_constant()),
    })
}

/// `Res(e, de/du; u) / lc(e)`, a polynomial in `t`.
pub fn discriminant(e: &UniPolyInT) -> UPoly {
    let p = e.to_multi();
    let dp = p.differentiate(e.var());
    let r = resultant_extended(&p, &dp, e.var(), &ResultantOptions::default());
    let r = UPoly::from_multi(&r, Var::T).expect("resultant depends on t only");
    r.div_exact(e.leading())
        .expect("leading coefficient divides the resultant with the derivative")
}

/// Monic gcd in `Q[t]` of two discriminants.
pub fn common_factor_d(d1: &UPoly, d2: &UPoly) -> UPoly {
    d1.gcd(d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn linear_pair_matrix() {
        let s = sylvester(&p("x-1"), &p("x+1"), Var::X).unwrap();
        assert_eq!(
            s.entries(),
            &[vec![p("1"), p("-1")], vec![p("1"), p("1")]]
        );
        assert_eq!(resultant(&p("x-1"), &p("x+1"), Var::X).unwrap(), p("2"));
    }

    #[test]
    fn nine_root_sylvester_dimension() {
        let s = sylvester(&p("-2*x^3+y^3+t*x+t*y+y+2"), &p("-x^3-2*x^2*y+t+3"), Var::Y).unwrap();
        assert_eq!(s.dimension(), 4);
    }

    #[test]
    fn zero_degree_is_an_error() {
        assert_eq!(
            sylvester(&p("y+1"), &p("x+1"), Var::X),
            Err(Error::NothingToEliminate(Var::X))
        );
    }

    #[test]
    fn linear_factors_give_root_difference() {
        // Res(x - y, x - t; x) = y - t up to sign
        let r = resultant(&p("x-y"), &p("x-t"), Var::X).unwrap();
        assert!(r == p("t-y") || r == p("y-t"));
    }

    #[test]
    fn strategies_agree() {
        let a = p("x^3*y + 2*t*x - y^2 + 1");
        let b = p("3*x^2 - t*y*x + 5");
        let r1 = resultant_with(&a, &b, Var::X, &ResultantOptions::with_strategy(Strategy::Bareiss)).unwrap();
        let r2 = resultant_with(&a, &b, Var::X, &ResultantOptions::with_strategy(Strategy::Interpolation)).unwrap();
        assert_eq!(r1, r2);
        let tight = ResultantOptions {
            strategy: Strategy::Auto,
            term_budget: 1,
        };
        assert_eq!(resultant_with(&a, &b, Var::X, &tight).unwrap(), r1);
    }

    #[test]
    fn rational_determinant() {
        let m = vec![vec![int(0), int(2)], vec![crate::poly::rat(1, 2), int(3)]];
        assert_eq!(det_rational(&m), int(-1));
    }

    #[test]
    fn linear_system_eliminants() {
        let sys = PolySystem::parse("x - t", "y - 2*t").unwrap();
        let e = eliminants(&sys).unwrap();
        // formal degree 1 in y for x - t: one row of each, det [[0, x - t], [1, -2t]]
        assert_eq!(e.ry.poly.to_multi(), p("t - x"));
        assert_eq!(e.rx.poly.to_multi(), p("y - 2*t"));
    }

    #[test]
    fn shared_leading_factor_is_degenerate() {
        let sys = PolySystem::parse("x*y + x + 1", "x*y - y + 2").unwrap();
        assert!(matches!(leading_coeff_check(&sys), Err(Error::DegenerateSystem(_))));
    }

    #[test]
    fn quadratic_discriminants() {
        let e = UniPolyInT::from_multi(&p("x^2 - t"), Var::X).unwrap();
        let d = discriminant(&e);
        assert_eq!(d.degree(), Some(1));
        assert!(d.coeff(0).is_zero());
        let e = UniPolyInT::from_multi(&p("x^2 + 1"), Var::X).unwrap();
        let d = discriminant(&e);
        assert_eq!(d.degree(), Some(0));
        assert!(!d.is_zero());
    }

    #[test]
    fn common_factor_examples() {
        let a = UPoly::from_ints(&[-1, 0, 1]);
        let b = UPoly::from_ints(&[1, 2, 1]);
        assert_eq!(common_factor_d(&a, &b), UPoly::from_ints(&[1, 1]));
        assert_eq!(
            common_factor_d(&UPoly::from_ints(&[0, 1]), &UPoly::from_ints(&[1, 1])),
            UPoly::one()
        );
    }
}
