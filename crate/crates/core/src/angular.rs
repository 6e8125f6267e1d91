//! Exact total angular momentum by elimination.
//!
//! The numerator `Φ(M, x, y, t)` of `M - (x v_y - y v_x)` is eliminated
//! against the generating system, first in `x` and then in `y`. The product
//! `E(M, t)` contains a proper factor `G(M, t)` of degree `N` whose roots are
//! the per-particle momenta, next to a redundant factor.
//!
//! `E` is only ever formed at a few fixed times, since its degree in `t` runs
//! into the hundreds. The proper factor is found at each sample time as
//! `gcd(Res_y(R_x, E_1), Res_y(R_x, E_2))` in `Q[M]`. Its monic coefficients,
//! times a candidate common denominator (the event polynomial, then 1), are
//! interpolated in `t`, confirmed on held-out times, and freed of their common
//! content.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::assignment::hungarian;
use crate::config::Tolerances;
use crate::elimination::{resultant_extended, Eliminants, ResultantOptions, Strategy};
use crate::error::{Error, Result};
use crate::poly::{format_rational, int, rational_to_f64, Bindings, MultiPoly, Rational, Var};
use crate::roots::solve_poly;
use crate::system::PolySystem;
use crate::tracker::Tracker;
use crate::upoly::UPoly;

/// `M ∂_yR_x ∂_xR_y + x ∂_tR_x ∂_xR_y - y ∂_tR_y ∂_yR_x`.
pub fn phi(el: &Eliminants) -> MultiPoly {
    let ry = el.ry.poly.to_multi();
    let rx = el.rx.poly.to_multi();
    let ry_x = ry.differentiate(Var::X);
    let ry_t = ry.differentiate(Var::T);
    let rx_y = rx.differentiate(Var::Y);
    let rx_t = rx.differentiate(Var::T);
    let m = MultiPoly::var(Var::M);
    let x = MultiPoly::var(Var::X);
    let y = MultiPoly::var(Var::Y);
    &(&(&m * &rx_y) * &ry_x) + &(&(&(&x * &rx_t) * &ry_x) - &(&(&y * &ry_t) * &rx_y))
}

fn interpolation() -> ResultantOptions {
    ResultantOptions::with_strategy(Strategy::Interpolation)
}

fn at_time(p: &MultiPoly, t: &Rational) -> MultiPoly {
    p.evaluate_exact(&Bindings::new().with(Var::T, t.clone()))
}

/// Everything eliminated at one fixed time.
#[derive(Clone, Debug)]
pub struct Slice {
    pub t: Rational,
    /// `Res_x(Φ, F1)` and `Res_x(Φ, F2)`, polynomials in `(M, y)`.
    pub e1: MultiPoly,
    pub e2: MultiPoly,
}

impl Slice {
    pub fn new(sys: &PolySystem, phi: &MultiPoly, t: &Rational) -> Self {
        let p = at_time(phi, t);
        let opts = interpolation();
        Self {
            t: t.clone(),
            e1: resultant_extended(&p, &at_time(&sys.f1, t), Var::X, &opts),
            e2: resultant_extended(&p, &at_time(&sys.f2, t), Var::X, &opts),
        }
    }

    /// Monic `gcd(Res_y(R_x, E_1), Res_y(R_x, E_2))` in `M`.
    pub fn proper_factor(&self, el: &Eliminants) -> UPoly {
        let rx = el.rx.poly.at(&self.t).to_multi(Var::Y);
        let opts = interpolation();
        let b = resultant_extended(&rx, &self.e1, Var::Y, &opts);
        let c = resultant_extended(&rx, &self.e2, Var::Y, &opts);
        let b = UPoly::from_multi(&b, Var::M).unwrap_or_default();
        let c = UPoly::from_multi(&c, Var::M).unwrap_or_default();
        b.gcd(&c)
    }

    /// `E(M, t) = Res_y(E_1, E_2)` at this time.
    pub fn eliminated(&self) -> UPoly {
        let e = resultant_extended(&self.e1, &self.e2, Var::Y, &interpolation());
        UPoly::from_multi(&e, Var::M).unwrap_or_default()
    }
}

/// Sample times 0, 1, -1, 2, -2, ...
pub fn sample_time(k: usize) -> Rational {
    let half = k.div_ceil(2) as i64;
    if k % 2 == 1 {
        int(half)
    } else {
        int(-half)
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Times at which `E` is formed in full and divided by `G`.
    pub verify_times: Vec<Rational>,
    /// Sample times never used for reconstruction that must confirm it.
    pub fresh_points: usize,
    pub max_samples: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            verify_times: vec![crate::poly::rat(1, 2)],
            fresh_points: 3,
            max_samples: 160,
        }
    }
}

/// How `E` splits at one time value.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitCheck {
    pub t: Rational,
    pub e_degree: Option<usize>,
    pub g_degree: Option<usize>,
    /// Degree of `E / G` when the division is exact.
    pub quotient_degree: Option<usize>,
}

/// Largest relative gap between the roots of `G` and numeric per-particle momenta.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMatch {
    pub t: Rational,
    pub max_gap: f64,
}

#[derive(Clone, Debug)]
pub struct AngularMomentumPipeline {
    pub phi: MultiPoly,
    /// Proper factor with coprime integer coefficients.
    pub g: MultiPoly,
    /// Coefficients of `M^N` and `M^(N-1)` in `G`.
    pub alpha: UPoly,
    pub beta: UPoly,
    /// `-beta / alpha`.
    pub m_z: Rational,
    /// `alpha / |f_N|` with `f_N` the eliminants' leading coefficient.
    pub a: UPoly,
    /// `c` with `A = c D` when `A` is a multiple of the event polynomial.
    pub a_over_d: Option<Rational>,
    /// Times whose proper factors went into the reconstruction.
    pub sample_times: Vec<Rational>,
    pub skipped_times: Vec<Rational>,
    pub splits: Vec<SplitCheck>,
    pub matches: Vec<NumericMatch>,
}

impl AngularMomentumPipeline {
    pub fn m_degree(&self) -> usize {
        self.g.deg(Var::M) as usize
    }

    /// `beta / alpha` reduced to a constant exactly.
    pub fn ratio_is_constant(&self) -> bool {
        self.beta.is_zero() || self.beta.proportionality(&self.alpha).is_some()
    }

    pub fn summary(&self) -> String {
        format!("M_z = {} from G of degree {} in M", format_rational(&self.m_z), self.m_degree())
    }
}

/// Lifts the monic proper factors at the sample times to `G(M, t)`, trying each
/// candidate common denominator of their coefficients in turn.
fn reconstruct(points: &[(Rational, UPoly)], n: usize, fresh: usize, dens: &[UPoly]) -> Option<MultiPoly> {
    let (fit, check) = points.split_at(points.len() - fresh);
    dens.iter().find_map(|den| lift(fit, check, n, den))
}

fn lift(fit: &[(Rational, UPoly)], check: &[(Rational, UPoly)], n: usize, den: &UPoly) -> Option<MultiPoly> {
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..n {
        let data: Vec<(Rational, Rational)> = fit.iter().map(|(t, g)| (t.clone(), den.eval(t) * g.coeff(j))).collect();
        let num = UPoly::interpolate(&data);
        if check.iter().any(|(t, g)| num.eval(t) != den.eval(t) * g.coeff(j)) {
            return None;
        }
        coeffs.push(num);
    }
    coeffs.push(den.clone());
    let content = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(UPoly::zero(), |acc, c| if acc.is_zero() { c.monic() } else { acc.gcd(c) });
    let coeffs: Vec<MultiPoly> = coeffs
        .iter()
        .map(|c| c.div_exact(&content).map(|q| q.to_multi(Var::T)))
        .collect::<Option<_>>()?;
    let g = MultiPoly::from_coefficients(Var::M, &coeffs).primitive_part();
    let lead = UPoly::from_multi(&g.coefficients(Var::M)[n], Var::T)?;
    Some(if lead.leading().is_negative() { -g } else { g })
}

fn coefficient_in_t(g: &MultiPoly, k: usize) -> UPoly {
    g.coefficients(Var::M)
        .get(k)
        .and_then(|c| UPoly::from_multi(c, Var::T))
        .unwrap_or_default()
}

fn factor_at(g: &MultiPoly, t: &Rational) -> UPoly {
    UPoly::from_multi(&at_time(g, t), Var::M).unwrap_or_default()
}

/// Per-particle momenta from a numeric snapshot against the roots of `G` at `t`.
fn numeric_match(tracker: &Tracker, g: &UPoly, t: &Rational, tol: &Tolerances) -> Result<NumericMatch> {
    let (_, _, sample) = tracker.snapshot(t, None, false)?;
    let mut momenta = Vec::with_capacity(sample.particles.len());
    for (p, v) in sample.particles.iter().zip(&sample.velocities) {
        let v = v.ok_or(Error::NearEvent {
            t: rational_to_f64(t).unwrap_or(f64::NAN),
        })?;
        momenta.push(p.x * v[1] - p.y * v[0]);
    }
    let coeffs: Vec<Complex64> = g
        .coeffs()
        .iter()
        .map(|c| Complex64::new(rational_to_f64(c).unwrap_or(f64::NAN), 0.0))
        .collect();
    let (roots, _) = solve_poly(&coeffs, None, tol)?;
    if roots.len() != momenta.len() {
        return Ok(NumericMatch {
            t: t.clone(),
            max_gap: f64::INFINITY,
        });
    }
    let cost: Vec<Vec<f64>> = roots
        .iter()
        .map(|r| momenta.iter().map(|m| (r - m).norm() / (1.0 + m.norm())).collect())
        .collect();
    let assignment = hungarian(&cost);
    let max_gap = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .fold(0.0, f64::max);
    Ok(NumericMatch { t: t.clone(), max_gap })
}

/// Runs the elimination, reconstruction and every consistency check.
pub fn angular_momentum_exact(
    sys: &PolySystem,
    tracker: &Tracker,
    opts: &PipelineOptions,
    tol: &Tolerances,
) -> Result<AngularMomentumPipeline> {
    let el = &tracker.eliminants;
    let n = el.ry.poly.degree();
    let phi = phi(el);
    let mut points: Vec<(Rational, UPoly)> = Vec::new();
    let mut skipped = Vec::new();
    let mut g = None;
    let denominators: Vec<UPoly> = if tracker.d.degree().unwrap_or(0) > 0 {
        vec![tracker.d.clone(), UPoly::one()]
    } else {
        vec![UPoly::one()]
    };
    for k in 0..opts.max_samples {
        let t = sample_time(k);
        let factor = Slice::new(sys, &phi, &t).proper_factor(el);
        if factor.degree() != Some(n) {
            skipped.push(t);
            continue;
        }
        points.push((t, factor));
        if points.len() >= opts.fresh_points + 2 {
            g = reconstruct(&points, n, opts.fresh_points, &denominators);
            if g.is_some() {
                break;
            }
        }
    }
    let g = g.ok_or_else(|| {
        Error::PipelineFailure(format!(
            "no polynomial lift of the proper factor from {} sample times",
            points.len()
        ))
    })?;
    let alpha = coefficient_in_t(&g, n);
    let beta = coefficient_in_t(&g, n - 1);
    let ratio = if beta.is_zero() {
        Rational::zero()
    } else {
        beta.proportionality(&alpha).ok_or_else(|| {
            Error::PipelineFailure("beta / alpha depends on t".into())
        })?
    };
    let f_n = el.ry.leading_constant().map(|c| c.abs()).unwrap_or_else(Rational::one);
    let a = alpha.scale(&f_n.recip());
    let a_over_d = if tracker.d.degree().unwrap_or(0) == 0 {
        None
    } else {
        a.proportionality(&tracker.d)
    };
    let mut matches = Vec::new();
    for (t, _) in points.iter().take(3) {
        matches.push(numeric_match(tracker, &factor_at(&g, t), t, tol)?);
    }
    let mut splits = Vec::new();
    for t in &opts.verify_times {
        let slice = Slice::new(sys, &phi, t);
        let e = slice.eliminated();
        let gt = factor_at(&g, t);
        splits.push(SplitCheck {
            t: t.clone(),
            e_degree: e.degree(),
            g_degree: gt.degree(),
            quotient_degree: if gt.is_zero() { None } else { e.div_exact(&gt).and_then(|q| q.degree()) },
        });
        matches.push(numeric_match(tracker, &gt, t, tol)?);
    }
    if let Some(m) = matches.iter().find(|m| !(m.max_gap < 1e-6)) {
        return Err(Error::PipelineFailure(format!(
            "roots of the proper factor miss the numeric momenta at t = {} by {:.3e}",
            format_rational(&m.t),
            m.max_gap
        )));
    }
    Ok(AngularMomentumPipeline {
        phi,
        g,
        alpha,
        beta,
        m_z: -ratio,
        a,
        a_over_d,
        sample_times: points.into_iter().map(|(t, _)| t).collect(),
        skipped_times: skipped,
        splits,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::eliminants;

    #[test]
    fn linear_motion_has_zero_momentum() {
        let sys = PolySystem::parse("x - t", "y - 2*t").unwrap();
        let el = eliminants(&sys).unwrap();
        let slice = Slice::new(&sys, &phi(&el), &int(3));
        assert_eq!(slice.proper_factor(&el), UPoly::new(vec![int(0), int(1)]));
        assert_eq!(slice.eliminated().degree(), Some(1));
    }

    #[test]
    fn linear_motion_pipeline() {
        let sys = PolySystem::parse("x - t", "y - 2*t").unwrap();
        let tol = Tolerances::default();
        let tracker = Tracker::new(&sys, &tol).unwrap();
        let run = angular_momentum_exact(&sys, &tracker, &PipelineOptions::default(), &tol).unwrap();
        assert_eq!(run.m_z, Rational::zero());
        assert_eq!(run.m_degree(), 1);
        assert_eq!(run.splits[0].quotient_degree, Some(0));
    }
}
