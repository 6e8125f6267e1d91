//! Conservation laws implied by the Vieta relations of the eliminants, and their
//! numeric counterparts over a tracked trajectory.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::config::Tolerances;
use crate::elimination::Eliminants;
use crate::error::{Error, Result};
use crate::poly::{int, rational_to_f64, Rational};
use crate::tracker::TrajectorySample;
use crate::univariate::UniPolyInT;
use crate::upoly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }

    fn pick<T>(self, pair: [T; 2]) -> T {
        let [x, y] = pair;
        match self {
            Axis::X => x,
            Axis::Y => y,
        }
    }
}

/// Exact `sum_k u_k^order` over the roots of one eliminant.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumPoly {
    pub order: usize,
    pub axis: Axis,
    pub poly: UPoly,
}

fn leading_constant(e: &UniPolyInT) -> Result<Rational> {
    let lc = e.leading();
    match lc.degree() {
        Some(0) => Ok(lc.leading()),
        _ => Err(Error::DegenerateSystem(
            "eliminant leading coefficient depends on t".into(),
        )),
    }
}

/// `(-1)^i f_{N-i} / f_N`, the `i`-th elementary symmetric function of the roots.
pub fn vieta_ratio(e: &UniPolyInT, i: usize) -> Result<UPoly> {
    let n = e.degree();
    if i > n {
        return Ok(UPoly::zero());
    }
    let lead = leading_constant(e)?;
    let sign = if i % 2 == 0 { int(1) } else { int(-1) };
    Ok(e.coeff(n - i).scale(&(sign / lead)))
}

/// Power sums of orders `0..=max` by Newton's identities.
pub fn power_sum_table(e: &UniPolyInT, max: usize) -> Result<Vec<UPoly>> {
    let n = e.degree();
    let elem: Vec<UPoly> = (0..=max.min(n)).map(|i| vieta_ratio(e, i)).collect::<Result<_>>()?;
    let elem_at = |i: usize| elem.get(i).cloned().unwrap_or_default();
    let mut p: Vec<UPoly> = vec![UPoly::constant(int(n as i64))];
    for k in 1..=max {
        let mut acc = if k <= n {
            let s = if k % 2 == 1 { int(k as i64) } else { int(-(k as i64)) };
            elem_at(k).scale(&s)
        } else {
            UPoly::zero()
        };
        for i in 1..k.min(n + 1) {
            let term = &elem_at(i) * &p[k - i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        p.push(acc);
    }
    Ok(p)
}

pub fn power_sums(e: &UniPolyInT, order: usize, axis: Axis) -> Result<PowerSumPoly> {
    let poly = power_sum_table(e, order)?.pop().unwrap_or_default();
    Ok(PowerSumPoly { order, axis, poly })
}

/// `sum_k (x_k^2 + y_k^2)` as an exact polynomial in `t`.
pub fn radial_square_sum(el: &Eliminants) -> Result<UPoly> {
    let a = power_sums(&el.ry.poly, 2, Axis::X)?.poly;
    let b = power_sums(&el.rx.poly, 2, Axis::Y)?.poly;
    Ok(&a + &b)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LawId {
    ComMotion(Axis),
    Momentum(Axis),
    ForceSum(Axis),
    Energy,
    AngularMomentum,
    PowerSum(usize, Axis),
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawId::ComMotion(a) => write!(f, "com_motion_{}", a.name()),
            LawId::Momentum(a) => write!(f, "momentum_{}", a.name()),
            LawId::ForceSum(a) => write!(f, "force_sum_{}", a.name()),
            LawId::Energy => write!(f, "energy"),
            LawId::AngularMomentum => write!(f, "angular_momentum"),
            LawId::PowerSum(i, a) => write!(f, "power_sum_{i}_{}", a.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observation {
    pub t: f64,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    pub law: LawId,
    /// The conserved constant, when it follows exactly from the eliminants.
    pub expected: Option<Rational>,
    pub expected_approx: Option<f64>,
    pub observed: Vec<Observation>,
    pub max_drift: f64,
    /// Largest imaginary part of an observed total.
    pub max_imag: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl ConservationReport {
    fn new(law: LawId, expected: Option<Rational>, observed: Vec<Observation>, max_drift: f64, tolerance: f64) -> Self {
        let expected_approx = match &expected {
            Some(e) => rational_to_f64(e),
            None => mean_real(&observed),
        };
        let max_imag = observed.iter().map(|o| o.value.im.abs()).fold(0.0, f64::max);
        let verdict = if max_drift < tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            law,
            expected,
            expected_approx,
            observed,
            max_drift,
            max_imag,
            tolerance,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn mean_real(obs: &[Observation]) -> Option<f64> {
    (!obs.is_empty()).then(|| obs.iter().map(|o| o.value.re).sum::<f64>() / obs.len() as f64)
}

/// Exact centre-of-mass motion of the unit-mass ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterOfMass {
    /// `X(t) = (1/N) sum x_k`.
    pub x: UPoly,
    pub y: UPoly,
    /// `dX/dt`, `dY/dt` when both are linear.
    pub velocity: Option<(Rational, Rational)>,
    /// `d/dt sum x_k` and `d/dt sum y_k`, the total momentum.
    pub total_momentum: Option<(Rational, Rational)>,
}

fn constant_derivative(p: &UPoly) -> Option<Rational> {
    match p.degree() {
        None | Some(0) => Some(Rational::zero()),
        Some(1) => Some(p.coeff(1)),
        _ => None,
    }
}

pub fn center_of_mass(el: &Eliminants) -> Result<CenterOfMass> {
    let n = int(el.ry.poly.degree() as i64);
    let sx = power_sums(&el.ry.poly, 1, Axis::X)?.poly;
    let sy = power_sums(&el.rx.poly, 1, Axis::Y)?.poly;
    let total_momentum = constant_derivative(&sx).zip(constant_derivative(&sy));
    let velocity = total_momentum
        .as_ref()
        .map(|(a, b)| (a / &n, b / &n));
    Ok(CenterOfMass {
        x: sx.scale(&n.recip()),
        y: sy.scale(&n.recip()),
        velocity,
        total_momentum,
    })
}

/// Exact check that the centre of mass moves uniformly along a straight line.
pub fn check_com_motion(el: &Eliminants) -> Result<(CenterOfMass, Vec<ConservationReport>)> {
    let com = center_of_mass(el)?;
    let reports = [Axis::X, Axis::Y]
        .into_iter()
        .map(|axis| {
            let v = com.velocity.as_ref().map(|v| axis.pick([v.0.clone(), v.1.clone()]));
            let drift = if v.is_some() { 0.0 } else { f64::INFINITY };
            ConservationReport::new(LawId::ComMotion(axis), v, Vec::new(), drift, f64::MIN_POSITIVE)
        })
        .collect();
    Ok((com, reports))
}

fn usable(traj: &[TrajectorySample]) -> impl Iterator<Item = (&TrajectorySample, Vec<(&crate::assemble::ParticleState, [Complex64; 2], [Complex64; 2])>)> {
    traj.iter().filter_map(|s| s.motion().map(|m| (s, m)))
}

/// Total momentum against its exact value and the vanishing of the force sum.
pub fn check_momentum(traj: &[TrajectorySample], com: &CenterOfMass, tol: &Tolerances) -> Vec<ConservationReport> {
    let mut reports = Vec::new();
    for axis in [Axis::X, Axis::Y] {
        let k = axis.pick([0, 1]);
        let expected = com
            .total_momentum
            .as_ref()
            .map(|m| axis.pick([m.0.clone(), m.1.clone()]));
        let target = expected.as_ref().and_then(rational_to_f64).unwrap_or(f64::NAN);
        let mut obs = Vec::new();
        let mut drift: f64 = 0.0;
        for (s, motion) in usable(traj) {
            let total: Complex64 = motion.iter().map(|m| m.1[k]).sum();
            drift = drift.max((total - target).norm());
            obs.push(Observation { t: s.t_f64(), value: total });
        }
        if expected.is_none() {
            drift = f64::INFINITY;
        }
        reports.push(ConservationReport::new(LawId::Momentum(axis), expected, obs, drift, tol.momentum));
    }
    for axis in [Axis::X, Axis::Y] {
        let k = axis.pick([0, 1]);
        let mut obs = Vec::new();
        let mut drift: f64 = 0.0;
        for (s, motion) in usable(traj) {
            let total: Complex64 = motion.iter().map(|m| m.2[k]).sum();
            drift = drift.max(total.norm());
            obs.push(Observation { t: s.t_f64(), value: total });
        }
        reports.push(ConservationReport::new(LawId::ForceSum(axis), Some(Rational::zero()), obs, drift, tol.force));
    }
    reports
}

/// `(A_2'' + B_2'') / 2`, the exact value of `sum v^2 + sum a.r`.
pub fn energy_constant(el: &Eliminants) -> Result<Rational> {
    let r2 = radial_square_sum(el)?;
    if r2.degree().unwrap_or(0) > 2 {
        return Err(Error::DegenerateSystem(
            "sum of squared radii is not quadratic in t".into(),
        ));
    }
    Ok(r2.coeff(2))
}

pub fn energy_numeric(motion: &[(&crate::assemble::ParticleState, [Complex64; 2], [Complex64; 2])]) -> Complex64 {
    motion
        .iter()
        .map(|(p, v, a)| v[0] * v[0] + v[1] * v[1] + p.x * a[0] + p.y * a[1])
        .sum()
}

pub fn check_energy(el: &Eliminants, traj: &[TrajectorySample], tol: &Tolerances) -> Result<ConservationReport> {
    let c = energy_constant(el)?;
    let cf = rational_to_f64(&c).unwrap_or(f64::NAN);
    let mut obs = Vec::new();
    let mut drift: f64 = 0.0;
    for (s, motion) in usable(traj) {
        let e = energy_numeric(&motion);
        drift = drift.max((e - cf).norm() / (1.0 + cf.abs()));
        obs.push(Observation { t: s.t_f64(), value: e });
    }
    Ok(ConservationReport::new(LawId::Energy, Some(c), obs, drift, tol.energy))
}

/// Numeric `sum u^order` at every sample against the exact power sum; the
/// expected constant is the `order`-th time derivative of that polynomial.
pub fn check_higher_sums(el: &Eliminants, traj: &[TrajectorySample], order: usize, tol: &Tolerances) -> Result<Vec<ConservationReport>> {
    let mut reports = Vec::new();
    for axis in [Axis::X, Axis::Y] {
        let e = axis.pick([&el.ry.poly, &el.rx.poly]);
        let exact = power_sums(e, order, axis)?.poly;
        let factorial = (1..=order as i64).fold(int(1), |acc, k| acc * int(k));
        let derivative = exact.coeff(order) * factorial;
        let mut obs = Vec::new();
        let mut drift: f64 = 0.0;
        for s in traj {
            let coords: Vec<Complex64> = s.particles.iter().map(|p| axis.pick([p.x, p.y])).collect();
            let total: Complex64 = coords.iter().map(|u| u.powu(order as u32)).sum();
            let scale: f64 = coords.iter().map(|u| u.norm().powi(order as i32)).sum();
            let want = rational_to_f64(&exact.eval(&s.t)).unwrap_or(f64::NAN);
            drift = drift.max((total - want).norm() / (1.0 + scale));
            obs.push(Observation { t: s.t_f64(), value: total });
        }
        reports.push(ConservationReport::new(LawId::PowerSum(order, axis), Some(derivative), obs, drift, tol.power_sum));
    }
    Ok(reports)
}

pub fn angular_momentum_total(motion: &[(&crate::assemble::ParticleState, [Complex64; 2], [Complex64; 2])]) -> Complex64 {
    motion.iter().map(|(p, v, _)| p.x * v[1] - p.y * v[0]).sum()
}

/// Total `M_z = sum (x v_y - y v_x)` per sample. Drift is measured against
/// `expected` when given, otherwise against the mean over the samples.
pub fn angular_momentum_numeric(traj: &[TrajectorySample], expected: Option<Rational>, tol: &Tolerances) -> ConservationReport {
    let obs: Vec<Observation> = usable(traj)
        .map(|(s, motion)| Observation {
            t: s.t_f64(),
            value: angular_momentum_total(&motion),
        })
        .collect();
    let center = match &expected {
        Some(e) => rational_to_f64(e).unwrap_or(f64::NAN),
        None => mean_real(&obs).unwrap_or(0.0),
    };
    let mut drift = obs
        .iter()
        .map(|o| (o.value.re - center).abs() / (1.0 + center.abs()))
        .fold(0.0, f64::max);
    if obs.iter().any(|o| o.value.im.abs() >= tol.imag) {
        drift = drift.max(f64::INFINITY);
    }
    ConservationReport::new(LawId::AngularMomentum, expected, obs, drift, tol.angular)
}

/// Every audit over one trajectory, in a fixed order.
pub fn audit_all(
    el: &Eliminants,
    traj: &[TrajectorySample],
    higher_sums_max: usize,
    angular_exact: Option<Rational>,
    tol: &Tolerances,
) -> Result<Vec<ConservationReport>> {
    let (com, mut reports) = check_com_motion(el)?;
    reports.extend(check_momentum(traj, &com, tol));
    reports.push(check_energy(el, traj, tol)?);
    reports.push(angular_momentum_numeric(traj, angular_exact, tol));
    let n = el.ry.poly.degree();
    for order in 1..=higher_sums_max.min(n) {
        reports.extend(check_higher_sums(el, traj, order, tol)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::eliminants;
    use crate::system::PolySystem;

    fn linear() -> Eliminants {
        eliminants(&PolySystem::parse("x - t", "y - 2*t").unwrap()).unwrap()
    }

    #[test]
    fn linear_motion_laws() {
        let el = linear();
        assert_eq!(radial_square_sum(&el).unwrap(), UPoly::new(vec![int(0), int(0), int(5)]));
        let com = center_of_mass(&el).unwrap();
        assert_eq!(com.velocity, Some((int(1), int(2))));
        assert_eq!(energy_constant(&el).unwrap(), int(5));
        let p3 = power_sums(&el.ry.poly, 3, Axis::X).unwrap().poly;
        assert_eq!(p3, UPoly::new(vec![int(0), int(0), int(0), int(1)]));
    }

    #[test]
    fn newton_identities_on_known_roots() {
        // (u - 1)(u - 2)(u + 3) with no t dependence
        let e = UniPolyInT::from_multi(&crate::parser::parse_poly("x^3 - 7*x + 6").unwrap(), crate::poly::Var::X).unwrap();
        let table = power_sum_table(&e, 5).unwrap();
        let direct = |k: u32| int(1i64.pow(k) + 2i64.pow(k) + (-3i64).pow(k));
        for (k, p) in table.iter().enumerate() {
            assert_eq!(p.coeff(0), direct(k as u32), "order {k}");
        }
        assert_eq!(vieta_ratio(&e, 2).unwrap().coeff(0), int(-7));
        assert_eq!(vieta_ratio(&e, 3).unwrap().coeff(0), int(-6));
    }

    #[test]
    fn law_names() {
        assert_eq!(LawId::PowerSum(3, Axis::Y).to_string(), "power_sum_3_y");
        assert_eq!(LawId::ComMotion(Axis::X).to_string(), "com_motion_x");
    }
}
