//! Particle motion along the worldline: velocities, accelerations, identity
//! continuation across the time grid, and creation/annihilation events.

use num_complex::Complex64;
use num_traits::Zero;

use crate::assemble::{assemble_with, classify, ParticleKind, ParticleState, SystemEval};
use crate::assignment::hungarian;
use crate::config::Tolerances;
use crate::elimination::{common_factor_d, discriminant, eliminants, Eliminants};
use crate::error::{Error, Result};
use crate::poly::{f64_to_rational, int, rational_to_f64, FloatPoly, Rational, Var};
use crate::roots::{horner, solve_at, RootSet};
use crate::sturm::{count_real_roots, isolate_real_roots, refine, IsolatingInterval, SturmSequence};
use crate::system::PolySystem;
use crate::univariate::UniPolyInT;
use crate::upoly::UPoly;

/// Relative derivative size below which the system Jacobian is preferred for the derivative.
const JACOBIAN_SWITCH: f64 = 1e-6;

/// An eliminant with every derivative the motion formulas need.
#[derive(Clone, Debug)]
pub struct AxisDerivatives {
    pub r: UniPolyInT,
    pub ru: UniPolyInT,
    pub rt: UniPolyInT,
    pub ruu: UniPolyInT,
    pub rut: UniPolyInT,
    pub rtt: UniPolyInT,
}

impl AxisDerivatives {
    pub fn new(r: &UniPolyInT) -> Self {
        let ru = r.d_main();
        let rt = r.d_t();
        Self {
            ruu: ru.d_main(),
            rut: ru.d_t(),
            rtt: rt.d_t(),
            r: r.clone(),
            ru,
            rt,
        }
    }

    fn at(&self, t: &Rational) -> AxisAt {
        let c = |p: &UniPolyInT| {
            p.at(t)
                .coeffs()
                .iter()
                .map(|c| Complex64::new(rational_to_f64(c).unwrap_or(f64::NAN), 0.0))
                .collect()
        };
        AxisAt {
            ru: c(&self.ru),
            rt: c(&self.rt),
            ruu: c(&self.ruu),
            rut: c(&self.rut),
            rtt: c(&self.rtt),
        }
    }
}

struct AxisAt {
    ru: Vec<Complex64>,
    rt: Vec<Complex64>,
    ruu: Vec<Complex64>,
    rut: Vec<Complex64>,
    rtt: Vec<Complex64>,
}

fn eval(coeffs: &[Complex64], u: Complex64) -> (Complex64, f64) {
    let r = u.norm();
    let mag = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    (horner(coeffs, u).0, mag)
}

impl AxisAt {
    /// `(du/dt, relative size of dR/du)` from the implicit relation `R(u(t), t) = 0`.
    fn velocity(&self, u: Complex64) -> (Complex64, f64) {
        let (ru, mag) = eval(&self.ru, u);
        let (rt, _) = eval(&self.rt, u);
        let rel = if mag == 0.0 { 0.0 } else { ru.norm() / mag };
        (-rt / ru, rel)
    }

    fn acceleration(&self, u: Complex64, v: Complex64) -> Complex64 {
        let (ru, _) = eval(&self.ru, u);
        let (ruu, _) = eval(&self.ruu, u);
        let (rut, _) = eval(&self.rut, u);
        let (rtt, _) = eval(&self.rtt, u);
        -(ruu * v * v + rut * v * 2.0 + rtt) / ru
    }
}

/// First and second partial derivatives of one generating equation.
#[derive(Clone, Debug)]
struct EquationDerivatives {
    fx: FloatPoly,
    fy: FloatPoly,
    ft: FloatPoly,
    fxx: FloatPoly,
    fxy: FloatPoly,
    fyy: FloatPoly,
    fxt: FloatPoly,
    fyt: FloatPoly,
    ftt: FloatPoly,
}

impl EquationDerivatives {
    fn new(f: &crate::poly::MultiPoly) -> Self {
        let fx = f.differentiate(Var::X);
        let fy = f.differentiate(Var::Y);
        let ft = f.differentiate(Var::T);
        Self {
            fxx: FloatPoly::new(&fx.differentiate(Var::X)),
            fxy: FloatPoly::new(&fx.differentiate(Var::Y)),
            fyy: FloatPoly::new(&fy.differentiate(Var::Y)),
            fxt: FloatPoly::new(&fx.differentiate(Var::T)),
            fyt: FloatPoly::new(&fy.differentiate(Var::T)),
            ftt: FloatPoly::new(&ft.differentiate(Var::T)),
            fx: FloatPoly::new(&fx),
            fy: FloatPoly::new(&fy),
            ft: FloatPoly::new(&ft),
        }
    }

    /// Second total time derivative without the `J a` part.
    fn curvature(&self, at: &[Complex64; 4], v: [Complex64; 2]) -> Complex64 {
        let [vx, vy] = v;
        self.fxx.value(at) * vx * vx
            + self.fxy.value(at) * vx * vy * 2.0
            + self.fyy.value(at) * vy * vy
            + self.fxt.value(at) * vx * 2.0
            + self.fyt.value(at) * vy * 2.0
            + self.ftt.value(at)
    }
}

/// Everything needed to differentiate the motion of the roots.
#[derive(Clone, Debug)]
pub struct Kinematics {
    pub x_axis: AxisDerivatives,
    pub y_axis: AxisDerivatives,
    eval: SystemEval,
    f1: EquationDerivatives,
    f2: EquationDerivatives,
}

/// Kinematics frozen at one time value.
pub struct KinematicsAt<'a> {
    kin: &'a Kinematics,
    t: f64,
    x_axis: AxisAt,
    y_axis: AxisAt,
}

impl Kinematics {
    pub fn new(sys: &PolySystem, el: &Eliminants) -> Self {
        Self {
            x_axis: AxisDerivatives::new(&el.ry.poly),
            y_axis: AxisDerivatives::new(&el.rx.poly),
            eval: SystemEval::new(sys),
            f1: EquationDerivatives::new(&sys.f1),
            f2: EquationDerivatives::new(&sys.f2),
        }
    }

    pub fn system_eval(&self) -> &SystemEval {
        &self.eval
    }

    pub fn at(&self, t: &Rational) -> KinematicsAt<'_> {
        KinematicsAt {
            kin: self,
            t: rational_to_f64(t).unwrap_or(f64::NAN),
            x_axis: self.x_axis.at(t),
            y_axis: self.y_axis.at(t),
        }
    }
}

impl KinematicsAt<'_> {
    fn point(&self, x: Complex64, y: Complex64) -> [Complex64; 4] {
        [x, y, Complex64::new(self.t, 0.0), Complex64::zero()]
    }

    /// `J = dF/d(x, y)`, its determinant and the determinant's relative size.
    fn jacobian(&self, at: &[Complex64; 4]) -> ([[Complex64; 2]; 2], Complex64, f64) {
        let j = [
            [self.kin.f1.fx.value(at), self.kin.f1.fy.value(at)],
            [self.kin.f2.fx.value(at), self.kin.f2.fy.value(at)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let scale = (j[0][0] * j[1][1]).norm() + (j[0][1] * j[1][0]).norm();
        let rel = if scale == 0.0 { 0.0 } else { det.norm() / scale };
        (j, det, rel)
    }

    fn solve2(j: &[[Complex64; 2]; 2], det: Complex64, rhs: [Complex64; 2]) -> [Complex64; 2] {
        [
            (j[1][1] * rhs[0] - j[0][1] * rhs[1]) / det,
            (j[0][0] * rhs[1] - j[1][0] * rhs[0]) / det,
        ]
    }

    /// Velocity of the solution at `(x, y)`, from the eliminants where they are well conditioned.
    pub fn velocity(&self, x: Complex64, y: Complex64, tol: &Tolerances) -> Result<[Complex64; 2]> {
        let (vx, rel_x) = self.x_axis.velocity(x);
        let (vy, rel_y) = self.y_axis.velocity(y);
        if rel_x >= JACOBIAN_SWITCH && rel_y >= JACOBIAN_SWITCH {
            return Ok([vx, vy]);
        }
        let at = self.point(x, y);
        let (j, det, rel_j) = self.jacobian(&at);
        if rel_j < tol.deriv {
            if rel_x >= tol.deriv && rel_y >= tol.deriv {
                return Ok([vx, vy]);
            }
            return Err(Error::NearEvent { t: self.t });
        }
        let rhs = [-self.kin.f1.ft.value(&at), -self.kin.f2.ft.value(&at)];
        let v = Self::solve2(&j, det, rhs);
        Ok([
            if rel_x >= JACOBIAN_SWITCH { vx } else { v[0] },
            if rel_y >= JACOBIAN_SWITCH { vy } else { v[1] },
        ])
    }

    pub fn acceleration(
        &self,
        x: Complex64,
        y: Complex64,
        v: [Complex64; 2],
        tol: &Tolerances,
    ) -> Result<[Complex64; 2]> {
        let (_, rel_x) = self.x_axis.velocity(x);
        let (_, rel_y) = self.y_axis.velocity(y);
        let ax = self.x_axis.acceleration(x, v[0]);
        let ay = self.y_axis.acceleration(y, v[1]);
        if rel_x >= JACOBIAN_SWITCH && rel_y >= JACOBIAN_SWITCH {
            return Ok([ax, ay]);
        }
        let at = self.point(x, y);
        let (j, det, rel_j) = self.jacobian(&at);
        if rel_j < tol.deriv {
            if rel_x >= tol.deriv && rel_y >= tol.deriv {
                return Ok([ax, ay]);
            }
            return Err(Error::NearEvent { t: self.t });
        }
        let rhs = [-self.kin.f1.curvature(&at, v), -self.kin.f2.curvature(&at, v)];
        let a = Self::solve2(&j, det, rhs);
        Ok([
            if rel_x >= JACOBIAN_SWITCH { ax } else { a[0] },
            if rel_y >= JACOBIAN_SWITCH { ay } else { a[1] },
        ])
    }

    /// A few Newton steps on the generating system, each kept only if it lowers the residual.
    pub fn refine(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let (mut x, mut y) = (x, y);
        let mut best = self.kin.eval.residual(x, y, self.t);
        for _ in 0..3 {
            let at = self.point(x, y);
            let (j, det, rel_j) = self.jacobian(&at);
            if rel_j < 1e-8 || best == 0.0 {
                break;
            }
            let f = [-self.kin.eval.f1.value(&at), -self.kin.eval.f2.value(&at)];
            let d = Self::solve2(&j, det, f);
            let limit = 1e-6 * (1.0 + x.norm() + y.norm());
            if !(d[0].norm() + d[1].norm() <= limit) {
                break;
            }
            let (nx, ny) = (x + d[0], y + d[1]);
            let res = self.kin.eval.residual(nx, ny, self.t);
            if res < best {
                best = res;
                x = nx;
                y = ny;
            } else {
                break;
            }
        }
        (x, y)
    }
}

/// `(v_x, v_y)` at a particle straight from the eliminants.
pub fn velocity(el: &Eliminants, p: &ParticleState, t: &Rational, tol: &Tolerances) -> Result<(Complex64, Complex64)> {
    let tf = rational_to_f64(t).unwrap_or(f64::NAN);
    let mut out = [Complex64::zero(); 2];
    for (k, (e, u)) in [(&el.ry.poly, p.x), (&el.rx.poly, p.y)].into_iter().enumerate() {
        let axis = AxisDerivatives::new(e).at(t);
        let (v, rel) = axis.velocity(u);
        if rel < tol.deriv {
            return Err(Error::NearEvent { t: tf });
        }
        out[k] = v;
    }
    Ok((out[0], out[1]))
}

/// `(a_x, a_y)` at a particle from the second total derivative of each eliminant relation.
pub fn acceleration(el: &Eliminants, p: &ParticleState, t: &Rational, tol: &Tolerances) -> Result<(Complex64, Complex64)> {
    let tf = rational_to_f64(t).unwrap_or(f64::NAN);
    let mut out = [Complex64::zero(); 2];
    for (k, (e, u)) in [(&el.ry.poly, p.x), (&el.rx.poly, p.y)].into_iter().enumerate() {
        let axis = AxisDerivatives::new(e).at(t);
        let (v, rel) = axis.velocity(u);
        if rel < tol.deriv {
            return Err(Error::NearEvent { t: tf });
        }
        out[k] = axis.acceleration(u, v);
    }
    Ok((out[0], out[1]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// A conjugate pair splits into two real particles.
    Creation,
    /// Two real particles merge into a conjugate pair.
    Annihilation,
    /// Roots touch without changing the real count.
    Touch,
}

impl EventKind {
    pub fn label(self) -> &'static str {
        match self {
            EventKind::Creation => "creation",
            EventKind::Annihilation => "annihilation",
            EventKind::Touch => "touch",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    /// Isolating interval of a real root of `D(t)`.
    pub t_star: IsolatingInterval,
    pub kind: EventKind,
    /// Distinct real x-roots just before and just after.
    pub real_before: usize,
    pub real_after: usize,
    /// Rational times at which the counts were taken.
    pub probe_before: Rational,
    pub probe_after: Rational,
    pub involved: Vec<usize>,
    pub location: Option<(f64, f64)>,
}

impl Event {
    pub fn approx_time(&self) -> f64 {
        rational_to_f64(&self.t_star.midpoint()).unwrap_or(f64::NAN)
    }
}

/// `D(t)`: monic common factor of both eliminant discriminants.
pub fn event_polynomial(el: &Eliminants) -> UPoly {
    common_factor_d(&discriminant(&el.ry.poly), &discriminant(&el.rx.poly))
}

/// Real roots of `D(t)` in `[a, b]`, classified by the change in the real-root count.
pub fn detect_events(sys: &PolySystem, range: (Rational, Rational), tol: &Tolerances) -> Result<Vec<Event>> {
    let el = eliminants(sys)?;
    let d = event_polynomial(&el);
    detect_events_with(sys, &el, &d, range, tol)
}

pub fn detect_events_with(
    sys: &PolySystem,
    el: &Eliminants,
    d: &UPoly,
    range: (Rational, Rational),
    tol: &Tolerances,
) -> Result<Vec<Event>> {
    if d.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let width = f64_to_rational(tol.event).unwrap_or_else(|| crate::poly::rat(1, 1_000_000));
    let sf = d.squarefree();
    let sturm = SturmSequence::new(&sf);
    let eval = SystemEval::new(sys);
    let mut events = Vec::new();
    for iv in isolate_real_roots(&sf, Some(range)) {
        let iv = refine(&sf, &iv, &width);
        let mut gap = if iv.lo == iv.hi { width.clone() } else { iv.width() };
        let (before, after) = loop {
            let (l, r) = (&iv.lo - &gap, &iv.hi + &gap);
            if sturm.count(&l, &r) == 1 && !sf.eval(&l).is_zero() {
                break (l, r);
            }
            gap = gap / int(2);
        };
        let real_before = count_real_roots(&el.ry.poly.at(&before));
        let real_after = count_real_roots(&el.ry.poly.at(&after));
        let kind = match real_after.cmp(&real_before) {
            std::cmp::Ordering::Greater => EventKind::Creation,
            std::cmp::Ordering::Less => EventKind::Annihilation,
            std::cmp::Ordering::Equal => EventKind::Touch,
        };
        let location = collision_location(el, &eval, &iv.midpoint(), tol);
        events.push(Event {
            t_star: iv,
            kind,
            real_before,
            real_after,
            probe_before: before,
            probe_after: after,
            involved: Vec::new(),
            location,
        });
    }
    Ok(events)
}

/// Real parts of the closest pair of solutions at `t`.
fn collision_location(el: &Eliminants, eval: &SystemEval, t: &Rational, tol: &Tolerances) -> Option<(f64, f64)> {
    let xs = solve_at(&el.ry.poly, t, None, tol).ok()?;
    let ys = solve_at(&el.rx.poly, t, None, tol).ok()?;
    let loose = Tolerances {
        pair: 1e-3,
        conj: 1e-3,
        ..tol.clone()
    };
    let particles = assemble_with(&xs, &ys, eval, t, &loose).ok()?;
    let (i, j) = closest_pair(&particles)?;
    let (a, b) = (&particles[i], &particles[j]);
    Some(((a.x.re + b.x.re) / 2.0, (a.y.re + b.y.re) / 2.0))
}

fn closest_pair(particles: &[ParticleState]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..particles.len() {
        for j in i + 1..particles.len() {
            let d = (particles[i].x - particles[j].x).norm() + (particles[i].y - particles[j].y).norm();
            if best.is_none_or(|b| d < b.2) {
                best = Some((i, j, d));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySample {
    pub t: Rational,
    /// Indexed by particle id.
    pub particles: Vec<ParticleState>,
    /// `None` inside an event's exclusion zone.
    pub velocities: Vec<Option<[Complex64; 2]>>,
    pub accelerations: Vec<Option<[Complex64; 2]>>,
    pub near_event: bool,
}

impl TrajectorySample {
    pub fn t_f64(&self) -> f64 {
        rational_to_f64(&self.t).unwrap_or(f64::NAN)
    }

    pub fn real_count(&self) -> usize {
        self.particles.iter().filter(|p| p.kind == ParticleKind::R).count()
    }

    /// Velocities and accelerations of every particle, if all are available.
    pub fn motion(&self) -> Option<Vec<(&ParticleState, [Complex64; 2], [Complex64; 2])>> {
        if self.near_event {
            return None;
        }
        self.particles
            .iter()
            .zip(&self.velocities)
            .zip(&self.accelerations)
            .map(|((p, v), a)| Some((p, (*v)?, (*a)?)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub events: Vec<Event>,
}

struct State {
    t: Rational,
    xs: RootSet,
    ys: RootSet,
    sample: TrajectorySample,
}

/// Sweeps a time grid for one generating system.
pub struct Tracker {
    pub sys: PolySystem,
    pub eliminants: Eliminants,
    pub d: UPoly,
    pub kinematics: Kinematics,
    pub tol: Tolerances,
}

impl Tracker {
    pub fn new(sys: &PolySystem, tol: &Tolerances) -> Result<Self> {
        let el = eliminants(sys)?;
        Ok(Self::with_eliminants(sys, el, tol))
    }

    pub fn with_eliminants(sys: &PolySystem, el: Eliminants, tol: &Tolerances) -> Self {
        let d = event_polynomial(&el);
        Self {
            kinematics: Kinematics::new(sys, &el),
            sys: sys.clone(),
            eliminants: el,
            d,
            tol: tol.clone(),
        }
    }

    pub fn events(&self, range: (Rational, Rational)) -> Result<Vec<Event>> {
        detect_events_with(&self.sys, &self.eliminants, &self.d, range, &self.tol)
    }

    /// Solves, assembles and differentiates at one time value; ids follow assembly order.
    pub fn snapshot(&self, t: &Rational, warm: Option<(&RootSet, &RootSet)>, flagged: bool) -> Result<(RootSet, RootSet, TrajectorySample)> {
        let solve = |e: &UniPolyInT, w: Option<&RootSet>| {
            solve_at(e, t, w, &self.tol).or_else(|err| match w {
                Some(_) => solve_at(e, t, None, &self.tol),
                None => Err(err),
            })
        };
        let xs = solve(&self.eliminants.ry.poly, warm.map(|w| w.0))?;
        let ys = solve(&self.eliminants.rx.poly, warm.map(|w| w.1))?;
        let eval = self.kinematics.system_eval();
        let mut near_event = flagged;
        let mut particles = match assemble_with(&xs, &ys, eval, t, &self.tol) {
            Ok(p) => p,
            Err(Error::AssemblyFailure { .. }) | Err(Error::UnpairedRoot(_)) => {
                near_event = true;
                let loose = Tolerances {
                    pair: self.tol.pair.max(1e-3),
                    conj: self.tol.conj.max(1e-3),
                    ..self.tol.clone()
                };
                assemble_with(&xs, &ys, eval, t, &loose)?
            }
            Err(e) => return Err(e),
        };
        let at = self.kinematics.at(t);
        if !near_event {
            for p in particles.iter_mut() {
                let (x, y) = at.refine(p.x, p.y);
                p.x = x;
                p.y = y;
                p.residual = eval.residual(x, y, at.t);
            }
        }
        let mut velocities = Vec::with_capacity(particles.len());
        let mut accelerations = Vec::with_capacity(particles.len());
        for p in &particles {
            let motion = if near_event {
                None
            } else {
                at.velocity(p.x, p.y, &self.tol)
                    .and_then(|v| Ok((v, at.acceleration(p.x, p.y, v, &self.tol)?)))
                    .ok()
            };
            if motion.is_none() {
                near_event = true;
            }
            velocities.push(motion.map(|m| m.0));
            accelerations.push(motion.map(|m| m.1));
        }
        if near_event {
            velocities.iter_mut().for_each(|v| *v = None);
            accelerations.iter_mut().for_each(|a| *a = None);
        }
        let sample = TrajectorySample {
            t: t.clone(),
            particles,
            velocities,
            accelerations,
            near_event,
        };
        Ok((xs, ys, sample))
    }

    fn state_at(&self, t: &Rational, prev: Option<&State>, zones: &[(Rational, Rational)]) -> Result<State> {
        let flagged = zones.iter().any(|(lo, hi)| t >= lo && t <= hi);
        let (xs, ys, sample) = self.snapshot(t, prev.map(|p| (&p.xs, &p.ys)), flagged)?;
        Ok(State {
            t: t.clone(),
            xs,
            ys,
            sample,
        })
    }

    /// Samples at every grid point with identities carried by continuation.
    pub fn track(&self, grid: &[Rational]) -> Result<Trajectory> {
        let (Some(first), Some(last)) = (grid.first(), grid.last()) else {
            return Ok(Trajectory {
                samples: Vec::new(),
                events: Vec::new(),
            });
        };
        let mut events = self.events((first.clone(), last.clone()))?;
        let delta = f64_to_rational(self.tol.event).unwrap_or_else(|| crate::poly::rat(1, 1_000_000));
        let zones: Vec<(Rational, Rational)> = events
            .iter()
            .map(|e| (&e.t_star.lo - &delta, &e.t_star.hi + &delta))
            .collect();
        let mut samples: Vec<TrajectorySample> = Vec::with_capacity(grid.len());
        let mut state: Option<State> = None;
        for t in grid {
            let next = match &state {
                None => {
                    let mut s = self.state_at(t, None, &zones)?;
                    let ids: Vec<usize> = (0..s.sample.particles.len()).collect();
                    relabel(&mut s.sample, &ids, &self.tol);
                    s
                }
                Some(prev) => self.advance(prev, t, &zones, 0)?,
            };
            samples.push(next.sample.clone());
            state = Some(next);
        }
        for e in events.iter_mut() {
            attach_ids(e, &samples);
        }
        Ok(Trajectory { samples, events })
    }

    fn advance(&self, prev: &State, target: &Rational, zones: &[(Rational, Rational)], depth: usize) -> Result<State> {
        let mut next = self.state_at(target, Some(prev), zones)?;
        let dt = rational_to_f64(&(target - &prev.t)).unwrap_or(0.0);
        let (assignment, ambiguous) = continuation(&prev.sample, &next.sample, dt);
        let touches_zone = zones.iter().any(|(lo, hi)| !(target < lo || &prev.t > hi));
        if ambiguous && !touches_zone && dt.abs() > self.tol.min_step && depth < 40 {
            let mid = (&prev.t + target) / int(2);
            let half = self.advance(prev, &mid, zones, depth + 1)?;
            return self.advance(&half, target, zones, depth + 1);
        }
        if ambiguous && !touches_zone {
            next.sample.near_event = true;
            next.sample.velocities.iter_mut().for_each(|v| *v = None);
            next.sample.accelerations.iter_mut().for_each(|a| *a = None);
        }
        relabel(&mut next.sample, &assignment, &self.tol);
        Ok(next)
    }
}

/// Matches new particles to the previous ones by distance to the predicted positions.
/// Returns the previous id of every new particle and whether the match was ambiguous.
fn continuation(prev: &TrajectorySample, next: &TrajectorySample, dt: f64) -> (Vec<usize>, bool) {
    let predicted: Vec<[Complex64; 2]> = prev
        .particles
        .iter()
        .enumerate()
        .map(|(i, p)| match (prev.velocities[i], prev.accelerations[i]) {
            (Some(v), Some(a)) => [
                p.x + v[0] * dt + a[0] * (0.5 * dt * dt),
                p.y + v[1] * dt + a[1] * (0.5 * dt * dt),
            ],
            _ => [p.x, p.y],
        })
        .collect();
    let dist: Vec<Vec<f64>> = predicted
        .iter()
        .map(|q| {
            next.particles
                .iter()
                .map(|p| ((p.x - q[0]).norm_sqr() + (p.y - q[1]).norm_sqr()).sqrt())
                .collect()
        })
        .collect();
    let ambiguous = dist.iter().any(|row| {
        let mut sorted = row.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.len() > 1 && sorted[0] > 0.5 * sorted[1]
    });
    let cost: Vec<Vec<f64>> = dist.iter().map(|row| row.iter().map(|d| d * d).collect()).collect();
    let to_new = hungarian(&cost);
    let mut to_prev = vec![0; to_new.len()];
    for (i, &j) in to_new.iter().enumerate() {
        to_prev[j] = i;
    }
    (to_prev, ambiguous)
}

/// Gives particle `k` the id `ids[k]` and reorders everything by id.
fn relabel(sample: &mut TrajectorySample, ids: &[usize], tol: &Tolerances) {
    let n = sample.particles.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| ids[k]);
    let remap = |v: &[Option<[Complex64; 2]>]| order.iter().map(|&k| v[k]).collect::<Vec<_>>();
    sample.velocities = remap(&sample.velocities);
    sample.accelerations = remap(&sample.accelerations);
    sample.particles = order
        .iter()
        .map(|&k| {
            let mut p = sample.particles[k].clone();
            p.id = ids[k];
            p
        })
        .collect();
    if classify(&mut sample.particles, tol).is_err() {
        let loose = Tolerances {
            conj: 1e-3,
            ..tol.clone()
        };
        let _ = classify(&mut sample.particles, &loose);
    }
}

fn attach_ids(event: &mut Event, samples: &[TrajectorySample]) {
    let t = event.approx_time();
    let Some(sample) = samples
        .iter()
        .min_by(|a, b| (a.t_f64() - t).abs().total_cmp(&(b.t_f64() - t).abs()))
    else {
        return;
    };
    let Some((lx, ly)) = event.location else {
        return;
    };
    let mut by_distance: Vec<(f64, usize)> = sample
        .particles
        .iter()
        .map(|p| ((p.x - Complex64::new(lx, 0.0)).norm() + (p.y - Complex64::new(ly, 0.0)).norm(), p.id))
        .collect();
    by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut ids: Vec<usize> = by_distance.iter().take(2).map(|d| d.1).collect();
    ids.sort();
    event.involved = ids;
}

/// Convenience wrapper: eliminate, then track.
pub fn track(sys: &PolySystem, grid: &[Rational], tol: &Tolerances) -> Result<Trajectory> {
    Tracker::new(sys, tol)?.track(grid)
}
