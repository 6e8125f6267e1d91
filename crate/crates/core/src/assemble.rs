//! Pairing x-roots with y-roots into solutions of the generating system.

use num_complex::Complex64;

use crate::assignment::{greedy, hungarian, total_cost};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::poly::{rational_to_f64, FloatPoly, Rational};
use crate::roots::RootSet;
use crate::system::PolySystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParticleKind {
    /// Real solution.
    R,
    /// One half of a complex conjugate pair forming a C-particle.
    CMember,
}

impl ParticleKind {
    pub fn label(self) -> &'static str {
        match self {
            ParticleKind::R => "R",
            ParticleKind::CMember => "C",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParticleState {
    pub id: usize,
    pub x: Complex64,
    pub y: Complex64,
    pub kind: ParticleKind,
    pub conjugate_partner: Option<usize>,
    /// `|F1| / (1 + m1) + |F2| / (1 + m2)` with `m` the summed term magnitudes.
    pub residual: f64,
}

/// Floating point copy of the generating system.
#[derive(Clone, Debug)]
pub struct SystemEval {
    pub f1: FloatPoly,
    pub f2: FloatPoly,
}

impl SystemEval {
    pub fn new(sys: &PolySystem) -> Self {
        Self {
            f1: FloatPoly::new(&sys.f1),
            f2: FloatPoly::new(&sys.f2),
        }
    }

    pub fn residual(&self, x: Complex64, y: Complex64, t: f64) -> f64 {
        let at = [x, y, Complex64::new(t, 0.0), Complex64::new(0.0, 0.0)];
        let (v1, m1) = self.f1.eval(&at);
        let (v2, m2) = self.f2.eval(&at);
        v1.norm() / (1.0 + m1) + v2.norm() / (1.0 + m2)
    }
}

/// Residual matrix between every x-root and every y-root.
pub fn residual_matrix(xs: &[Complex64], ys: &[Complex64], eval: &SystemEval, t: f64) -> Vec<Vec<f64>> {
    xs.iter()
        .map(|&x| ys.iter().map(|&y| eval.residual(x, y, t)).collect())
        .collect()
}

/// Matches roots by least total residual and tags real and conjugate-pair solutions.
pub fn assemble(
    xs: &RootSet,
    ys: &RootSet,
    sys: &PolySystem,
    t: &Rational,
    tol: &Tolerances,
) -> Result<Vec<ParticleState>> {
    assemble_with(xs, ys, &SystemEval::new(sys), t, tol)
}

pub fn assemble_with(
    xs: &RootSet,
    ys: &RootSet,
    eval: &SystemEval,
    t: &Rational,
    tol: &Tolerances,
) -> Result<Vec<ParticleState>> {
    if xs.len() != ys.len() {
        return Err(Error::DegenerateSystem(format!(
            "{} x-roots against {} y-roots",
            xs.len(),
            ys.len()
        )));
    }
    let tf = rational_to_f64(t).unwrap_or(f64::NAN);
    let cost = residual_matrix(&xs.roots, &ys.roots, eval, tf);
    let mut matching = greedy(&cost);
    if matching.iter().enumerate().any(|(i, &j)| cost[i][j] >= tol.pair) {
        let optimal = hungarian(&cost);
        if total_cost(&cost, &optimal) < total_cost(&cost, &matching) {
            matching = optimal;
        }
    }
    if let Some((i, &j)) = matching
        .iter()
        .enumerate()
        .find(|(i, &j)| !(cost[*i][j] < tol.pair))
    {
        return Err(Error::AssemblyFailure {
            x: xs.roots[i],
            y: ys.roots[j],
            residual: cost[i][j],
        });
    }
    let mut particles: Vec<ParticleState> = matching
        .iter()
        .enumerate()
        .map(|(i, &j)| ParticleState {
            id: i,
            x: xs.roots[i],
            y: ys.roots[j],
            kind: ParticleKind::R,
            conjugate_partner: None,
            residual: cost[i][j],
        })
        .collect();
    particles.sort_by(|a, b| lex_key(a).partial_cmp(&lex_key(b)).unwrap_or(std::cmp::Ordering::Equal));
    for (k, p) in particles.iter_mut().enumerate() {
        p.id = k;
    }
    classify(&mut particles, tol)?;
    Ok(particles)
}

fn lex_key(p: &ParticleState) -> [f64; 4] {
    [p.x.re, p.x.im, p.y.re, p.y.im]
}

fn is_real(z: Complex64, eps: f64) -> bool {
    z.im.abs() < eps * (1.0 + z.norm())
}

/// Sets kinds and conjugate partners in place; ids must already be final.
pub fn classify(particles: &mut [ParticleState], tol: &Tolerances) -> Result<()> {
    let n = particles.len();
    for p in particles.iter_mut() {
        p.conjugate_partner = None;
        p.kind = if is_real(p.x, tol.real) && is_real(p.y, tol.real) {
            ParticleKind::R
        } else {
            ParticleKind::CMember
        };
    }
    for i in 0..n {
        if particles[i].kind == ParticleKind::R || particles[i].conjugate_partner.is_some() {
            continue;
        }
        let (cx, cy) = (particles[i].x.conj(), particles[i].y.conj());
        let dist = |q: &ParticleState| (q.x - cx).norm() + (q.y - cy).norm();
        let partner = (0..n)
            .filter(|&j| {
                j != i
                    && particles[j].kind == ParticleKind::CMember
                    && particles[j].conjugate_partner.is_none()
            })
            .min_by(|&a, &b| dist(&particles[a]).total_cmp(&dist(&particles[b])));
        let scale = 1.0 + cx.norm() + cy.norm();
        match partner {
            Some(j) if dist(&particles[j]) <= tol.conj * scale => {
                let (id_i, id_j) = (particles[i].id, particles[j].id);
                particles[i].conjugate_partner = Some(id_j);
                particles[j].conjugate_partner = Some(id_i);
            }
            _ => return Err(Error::UnpairedRoot(particles[i].x)),
        }
    }
    Ok(())
}

/// Common real parts of a conjugate pair, where the C-particle is drawn.
pub fn c_particle_position(p: &ParticleState, partner: &ParticleState) -> Result<(f64, f64)> {
    let mutual = p.kind == ParticleKind::CMember
        && partner.kind == ParticleKind::CMember
        && p.conjugate_partner == Some(partner.id)
        && partner.conjugate_partner == Some(p.id);
    if !mutual {
        return Err(Error::NotConjugatePartners(p.id, partner.id));
    }
    Ok(((p.x.re + partner.x.re) / 2.0, (p.y.re + partner.y.re) / 2.0))
}
